// test_detection.cpp - Constellations, equalizers, ML detection

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afdm/detection.hpp"
#include "afdm/link.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace afdm;

namespace {

EffectiveChannel wrap(const CMatrix& g) {
    return EffectiveChannel{g, TransformDomain::AffineFrequency, EffectiveSource::Direct};
}

// Push-through MMSE, (G^H G + s2/Es I)^{-1} G^H y, solved with column-pivoted QR.
CVector oracle_mmse(const CMatrix& g, const CVector& y, double noise_var, double es = 1.0) {
    const CMatrix m = g.adjoint() * g + (noise_var / es) * CMatrix::Identity(g.cols(), g.cols());
    return m.colPivHouseholderQr().solve(g.adjoint() * y);
}

Bits random_bits(std::size_t count, std::mt19937_64& rng) {
    std::bernoulli_distribution coin;
    Bits b(count);
    for (auto& v : b) v = coin(rng) ? 1 : 0;
    return b;
}

GridConfig grid(std::size_t n, int ell_max, int f_max) {
    GridConfig g;
    g.n = n;
    g.n_cpp = static_cast<std::size_t>(ell_max);
    g.ell_max = ell_max;
    g.f_max = f_max;
    return g;
}

int hamming(std::size_t a, std::size_t b) { return __builtin_popcountll(a ^ b); }

}  // namespace

TEST_CASE("constellations: energy, labels, Gray property") {
    for (const auto& c : {Constellation::bpsk(), Constellation::qpsk(), Constellation::qam16()}) {
        double energy = 0.0;
        for (const auto& pt : c.points()) energy += std::norm(pt);
        CHECK(energy / double(c.size()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.size() == (std::size_t{1} << c.bits_per_symbol()));
        std::set<std::pair<double, double>> distinct;
        for (const auto& pt : c.points()) distinct.insert({pt.real(), pt.imag()});
        CHECK(distinct.size() == c.size());
        // Nearest neighbours differ in exactly one bit.
        const double dmin = c.min_distance();
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j)
                if (i != j && std::abs(c.points()[i] - c.points()[j]) < dmin + 1e-12) CHECK(hamming(i, j) == 1);
        CHECK(Constellation::by_name(c.name()).points() == c.points());
    }
    CHECK_THROWS_AS(Constellation::by_name("8psk"), Error);

    const auto q = Constellation::qpsk();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(q.points()[0] - Complex(r, r)) < 1e-15);
    CHECK(std::abs(q.points()[1] - Complex(r, -r)) < 1e-15);
    CHECK(std::abs(q.points()[2] - Complex(-r, r)) < 1e-15);
    CHECK(std::abs(q.points()[3] - Complex(-r, -r)) < 1e-15);
    CHECK(q.min_distance() == doctest::Approx(std::sqrt(2.0)));

    const auto b = Constellation::bpsk();
    CHECK(b.points()[0] == Complex(1.0, 0.0));
    CHECK(b.points()[1] == Complex(-1.0, 0.0));

    const auto m16 = Constellation::qam16();
    CHECK(std::abs(m16.points()[0] - Complex(1.0, 1.0) / std::sqrt(10.0)) < 1e-15);
    CHECK(std::abs(m16.points()[0b1111] - Complex(-3.0, -3.0) / std::sqrt(10.0)) < 1e-15);
}

TEST_CASE("map and demap round-trip, Voronoi decisions") {
    std::mt19937_64 rng(1);
    for (const auto& c : {Constellation::bpsk(), Constellation::qpsk(), Constellation::qam16()}) {
        const Bits bits = random_bits(c.bits_per_symbol() * 64, rng);
        const CVector x = c.map_bits(bits);
        CHECK(x.size() == 64);
        CHECK(c.demap(x) == bits);

        std::uniform_real_distribution<double> radius(0.0, 0.499 * c.min_distance());
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        CVector noisy = x;
        for (auto& v : noisy) v += std::polar(radius(rng), angle(rng));
        CHECK(c.demap(noisy) == bits);
        CHECK(c.slice(noisy) == x);
        if (c.bits_per_symbol() > 1) CHECK_THROWS_AS(c.map_bits(Bits(c.bits_per_symbol() * 3 + 1, 0)), Error);
    }
    CHECK_THROWS_AS(Constellation::bpsk().map_bits(Bits{0, 2}), Error);
}

TEST_CASE("detection method names") {
    for (auto m : {DetectionMethod::OneTap, DetectionMethod::Mmse, DetectionMethod::BandedMmse, DetectionMethod::Ml})
        CHECK(parse_detection_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_detection_method("zf"), Error);
}

TEST_CASE("one-tap equalizer") {
    std::mt19937_64 rng(2);
    const CVector y = oracle::random_vector(8, rng);
    const auto r = equalize_one_tap(CVector::Ones(8), y);
    CHECK(r.symbols == y);
    CHECK(r.erasures.empty());

    // Noiseless static OFDM link.
    const ChannelModel lti({Path{{0.8, 0.1}, 0.0, 0.0}, Path{{0.3, -0.4}, 2.0, 0.0}}, grid(16, 2, 0));
    const auto p = ChirpParams::ofdm(16);
    const auto c = Constellation::qpsk();
    const CVector x = c.map_bits(random_bits(32, rng));
    Rng noise(0);
    const CVector y2 = demodulate(p, apply_time_domain(lti, modulate(p, x), 0.0, noise));
    const CVector gd = effective_ofdm_closed_form(lti).g.diagonal();
    CHECK(oracle::max_abs(equalize_one_tap(gd, y2).symbols - x) < 1e-9);

    CVector faded = CVector::Ones(4);
    faded[2] = 1e-17;
    const auto e = equalize_one_tap(faded, CVector::Ones(4));
    CHECK(e.erasures == std::vector<std::size_t>{2});
    CHECK(e.symbols[2] == Complex(0.0, 0.0));
    CHECK(e.symbols[1] == Complex(1.0, 0.0));
    CHECK_THROWS_AS(equalize_one_tap(CVector::Ones(3), CVector::Ones(4)), Error);
}

TEST_CASE("full MMSE") {
    std::mt19937_64 rng(3);
    const CVector y = oracle::random_vector(6, rng);
    const auto id = wrap(CMatrix::Identity(6, 6));
    CHECK(oracle::max_abs(equalize_mmse(id, y, 0.25) - y / 1.25) < 1e-12);

    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix g = oracle::random_matrix(12, 12, rng);
        const CVector x = oracle::random_vector(12, rng);
        CHECK(oracle::max_abs(equalize_mmse(wrap(g), g * x, 0.0) - x) < 1e-8);
        const CVector yy = oracle::random_vector(12, rng);
        CHECK(oracle::max_abs(equalize_mmse(wrap(g), yy, 0.3) - oracle_mmse(g, yy, 0.3)) < 1e-8);
        CHECK(oracle::max_abs(equalize_mmse(wrap(g), yy, 0.3, 2.0) - oracle_mmse(g, yy, 0.3, 2.0)) < 1e-8);
        // MMSE tends to zero forcing.
        const CVector zf = g.partialPivLu().solve(yy);
        CHECK((equalize_mmse(wrap(g), yy, 1e-12) - zf).norm() < 1e-6);
    }

    try {
        equalize_mmse(wrap(CMatrix::Zero(4, 4)), CVector::Ones(4), 0.0);
        FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
        CHECK(e.code() == ErrorCode::Numerical);
        CHECK(e.condition_estimate() >= 1e14);
    }
    CHECK_THROWS_AS(equalize_mmse(id, y, -1.0), Error);
    CHECK_THROWS_AS(equalize_mmse(id, CVector::Ones(5), 0.1), Error);
}

TEST_CASE("banded MMSE equals full MMSE when the band covers the channel") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = (trial % 3 == 0) ? 32 : 64;
        const int ell_max = 2, f_max = 1;
        std::uniform_int_distribution<int> ell_d(0, ell_max), f_d(-f_max, f_max);
        std::vector<Path> paths;
        for (int k = 0; k < 3; ++k) {
            paths.push_back({oracle::random_vector(1, rng)[0], double(ell_d(rng)), double(f_d(rng))});
        }
        const ChannelModel m(paths, grid(n, ell_max, f_max));
        const auto p = ChirpParams::afdm(n, f_max);
        const auto cf = effective_afdm_closed_form(m, p);
        long long band = 0;
        for (const auto& f : cf.paths) band = std::max(band, std::llabs(f.q));
        const CVector y = oracle::random_vector(n, rng);
        for (double nv : {0.01, 0.5}) {
            const auto banded = equalize_banded_mmse(cf.channel, y, nv, static_cast<std::size_t>(band));
            CHECK_FALSE(banded.band_truncated);
            CHECK(oracle::max_abs(banded.symbols - equalize_mmse(cf.channel, y, nv)) < 1e-8);
        }
        const auto wide =
            equalize_banded_mmse(cf.channel, y, 0.1, default_half_bandwidth(ell_max, f_max, false));
        CHECK(oracle::max_abs(wide.symbols - equalize_mmse(cf.channel, y, 0.1)) < 1e-8);
    }
}

TEST_CASE("banded MMSE degenerate and truncated bands") {
    std::mt19937_64 rng(5);
    const CMatrix g = oracle::random_matrix(10, 10, rng);
    const CVector y = oracle::random_vector(10, rng);
    const auto full = equalize_banded_mmse(wrap(g), y, 0.2, 10);
    CHECK(oracle::max_abs(full.symbols - equalize_mmse(wrap(g), y, 0.2)) < 1e-10);
    CHECK_FALSE(full.band_truncated);

    // Fractional Doppler leaks energy outside any tight band.
    const ChannelModel frac({Path{1.0, 0.0, 0.0}, Path{0.7, 1.0, 0.4}}, grid(32, 1, 1));
    const auto p = ChirpParams::afdm(32, 1);
    const auto ge = effective_direct(build_matrix(frac, p), p, TransformDomain::AffineFrequency);
    const CVector yy = oracle::random_vector(32, rng);
    const auto tight = equalize_banded_mmse(ge, yy, 0.1, 3);
    CHECK(tight.band_truncated);
    CHECK(tight.out_of_band_energy > 1e-12);
    CHECK(tight.out_of_band_energy < 1.0);
    CHECK(tight.symbols.size() == 32);

    CHECK(default_half_bandwidth(1, 1, false) == 5);
    CHECK(default_half_bandwidth(3, 2, true) == 23);
}

TEST_CASE("ML: BPSK n=2 by hand") {
    CMatrix g(2, 2);
    g << Complex(1.0, 0.0), Complex(0.4, 0.0), Complex(0.0, 0.0), Complex(0.5, 0.0);
    const CVector y = (CVector(2) << Complex(0.3, 0.0), Complex(-0.6, 0.0)).finished();
    // ||y - Gx||^2 for x in {++, +-, -+, --}: (0.3-1.4)^2+(-1.1)^2, (0.3-0.6)^2+(-0.1)^2,
    // (0.3+0.6)^2+(-1.1)^2, (0.3+1.4)^2+(-0.1)^2. Minimum is (+1, -1).
    const auto c = Constellation::bpsk();
    for (auto s : {MlStrategy::Exhaustive, MlStrategy::SphereDecoding}) {
        const auto r = detect_ml(wrap(g), y, c, s);
        CHECK(r.symbols[0] == Complex(1.0, 0.0));
        CHECK(r.symbols[1] == Complex(-1.0, 0.0));
        CHECK(r.hard_bits == Bits{0, 1});
        CHECK(r.method == DetectionMethod::Ml);
    }
}

TEST_CASE("ML: exhaustive, sphere and brute-force enumeration agree") {
    std::mt19937_64 rng(6);
    for (const auto& c : {Constellation::bpsk(), Constellation::qpsk(), Constellation::qam16()}) {
        const std::size_t n = c.size() == 16 ? 3 : 4;
        for (int trial = 0; trial < 40; ++trial) {
            const CMatrix g = oracle::random_matrix(n, n, rng);
            const CVector x = c.map_bits(random_bits(n * c.bits_per_symbol(), rng));
            const CVector y = g * x + 0.8 * oracle::random_vector(n, rng);
            const CVector ref = oracle::brute_force_ml(g, y, c.points());
            const auto ex = detect_ml(wrap(g), y, c, MlStrategy::Exhaustive);
            const auto sd = detect_ml(wrap(g), y, c, MlStrategy::SphereDecoding);
            CHECK((y - g * ex.symbols).norm() == doctest::Approx((y - g * ref).norm()).epsilon(1e-12));
            CHECK(sd.symbols == ex.symbols);
            // Noiseless input is recovered exactly.
            CHECK(detect_ml(wrap(g), g * x, c).symbols == x);
        }
    }
}

TEST_CASE("ML: sphere decoder at n = 16 recovers noiseless QPSK") {
    std::mt19937_64 rng(7);
    const auto c = Constellation::qpsk();
    const ChannelModel m({Path{{0.7, 0.1}, 0.0, 0.0}, Path{{0.2, -0.6}, 1.0, 1.0}}, grid(16, 1, 1));
    const auto p = ChirpParams::afdm(16, 1);
    const auto g = effective_afdm_closed_form(m, p).channel;
    const CVector x = c.map_bits(random_bits(32, rng));
    CHECK(detect_ml(g, g.g * x, c).symbols == x);
    const CVector y = g.g * x + 0.05 * oracle::random_vector(16, rng);
    CHECK(detect_ml(g, y, c).symbols == x);
}

TEST_CASE("ML refuses sizes it cannot search") {
    const auto c = Constellation::qpsk();
    const auto big = wrap(CMatrix::Identity(9, 9));
    try {
        detect_ml(big, CVector::Ones(9), c, MlStrategy::Exhaustive);
        FAIL("expected refusal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
        CHECK(std::string(e.what()).find("MMSE") != std::string::npos);
    }
    CHECK_THROWS_AS(detect_ml(wrap(CMatrix::Identity(17, 17)), CVector::Ones(17), c), Error);
    CHECK_THROWS_AS(detect_ml(wrap(CMatrix::Identity(7, 7)), CVector::Ones(7), Constellation::qam16(),
                              MlStrategy::Exhaustive),
                    Error);
}

TEST_CASE("ML frame errors never exceed MMSE frame errors over matched trials") {
    Scenario sc;
    sc.grid = grid(8, 1, 1);
    sc.waveform = WaveformPreset::Afdm;
    sc.paths = {PathSpec{GainMode::Rayleigh, {1.0, 0.0}, 0.0, 0.0}, PathSpec{GainMode::Rayleigh, {1.0, 0.0}, 1.0, 1.0}};
    sc.snr_db = {5.0, 10.0, 15.0};
    sc.trials = 3000;
    sc.seed = 123;
    sc.detector = DetectionMethod::Ml;
    const auto ml = run_link(sc);
    sc.detector = DetectionMethod::Mmse;
    const auto mmse = run_link(sc);
    for (std::size_t i = 0; i < ml.points.size(); ++i) {
        // One-sided two-proportion z test at 95%: reject only if ML is
        // significantly worse than MMSE.
        const double n = double(ml.points[i].frames);
        const double a = ml.points[i].fer(), b = mmse.points[i].fer();
        const double pooled = (a + b) / 2.0;
        const double se = std::sqrt(std::max(pooled * (1.0 - pooled) * 2.0 / n, 1e-300));
        MESSAGE("snr " << ml.points[i].snr_db << " dB: FER ml " << a << " mmse " << b);
        CHECK((a - b) / se < 1.645);
    }
}
