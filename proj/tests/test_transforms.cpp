// test_transforms.cpp - DAFT modem, chirp sequences, FLOP model

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afdm/transforms.hpp"
#include "oracles.hpp"

#include <random>

using namespace afdm;

namespace {

CMatrix identity(std::size_t n) { return CMatrix::Identity(n, n); }

}  // namespace

TEST_CASE("chirp_sequence against direct evaluation") {
    const CVector zero = chirp_sequence(0.0, 4);
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(zero[k] - Complex(1.0, 0.0)) < 1e-15);

    const CVector eighth = chirp_sequence(1.0 / 8.0, 4);
    CHECK(std::abs(eighth[2] - Complex(-1.0, 0.0)) < 1e-12);
    for (Eigen::Index k = 0; k < 4; ++k) {
        CHECK(std::abs(eighth[k] - oracle::expj(-M_PI * static_cast<double>(k * k) / 4.0)) < 1e-12);
    }

    const CVector v = chirp_sequence(0.13, 8);
    CHECK(oracle::max_abs(v - oracle::chirp(0.13, 8)) < 1e-12);
    for (Eigen::Index k = 0; k < v.size(); ++k) CHECK(std::abs(std::abs(v[k]) - 1.0) < 1e-12);

    CHECK_THROWS_AS(chirp_sequence(0.1, 0), Error);
}

TEST_CASE("ChirpParams invariants") {
    CHECK_THROWS_AS(ChirpParams(0.0, 0.0, 1), Error);
    const ChirpParams p(0.07, 0.011, 8);
    CHECK(p.lambda1().size() == 8);
    CHECK(p.lambda2().size() == 8);
    CHECK((p.lambda1().cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);

    const auto a = ChirpParams::afdm(8, 0);
    CHECK(a.c1() == doctest::Approx(1.0 / 16.0));
    CHECK(a.two_n_c1_is_integer());
    CHECK(a.cpp_reduces_to_cp());
    CHECK(ChirpParams::afdm(32, 2).c1() == doctest::Approx(5.0 / 64.0));
    CHECK(ChirpParams::ocdm(16).c1() == doctest::Approx(1.0 / 32.0));
    CHECK(ChirpParams::ocdm(16).c2() == doctest::Approx(1.0 / 32.0));

    // Odd n: 2nc1 integer but c1 n^2 = 3/2, so the quadratic phase is not
    // n-periodic and the prefix is not a plain CP.
    const ChirpParams odd(1.0 / 6.0, 0.0, 3);
    CHECK(odd.two_n_c1_is_integer());
    CHECK_FALSE(odd.cpp_reduces_to_cp());
    CHECK_FALSE(ChirpParams(0.013, 0.0, 16).cpp_reduces_to_cp());
}

TEST_CASE("domain names round-trip") {
    for (auto d : {TransformDomain::Time, TransformDomain::Frequency, TransformDomain::AffineFrequency}) {
        CHECK(parse_domain(to_string(d)) == d);
    }
    CHECK_THROWS_AS(parse_domain("otfs"), Error);
}

TEST_CASE("daft_matrix reductions and unitarity") {
    for (std::size_t n : {2u, 5u, 8u, 16u}) {
        CHECK(oracle::max_abs(daft_matrix(ChirpParams::ofdm(n)) - oracle::naive_dft_matrix(n)) < 1e-12);
        CHECK(oracle::max_abs(dft_matrix(n) - oracle::naive_dft_matrix(n)) < 1e-12);
    }
    const ChirpParams ocdm(1.0 / 32.0, 1.0 / 32.0, 16);
    const CMatrix a = daft_matrix(ocdm);
    CHECK((a * a.adjoint() - identity(16)).norm() < 1e-10);

    const CMatrix b = daft_matrix(ChirpParams(0.07, 0.011, 8));
    CHECK((b * b.adjoint() - identity(8)).norm() < 1e-10);
}

TEST_CASE("modulator kernel agrees with the explicit inverse-transform sum") {
    // A^H built entry by entry from the modulator sum must match both the
    // dense matrix path and the FFT path.
    std::mt19937_64 rng(5);
    for (auto [c1, c2, n] : {std::tuple{0.07, 0.011, std::size_t{8}}, std::tuple{3.0 / 32.0, 0.001, std::size_t{16}},
                             std::tuple{0.31, -0.2, std::size_t{12}}}) {
        const ChirpParams p(c1, c2, n);
        const CMatrix kernel = oracle::idaft_kernel(c1, c2, n);
        CHECK(oracle::max_abs(kernel - daft_matrix(p).adjoint()) < 1e-10);
        const CVector x = oracle::random_vector(n, rng);
        CHECK(oracle::max_abs(modulate(p, x) - kernel * x) < 1e-10);
    }
}

TEST_CASE("modulate and demodulate reductions") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {2u, 7u, 16u, 60u}) {
        const auto p = ChirpParams::ofdm(n);
        const CVector x = oracle::random_vector(n, rng);
        CHECK(oracle::max_abs(modulate(p, x) - oracle::naive_idft(x)) < 1e-12 * std::sqrt(double(n)) * x.norm());
        CHECK(oracle::max_abs(demodulate(p, x) - oracle::naive_dft(x)) < 1e-12 * std::sqrt(double(n)) * x.norm());
    }
    const ChirpParams p(0.2, 0.3, 8);
    CHECK(modulate(p, CVector::Zero(8)).norm() == 0.0);
    CHECK_THROWS_AS(modulate(p, CVector::Zero(7)), Error);
    CHECK_THROWS_AS(demodulate(p, CVector::Zero(9)), Error);
}

TEST_CASE("demodulate of a dense modulator column recovers the basis vector") {
    const ChirpParams p(0.07, 0.011, 8);
    const CVector r = oracle::idaft_kernel(0.07, 0.011, 8).col(3);
    CVector e3 = CVector::Zero(8);
    e3[3] = 1.0;
    CHECK(oracle::max_abs(demodulate(p, r) - e3) < 1e-10);
}

TEST_CASE("QPSK block through the FFT path matches the dense modulator") {
    const ChirpParams p(3.0 / 32.0, 0.001, 16);
    std::mt19937_64 rng(3);
    std::bernoulli_distribution coin;
    CVector x(16);
    for (auto& v : x) v = Complex(coin(rng) ? 1 : -1, coin(rng) ? 1 : -1) / std::sqrt(2.0);
    CHECK(oracle::max_abs(modulate(p, x) - daft_matrix(p).adjoint() * x) < 1e-10);
}

TEST_CASE("random parameters: unitarity, Parseval, round-trip, FFT equals dense") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> c(-0.5, 0.5);
    std::uniform_int_distribution<std::size_t> size(2, 96);
    DaftEngine engine(ChirpParams::ofdm(2));
    for (int trial = 0; trial < 60; ++trial) {
        const ChirpParams p(c(rng), c(rng), size(rng));
        const CVector x = oracle::random_vector(p.n(), rng);
        const CMatrix a = daft_matrix(p);
        CHECK((a * a.adjoint() - identity(p.n())).norm() < 1e-10);
        const CVector s = modulate(p, x);
        CHECK(std::abs(s.norm() - x.norm()) < 1e-10);
        CHECK(oracle::max_abs(s - a.adjoint() * x) < 1e-10);
        CHECK(oracle::max_abs(demodulate(p, s) - x) < 1e-10);
        DaftEngine local(p);
        CHECK(oracle::max_abs(local.modulate(x) - s) < 1e-12);
    }
}

TEST_CASE("large blocks stay unitary") {
    std::mt19937_64 rng(17);
    for (std::size_t n : {1000u, 1024u}) {
        const ChirpParams p(0.123456, 0.0421, n);
        const CVector x = oracle::random_vector(n, rng);
        DaftEngine engine(p);
        const CVector s = engine.modulate(x);
        CHECK(std::abs(s.norm() - x.norm()) < 1e-10 * x.norm());
        CHECK(oracle::max_abs(engine.demodulate(s) - x) < 1e-10);
        CHECK(oracle::max_abs(s - oracle::idaft_kernel(p.c1(), p.c2(), n) * x) < 1e-10);
    }
}

TEST_CASE("flop_overhead") {
    CHECK(flop_overhead(64).relative == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(flop_overhead(256).relative == doctest::Approx(0.30).epsilon(1e-12));
    CHECK(flop_overhead(1024).relative == doctest::Approx(0.24).epsilon(1e-12));
    const auto f = flop_overhead(64);
    CHECK(f.patch_flops == 12 * 64);
    CHECK(f.fft_flops == doctest::Approx(5.0 * 64 * 6));
    CHECK_FALSE(f.non_power_of_two);
    const auto odd = flop_overhead(96);
    CHECK(odd.non_power_of_two);
    CHECK(odd.relative == doctest::Approx(12.0 / (5.0 * std::log2(96.0))));
    CHECK_THROWS_AS(flop_overhead(1), Error);
}
