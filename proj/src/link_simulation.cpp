// link_simulation.cpp - Seeded, thread-count independent BER simulation

#include "afdm/link.hpp"

#include <cmath>
#include <exception>
#include <thread>

namespace afdm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

struct Tally {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t frames = 0;
};

Bits draw_bits(std::size_t count, Rng& rng) {
    Bits bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) word = rng();
        bits[i] = static_cast<std::uint8_t>(word & 1U);
        word >>= 1U;
    }
    return bits;
}

// Per-worker state: FFT plans and fixed matrices are not shared.
class TrialRunner {
public:
    explicit TrialRunner(const Scenario& s)
        : s_(s),
          chirp_(s.chirp()),
          domain_(s.domain()),
          engine_(chirp_),
          constellation_(s.make_constellation()),
          nominal_(s.nominal_channel()),
          transform_(domain_ == TransformDomain::Frequency ? dft_matrix(s.grid.n) : daft_matrix(chirp_)),
          half_bandwidth_(s.effective_half_bandwidth()) {}

    void run(std::size_t snr_index, std::size_t trial, Tally& tally) {
        const double snr_db = s_.snr_db[snr_index];
        Rng bit_rng(derive_seed(s_.seed, snr_index, trial, Stream::Bits));
        Rng channel_rng(derive_seed(s_.seed, snr_index, trial, Stream::Channel));
        Rng noise_rng(derive_seed(s_.seed, snr_index, trial, Stream::Noise));

        const Bits bits = draw_bits(s_.grid.n * constellation_.bits_per_symbol(), bit_rng);
        const CVector x = constellation_.map_bits(bits);
        const CVector frame = add_prefix(chirp_, s_.grid, engine_.modulate(x));
        const ChannelModel channel = draw_channel(s_, nominal_, channel_rng);
        const double noise_var = noise_variance_for_snr(snr_db);
        CVector received = apply_to_frame(channel, frame, 0.0, noise_rng);
        add_awgn(received, noise_var, noise_rng);
        const CVector y = engine_.demodulate(strip_prefix(s_.grid, received));

        const EffectiveChannel g = link_effective_channel(channel, chirp_, domain_, transform_);
        const Bits decided = detect(g, y, noise_var);

        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) errors += (bits[i] != decided[i]) ? 1U : 0U;
        tally.bit_errors += errors;
        tally.bits += bits.size();
        tally.frame_errors += errors > 0 ? 1U : 0U;
        tally.frames += 1;
    }

private:
    Bits detect(const EffectiveChannel& g, const CVector& y, double noise_var) const {
        switch (s_.detector) {
            case DetectionMethod::OneTap: {
                const OneTapResult eq = equalize_one_tap(g.g.diagonal(), y);
                return constellation_.demap(eq.symbols);
            }
            case DetectionMethod::Mmse:
                return constellation_.demap(equalize_mmse(g, y, noise_var));
            case DetectionMethod::BandedMmse:
                return constellation_.demap(equalize_banded_mmse(g, y, noise_var, half_bandwidth_).symbols);
            case DetectionMethod::Ml:
                return detect_ml(g, y, constellation_).hard_bits;
        }
        throw Error(ErrorCode::InvalidConfiguration, "unknown detector");
    }

    const Scenario& s_;
    ChirpParams chirp_;
    TransformDomain domain_;
    DaftEngine engine_;
    Constellation constellation_;
    ChannelModel nominal_;
    CMatrix transform_;
    std::size_t half_bandwidth_;
};

}  // namespace

ChannelModel draw_channel(const Scenario& s, const ChannelModel& nominal, Rng& rng) {
    const double per_path = 1.0 / static_cast<double>(s.paths.size());
    std::normal_distribution<double> gauss(0.0, std::sqrt(per_path / 2.0));
    std::vector<Path> paths = nominal.paths();
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (s.paths[i].mode == GainMode::Rayleigh) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            paths[i].h = Complex(re, im);
        }
    }
    return nominal.with_paths(std::move(paths));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t snr_index, std::uint64_t trial, Stream stream) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ snr_index);
    h = splitmix64(h ^ trial);
    return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

double noise_variance_for_snr(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

EffectiveChannel link_effective_channel(const ChannelModel& channel, const ChirpParams& p, TransformDomain domain,
                                        const CMatrix& transform) {
    if (channel.integer_delays()) {
        return effective_direct(build_matrix(channel, p), transform, domain);
    }
    // Fractional delays: probe the frame-level channel with each basis vector.
    const auto n = static_cast<Eigen::Index>(p.n());
    const GridConfig& grid = channel.grid();
    Rng unused(0);
    CMatrix h(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        CVector e = CVector::Zero(n);
        e[k] = 1.0;
        const CVector frame = add_prefix(p, grid, e);
        h.col(k) = strip_prefix(grid, apply_to_frame(channel, frame, 0.0, unused));
    }
    return effective_direct(h, transform, domain);
}

BerCurve run_link(const Scenario& scenario, const LinkOptions& options) {
    scenario.validate();
    const std::size_t threads = std::max<std::size_t>(1, options.threads);
    BerCurve curve;
    for (std::size_t si = 0; si < scenario.snr_db.size(); ++si) {
        std::vector<Tally> tallies(threads);
        std::vector<std::exception_ptr> failures(threads);
        auto work = [&](std::size_t worker) {
            try {
                TrialRunner runner(scenario);
                const std::size_t begin = scenario.trials * worker / threads;
                const std::size_t end = scenario.trials * (worker + 1) / threads;
                for (std::size_t t = begin; t < end; ++t) runner.run(si, t, tallies[worker]);
            } catch (...) {
                failures[worker] = std::current_exception();
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (const auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
        BerPoint point;
        point.snr_db = scenario.snr_db[si];
        for (const auto& t : tallies) {
            point.bit_errors += t.bit_errors;
            point.bits += t.bits;
            point.frame_errors += t.frame_errors;
            point.frames += t.frames;
        }
        curve.points.push_back(point);
    }
    return curve;
}

SlopeEstimate estimate_diversity_slope(const BerCurve& curve, std::pair<double, double> window_db) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : curve.points) {
        if (p.snr_db < window_db.first || p.snr_db > window_db.second) continue;
        const double ber = p.ber();
        if (!(ber > 0.0)) continue;
        xs.push_back(p.snr_db / 10.0);
        ys.push_back(std::log10(ber));
    }
    if (xs.size() < 2) {
        throw Error(ErrorCode::InsufficientErrors,
                    "estimate_diversity_slope: fewer than two SNR points with errors in the window; raise trials");
    }
    const double count = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw Error(ErrorCode::InsufficientErrors, "estimate_diversity_slope: all points share one SNR");
    }
    const double slope = sxy / sxx;
    SlopeEstimate out;
    out.diversity_order = -slope;
    out.points_used = xs.size();
    double half = 0.0;
    if (xs.size() > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double fit = my + slope * (xs[i] - mx);
            sse += (ys[i] - fit) * (ys[i] - fit);
        }
        const double se = std::sqrt(sse / (count - 2.0) / sxx);
        half = 1.96 * se;
    }
    out.ci_low = out.diversity_order - half;
    out.ci_high = out.diversity_order + half;
    return out;
}

std::vector<double> low_error_points(const BerCurve& curve, std::uint64_t min_errors) {
    std::vector<double> out;
    for (const auto& p : curve.points) {
        if (p.bit_errors < min_errors) out.push_back(p.snr_db);
    }
    return out;
}

}  // namespace afdm
