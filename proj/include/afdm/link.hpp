// link.hpp - Monte Carlo link simulation and diversity-slope estimation
//
// SNR is E_s/N0 per received complex sample: constellations have unit
// average energy, the modulator is unitary and Rayleigh paths have unit total
// average power, so noise_var = 10^(-snr_db/10).
//
// Every (SNR point, trial) pair draws from its own generators, seeded from
// master_seed by a counter-based split. Results therefore do not depend on
// how trials are spread over threads, and two scenarios that differ only in
// the waveform see the same bits, channel gains and noise samples.

#pragma once

#include "afdm/scenario.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace afdm {

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t frames = 0;

    double ber() const { return bits == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits); }
    double fer() const { return frames == 0 ? 0.0 : static_cast<double>(frame_errors) / static_cast<double>(frames); }
};

struct SlopeEstimate {
    double diversity_order = 0.0;   // minus the fitted slope
    double ci_low = 0.0;            // 95% interval on diversity_order
    double ci_high = 0.0;
    std::size_t points_used = 0;
};

struct BerCurve {
    std::vector<BerPoint> points;
    std::optional<SlopeEstimate> slope;
};

enum class Stream : std::uint64_t { Bits = 0, Channel = 1, Noise = 2 };

// SplitMix64-based derivation of the generator seed for one trial stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t snr_index, std::uint64_t trial, Stream stream);

double noise_variance_for_snr(double snr_db);

struct LinkOptions {
    std::size_t threads = 1;
};

BerCurve run_link(const Scenario& scenario, const LinkOptions& options = {});

// Least-squares slope of log10(BER) against SNR_dB/10 over the points inside
// window_db with nonzero BER. Throws InsufficientErrors with fewer than two.
SlopeEstimate estimate_diversity_slope(const BerCurve& curve, std::pair<double, double> window_db);

// One block-fading draw: Rayleigh paths get fresh CN(0, 1/P) gains, fixed
// paths keep theirs. `nominal` is scenario.nominal_channel().
ChannelModel draw_channel(const Scenario& scenario, const ChannelModel& nominal, Rng& rng);

// Effective channel G seen by the detector for one channel realization,
// built the same way run_link does it.
EffectiveChannel link_effective_channel(const ChannelModel& channel, const ChirpParams& p, TransformDomain domain,
                                        const CMatrix& transform);

// Points where the error count is too small to trust (< min_errors).
std::vector<double> low_error_points(const BerCurve& curve, std::uint64_t min_errors = 100);

}  // namespace afdm
