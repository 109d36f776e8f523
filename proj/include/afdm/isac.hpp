// isac.hpp - Delay-Doppler path recovery from the AFDM effective channel
//
// With a single pilot on chirp k, the demodulated vector is column k of
// G_AFDM. Path p shows up as one peak at row (k - q_p) mod n, and because the
// coupled-index map is injective under the no-aliasing condition, the row
// identifies (ell_p, f_p) uniquely. Dividing the peak by the closed-form
// phase h'_p / h_p and by the ramp phase exp(j2*pi*r_p*k/n) gives h_p back.

#pragma once

#include "afdm/effective.hpp"

#include <vector>

namespace afdm {

struct PathEstimate {
    int ell_hat = 0;
    int f_hat = 0;
    Complex h_hat;
    double peak_magnitude = 0.0;
    std::size_t row = 0;
};

struct SpuriousPeak {
    std::size_t row = 0;
    double magnitude = 0.0;
};

struct PathEstimates {
    std::vector<PathEstimate> paths;
    std::vector<SpuriousPeak> spurious;   // peaks outside the image of the grid
};

struct PhysicalEstimate {
    double range_delay_s = 0.0;
    double doppler_hz = 0.0;
};

inline constexpr double kDefaultIsacThreshold = 0.3;

// Column k of an already known effective channel.
CVector probe_column(const EffectiveChannel& g, std::size_t pilot_index);

// Sends e_k through modulate -> prefix -> channel -> strip -> demodulate.
CVector probe_column(const ChannelModel& m, const ChirpParams& p, std::size_t pilot_index, double noise_var,
                     Rng& rng);

// Peaks at or above threshold * max|column| are mapped back to the grid.
PathEstimates estimate_paths(const CVector& column, std::size_t pilot_index, const GridConfig& g,
                             const ChirpParams& p, double threshold = kDefaultIsacThreshold);

// tau = ell * T_s, nu = f / (n T_s)
PhysicalEstimate to_physical(const PathEstimate& e, const GridConfig& g);

// Pilot plus zero guards of width (2 f_max + 1)(ell_max + 1) - 1 on both
// sides; other positions are free for data.
struct GuardedPilotLayout {
    std::size_t pilot_index = 0;
    std::vector<std::size_t> guard_indices;
    std::vector<std::size_t> data_indices;
};

GuardedPilotLayout guarded_pilot_layout(const GridConfig& g, std::size_t pilot_index);

}  // namespace afdm
