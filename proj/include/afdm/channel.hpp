// channel.hpp - Doubly dispersive multipath channel
//
// Each path p carries a complex gain h_p, a delay ell_p in samples and a
// Doppler f_p in cycles per frame (f = n * nu * T_s). For integer delays the
// circular input-output relation is
//
//   r[k] = sum_p h_p exp(j2*pi*f_p*k/n) s[(k - ell_p) mod n]
//
// which in matrix form is H = sum_p h_p Phi_p W^f_p Pi^ell_p.

#pragma once

#include "afdm/framing.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace afdm {

using Rng = std::mt19937_64;

struct Path {
    Complex h{1.0, 0.0};
    double ell = 0.0;   // normalized delay, samples
    double f = 0.0;     // normalized Doppler, cycles per frame

    // ell = tau / T_s, f = n * nu * T_s
    static Path from_physical(Complex h, double tau_s, double nu_hz, std::size_t n, double t_s);

    bool integer_delay() const;
    bool integer_doppler() const;
};

class ChannelModel {
public:
    ChannelModel(std::vector<Path> paths, GridConfig grid, std::uint64_t seed = 0);

    const std::vector<Path>& paths() const { return paths_; }
    const GridConfig& grid() const { return grid_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t n() const { return grid_.n; }
    std::size_t num_paths() const { return paths_.size(); }

    bool integer_delays() const;
    bool integer_dopplers() const;
    // Every |f_p| <= f_max.
    bool doppler_within_budget() const;
    // All (round(ell), round(f)) pairs distinct.
    bool collision_free() const;

    ChannelModel with_paths(std::vector<Path> paths) const;

private:
    std::vector<Path> paths_;
    GridConfig grid_;
    std::uint64_t seed_;
};

// Pi^ell: (Pi^ell s)[k] = s[(k - ell) mod n]. Negative ell shifts forward.
CMatrix pi_power(std::size_t n, long long ell);
// Diagonal of W^f, entry k = exp(j2*pi*f*k/n).
CVector w_power_diagonal(std::size_t n, double f);
CMatrix w_power(std::size_t n, double f);
// Diagonal of Phi for a path of integer delay ell: the first ell entries are
// the CPP rotations exp(-j2*pi*c1*(n^2 - 2n(ell - i))), the rest are one.
CVector phi_diagonal(long long ell, const ChirpParams& p);
CMatrix phi(long long ell, const ChirpParams& p);

inline constexpr int kSincHalfWidth = 16;

// Circular channel on a prefix-free body of length n. Fractional delays use
// circular sinc interpolation over +-half_width taps around round(ell).
CVector apply_time_domain(const ChannelModel& m, const CVector& s, double noise_var, Rng& rng,
                          int half_width = kSincHalfWidth);

// Linear channel over a whole prefixed frame of length n_cpp + n. The Doppler
// clock is zero at the first body sample. Samples before the frame are zero.
CVector apply_to_frame(const ChannelModel& m, const CVector& frame, double noise_var, Rng& rng,
                       int half_width = kSincHalfWidth);

// Adds circular complex Gaussian noise of total variance noise_var per sample.
void add_awgn(CVector& v, double noise_var, Rng& rng);

// H = sum_p h_p Phi_p W^f_p Pi^ell_p. Requires integer delays.
CMatrix build_matrix(const ChannelModel& m, const ChirpParams& p);

// Redraws every gain as CN(0, 1/P).
ChannelModel random_gains(const ChannelModel& m, Rng& rng);

}  // namespace afdm
