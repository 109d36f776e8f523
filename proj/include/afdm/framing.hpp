// framing.hpp - Grid configuration and chirp-periodic prefix handling
//
// The prefix position i = 0..n_cpp-1 corresponds to time index
// n' = -n_cpp + i relative to the first body sample.

#pragma once

#include "afdm/transforms.hpp"

namespace afdm {

struct GridConfig {
    std::size_t n = 0;        // block length
    std::size_t n_cpp = 0;    // prefix length in samples
    int ell_max = 0;          // largest delay in samples
    int f_max = 0;            // largest |Doppler| in cycles per frame
    double t_s = 1e-6;        // sample period, seconds

    // Throws InvalidConfiguration if n_cpp < ell_max or the sizes are nonsensical.
    void validate() const;

    // n >= (2 f_max + 1)(ell_max + 1): the coupled-index map is injective.
    bool no_aliasing() const;

    double sample_rate() const { return 1.0 / t_s; }
};

// Entry i is exp(-j2*pi*c1*(n^2 - 2n(n_cpp - i))).
CVector cpp_phase_vector(const ChirpParams& p, std::size_t n_cpp);

// [cpp_phase_vector .* tail(s, n_cpp), s]
CVector add_prefix(const ChirpParams& p, const GridConfig& g, const CVector& s);

// Drops the first n_cpp samples.
CVector strip_prefix(const GridConfig& g, const CVector& r);

}  // namespace afdm
