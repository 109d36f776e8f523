// effective.hpp - Effective channels in the OFDM and AFDM domains
//
// G = T H T^H with T = F (OFDM) or T = A (AFDM). For integer delay and
// Doppler, and when the chirp phases are n-periodic, every path lands on a
// single cyclic off-diagonal:
//
//   OFDM: h_p  Pi^{f_p}  W^{-ell_p}
//   AFDM: h'_p Pi^{-q_p} W^{-ell_p + 2n c2 q_p},   q_p = 2n c1 ell_p - f_p
//         h'_p = h_p exp(j2*pi*(c1 ell_p^2 - c2 q_p^2))
//
// Off-diagonal d of an n x n matrix is the entry set {(k, (k - d) mod n)},
// which is where Pi^d has its ones.

#pragma once

#include "afdm/channel.hpp"

#include <utility>
#include <vector>

namespace afdm {

enum class EffectiveSource { Direct, ClosedForm };

struct EffectiveChannel {
    CMatrix g;
    TransformDomain domain = TransformDomain::AffineFrequency;
    EffectiveSource source = EffectiveSource::Direct;

    std::size_t n() const { return static_cast<std::size_t>(g.rows()); }
};

struct PathDiagonalForm {
    long long q = 0;              // coupled index
    Complex h_prime;              // gain after the chirp phase factor
    long long shift = 0;          // off-diagonal, (-q) mod n
    double ramp_exponent = 0.0;   // -ell + 2n c2 q
};

// Dense conjugation. Time returns H, Frequency uses F, AffineFrequency uses A(p).
EffectiveChannel effective_direct(const CMatrix& h, const ChirpParams& p, TransformDomain domain);
// Same, with a precomputed transform matrix (A or F).
EffectiveChannel effective_direct(const CMatrix& h, const CMatrix& transform, TransformDomain domain);

long long coupled_index(long long ell, long long f, double c1, std::size_t n);

struct AfdmClosedForm {
    EffectiveChannel channel;
    std::vector<PathDiagonalForm> paths;
};

// Per-path closed form for AFDM. Requires integer ell and f, and n-periodic
// chirp phases for both c1 and c2 (Phi_p = I).
AfdmClosedForm effective_afdm_closed_form(const ChannelModel& m, const ChirpParams& p);
PathDiagonalForm path_diagonal_form(const Path& path, const ChirpParams& p);

EffectiveChannel effective_ofdm_closed_form(const ChannelModel& m);

// (F W^f F^H)_{k,k'} evaluated in closed form.
CMatrix dirichlet_kernel(double f, std::size_t n);

struct CollisionReport {
    std::vector<long long> positions;                               // off-diagonal per path
    std::vector<std::pair<std::size_t, std::size_t>> collided_pairs;  // path index pairs
};

// Time: ell mod n, Frequency: f mod n, AffineFrequency: (-q) mod n.
CollisionReport collision_report(const ChannelModel& m, const ChirpParams& p, TransformDomain domain);

// Magnitude on off-diagonal d, normalized by the total Frobenius energy.
double off_diagonal_energy_fraction(const CMatrix& g, long long d);

}  // namespace afdm
