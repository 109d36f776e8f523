// isac.cpp - Single-pilot delay-Doppler estimation

#include "afdm/isac.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>

namespace afdm {

namespace {

long long mod_index(long long k, long long n) {
    const long long r = k % n;
    return r < 0 ? r + n : r;
}

}  // namespace

CVector probe_column(const EffectiveChannel& g, std::size_t pilot_index) {
    if (pilot_index >= g.n()) {
        throw Error(ErrorCode::InvalidParameter, "probe_column: pilot index outside the block");
    }
    return g.g.col(static_cast<Eigen::Index>(pilot_index));
}

CVector probe_column(const ChannelModel& m, const ChirpParams& p, std::size_t pilot_index, double noise_var,
                     Rng& rng) {
    if (pilot_index >= p.n() || p.n() != m.n()) {
        throw Error(ErrorCode::InvalidParameter, "probe_column: pilot index or block length invalid");
    }
    DaftEngine engine(p);
    CVector x = CVector::Zero(static_cast<Eigen::Index>(p.n()));
    x[static_cast<Eigen::Index>(pilot_index)] = 1.0;
    const CVector frame = add_prefix(p, m.grid(), engine.modulate(x));
    const CVector received = apply_to_frame(m, frame, noise_var, rng);
    return engine.demodulate(strip_prefix(m.grid(), received));
}

PathEstimates estimate_paths(const CVector& column, std::size_t pilot_index, const GridConfig& g,
                             const ChirpParams& p, double threshold) {
    const auto n = static_cast<long long>(p.n());
    if (column.size() != n || g.n != p.n()) {
        throw Error(ErrorCode::InvalidSize, "estimate_paths: column length does not match block length");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "estimate_paths: threshold must lie in (0, 1)");
    }
    if (!g.no_aliasing()) {
        throw Error(ErrorCode::InvalidConfiguration, "estimate_paths: grid violates the no-aliasing condition");
    }
    const auto k = static_cast<long long>(pilot_index);

    // Row of the peak -> (ell, f, q) over the whole grid.
    struct GridPoint { int ell; int f; long long q; };
    std::map<long long, GridPoint> by_row;
    for (int ell = 0; ell <= g.ell_max; ++ell) {
        for (int f = -g.f_max; f <= g.f_max; ++f) {
            const long long q = coupled_index(ell, f, p.c1(), p.n());
            by_row.emplace(mod_index(k - q, n), GridPoint{ell, f, q});
        }
    }

    const double peak = column.cwiseAbs().maxCoeff();
    PathEstimates out;
    if (peak == 0.0) return out;
    const double nd = static_cast<double>(n);
    for (long long r = 0; r < n; ++r) {
        const double mag = std::abs(column[r]);
        if (mag < threshold * peak) continue;
        const auto it = by_row.find(r);
        if (it == by_row.end()) {
            out.spurious.push_back({static_cast<std::size_t>(r), mag});
            continue;
        }
        const auto [ell, f, q] = it->second;
        const double ell_d = ell;
        const double q_d = static_cast<double>(q);
        // Peak value is h exp(j2pi(c1 ell^2 - c2 q^2)) exp(j2pi ramp k / n).
        const double ramp = -ell_d + 2.0 * nd * p.c2() * q_d;
        const Complex rotation = phasor(product_turns(p.c1(), ell_d * ell_d)) *
                                 phasor_neg(product_turns(p.c2(), q_d * q_d)) *
                                 phasor(ramp * static_cast<double>(k) / nd);
        PathEstimate e;
        e.ell_hat = ell;
        e.f_hat = f;
        e.h_hat = column[r] / rotation;
        e.peak_magnitude = mag;
        e.row = static_cast<std::size_t>(r);
        out.paths.push_back(e);
    }
    return out;
}

PhysicalEstimate to_physical(const PathEstimate& e, const GridConfig& g) {
    if (!(g.t_s > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "to_physical: sample period must be positive");
    }
    return {static_cast<double>(e.ell_hat) * g.t_s,
            static_cast<double>(e.f_hat) / (static_cast<double>(g.n) * g.t_s)};
}

GuardedPilotLayout guarded_pilot_layout(const GridConfig& g, std::size_t pilot_index) {
    const auto n = static_cast<long long>(g.n);
    if (static_cast<long long>(pilot_index) >= n) {
        throw Error(ErrorCode::InvalidParameter, "guarded_pilot_layout: pilot index outside the block");
    }
    const long long guard = (2LL * g.f_max + 1) * (g.ell_max + 1LL) - 1;
    if (2 * guard + 1 > n) {
        throw Error(ErrorCode::InvalidConfiguration, "guarded_pilot_layout: guards do not fit in the block");
    }
    GuardedPilotLayout layout;
    layout.pilot_index = pilot_index;
    std::set<long long> reserved{static_cast<long long>(pilot_index)};
    for (long long d = 1; d <= guard; ++d) {
        reserved.insert(mod_index(static_cast<long long>(pilot_index) + d, n));
        reserved.insert(mod_index(static_cast<long long>(pilot_index) - d, n));
    }
    for (long long i = 0; i < n; ++i) {
        if (i == static_cast<long long>(pilot_index)) continue;
        if (reserved.count(i)) layout.guard_indices.push_back(static_cast<std::size_t>(i));
        else layout.data_indices.push_back(static_cast<std::size_t>(i));
    }
    return layout;
}

}  // namespace afdm
