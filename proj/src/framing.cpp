// framing.cpp - CPP insertion and removal

#include "afdm/framing.hpp"

#include <cmath>
#include <string>

namespace afdm {

void GridConfig::validate() const {
    if (n < 2) {
        throw Error(ErrorCode::InvalidConfiguration, "grid: n must be at least 2");
    }
    if (ell_max < 0 || f_max < 0) {
        throw Error(ErrorCode::InvalidConfiguration, "grid: ell_max and f_max must be non-negative");
    }
    if (n_cpp < static_cast<std::size_t>(ell_max)) {
        throw Error(ErrorCode::InvalidConfiguration,
                    "grid: prefix length " + std::to_string(n_cpp) +
                        " is shorter than the delay spread " + std::to_string(ell_max));
    }
    if (n_cpp > n) {
        throw Error(ErrorCode::InvalidConfiguration, "grid: prefix longer than the block");
    }
    if (!(t_s > 0.0)) {
        throw Error(ErrorCode::InvalidConfiguration, "grid: sample period must be positive");
    }
}

bool GridConfig::no_aliasing() const {
    const long long need = (2LL * f_max + 1) * (static_cast<long long>(ell_max) + 1);
    return static_cast<long long>(n) >= need;
}

CVector cpp_phase_vector(const ChirpParams& p, std::size_t n_cpp) {
    const std::size_t n = p.n();
    if (n_cpp > n) {
        throw Error(ErrorCode::InvalidSize, "cpp_phase_vector: prefix longer than the block");
    }
    const double nd = static_cast<double>(n);
    CVector phases(static_cast<Eigen::Index>(n_cpp));
    if (p.two_n_c1_is_integer()) {
        // c1 = m / (2n) up to rounding of the stored double, whose error grows
        // with n^2 in the phase below. Evaluate the rational phase exactly:
        // c1 (n^2 - 2nb) = m (n - 2b) / 2 turns, i.e. 0 or 1/2.
        const long long m = std::llround(p.two_n_c1());
        for (std::size_t i = 0; i < n_cpp; ++i) {
            const long long turns2 = m * (static_cast<long long>(n) - 2 * static_cast<long long>(n_cpp - i));
            phases[static_cast<Eigen::Index>(i)] = (turns2 % 2 == 0) ? 1.0 : -1.0;
        }
        return phases;
    }
    for (std::size_t i = 0; i < n_cpp; ++i) {
        const double back = static_cast<double>(n_cpp - i);
        phases[static_cast<Eigen::Index>(i)] = phasor_neg(product_turns(p.c1(), nd * nd - 2.0 * nd * back));
    }
    return phases;
}

CVector add_prefix(const ChirpParams& p, const GridConfig& g, const CVector& s) {
    const auto n = static_cast<Eigen::Index>(p.n());
    if (s.size() != n || g.n != p.n()) {
        throw Error(ErrorCode::InvalidSize, "add_prefix: block length mismatch");
    }
    const auto ncpp = static_cast<Eigen::Index>(g.n_cpp);
    if (ncpp > n) {
        throw Error(ErrorCode::InvalidSize, "add_prefix: prefix longer than the block");
    }
    CVector frame(ncpp + n);
    if (ncpp > 0) {
        frame.head(ncpp) = cpp_phase_vector(p, g.n_cpp).cwiseProduct(s.tail(ncpp));
    }
    frame.tail(n) = s;
    return frame;
}

CVector strip_prefix(const GridConfig& g, const CVector& r) {
    const auto n = static_cast<Eigen::Index>(g.n);
    if (r.size() != n + static_cast<Eigen::Index>(g.n_cpp)) {
        throw Error(ErrorCode::InvalidSize, "strip_prefix: frame length does not equal n + n_cpp");
    }
    return r.tail(n);
}

}  // namespace afdm
