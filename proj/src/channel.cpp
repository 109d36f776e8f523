// channel.cpp - Doubly dispersive channel application and matrix model

#include "afdm/channel.hpp"

#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace afdm {

namespace {

long long mod_index(long long k, long long n) {
    const long long r = k % n;
    return r < 0 ? r + n : r;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

// Interpolation taps (delay, weight) over +-half_width around round(ell).
// Integer delays collapse to a single unit tap. On a circular body a window
// wider than n wraps, and taps that land on the same sample add up, exactly
// as the aliased terms of the full sum do.
std::vector<std::pair<long long, double>> delay_taps(double ell, int half_width) {
    if (half_width < 0) {
        throw Error(ErrorCode::InvalidParameter, "sinc window half width must be non-negative");
    }
    const long long center = std::llround(ell);
    if (is_near_integer(ell, 1e-12)) {
        return {{center, 1.0}};
    }
    std::vector<std::pair<long long, double>> taps;
    taps.reserve(static_cast<std::size_t>(2 * half_width + 1));
    for (long long l = center - half_width; l <= center + half_width; ++l) {
        taps.emplace_back(l, sinc(static_cast<double>(l) - ell));
    }
    return taps;
}

}  // namespace

Path Path::from_physical(Complex h, double tau_s, double nu_hz, std::size_t n, double t_s) {
    return Path{h, tau_s / t_s, static_cast<double>(n) * nu_hz * t_s};
}

bool Path::integer_delay() const { return is_near_integer(ell, 1e-12); }
bool Path::integer_doppler() const { return is_near_integer(f, 1e-12); }

ChannelModel::ChannelModel(std::vector<Path> paths, GridConfig grid, std::uint64_t seed)
    : paths_(std::move(paths)), grid_(grid), seed_(seed) {
    grid_.validate();
    if (paths_.empty()) {
        throw Error(ErrorCode::InvalidConfiguration, "channel: at least one path is required");
    }
    for (const auto& path : paths_) {
        if (!(path.ell >= 0.0) || !std::isfinite(path.f)) {
            throw Error(ErrorCode::InvalidConfiguration, "channel: path delay must be non-negative and finite");
        }
        if (path.ell > static_cast<double>(grid_.ell_max) + 1e-12) {
            throw Error(ErrorCode::InvalidConfiguration,
                        "channel: path delay " + std::to_string(path.ell) + " exceeds ell_max " +
                            std::to_string(grid_.ell_max));
        }
    }
}

bool ChannelModel::integer_delays() const {
    for (const auto& p : paths_) if (!p.integer_delay()) return false;
    return true;
}

bool ChannelModel::integer_dopplers() const {
    for (const auto& p : paths_) if (!p.integer_doppler()) return false;
    return true;
}

bool ChannelModel::doppler_within_budget() const {
    for (const auto& p : paths_) {
        if (std::abs(p.f) > static_cast<double>(grid_.f_max) + 1e-12) return false;
    }
    return true;
}

bool ChannelModel::collision_free() const {
    std::set<std::pair<long long, long long>> seen;
    for (const auto& p : paths_) {
        if (!seen.emplace(std::llround(p.ell), std::llround(p.f)).second) return false;
    }
    return true;
}

ChannelModel ChannelModel::with_paths(std::vector<Path> paths) const {
    return ChannelModel(std::move(paths), grid_, seed_);
}

CMatrix pi_power(std::size_t n, long long ell) {
    const auto ni = static_cast<long long>(n);
    CMatrix m = CMatrix::Zero(ni, ni);
    for (long long k = 0; k < ni; ++k) {
        m(k, mod_index(k - ell, ni)) = 1.0;
    }
    return m;
}

CVector w_power_diagonal(std::size_t n, double f) {
    CVector w(static_cast<Eigen::Index>(n));
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[static_cast<Eigen::Index>(k)] = phasor(f * static_cast<double>(k) / nd);
    }
    return w;
}

CMatrix w_power(std::size_t n, double f) {
    return w_power_diagonal(n, f).asDiagonal();
}

CVector phi_diagonal(long long ell, const ChirpParams& p) {
    const auto n = static_cast<long long>(p.n());
    if (ell < 0 || ell > n) {
        throw Error(ErrorCode::InvalidParameter, "phi: delay outside [0, n]");
    }
    const double nd = static_cast<double>(n);
    CVector d = CVector::Ones(n);
    for (long long i = 0; i < ell; ++i) {
        d[i] = phasor_neg(product_turns(p.c1(), nd * nd - 2.0 * nd * static_cast<double>(ell - i)));
    }
    return d;
}

CMatrix phi(long long ell, const ChirpParams& p) {
    return phi_diagonal(ell, p).asDiagonal();
}

void add_awgn(CVector& v, double noise_var, Rng& rng) {
    if (noise_var < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "noise variance must be non-negative");
    }
    if (noise_var == 0.0) return;
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v[k] += Complex(re, im);
    }
}

CVector apply_time_domain(const ChannelModel& m, const CVector& s, double noise_var, Rng& rng,
                          int half_width) {
    const auto n = static_cast<long long>(m.n());
    if (s.size() != n) {
        throw Error(ErrorCode::InvalidSize, "apply_time_domain: signal length does not match n");
    }
    if (noise_var < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "apply_time_domain: noise variance must be non-negative");
    }
    CVector r = CVector::Zero(n);
    for (const auto& path : m.paths()) {
        const auto taps = delay_taps(path.ell, half_width);
        const CVector ramp = w_power_diagonal(m.n(), path.f);
        for (long long k = 0; k < n; ++k) {
            Complex acc{0.0, 0.0};
            for (const auto& [l, weight] : taps) {
                acc += weight * s[mod_index(k - l, n)];
            }
            r[k] += path.h * ramp[k] * acc;
        }
    }
    add_awgn(r, noise_var, rng);
    return r;
}

CVector apply_to_frame(const ChannelModel& m, const CVector& frame, double noise_var, Rng& rng,
                       int half_width) {
    const auto n = static_cast<long long>(m.n());
    const auto ncpp = static_cast<long long>(m.grid().n_cpp);
    const auto len = static_cast<long long>(frame.size());
    if (len != n + ncpp) {
        throw Error(ErrorCode::InvalidSize, "apply_to_frame: frame length does not equal n + n_cpp");
    }
    if (noise_var < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "apply_to_frame: noise variance must be non-negative");
    }
    const double nd = static_cast<double>(n);
    CVector r = CVector::Zero(len);
    for (const auto& path : m.paths()) {
        const auto taps = delay_taps(path.ell, half_width);
        for (long long i = 0; i < len; ++i) {
            Complex acc{0.0, 0.0};
            for (const auto& [l, weight] : taps) {
                const long long src = i - l;
                if (src >= 0 && src < len) acc += weight * frame[src];
            }
            const double t = static_cast<double>(i - ncpp);
            r[i] += path.h * phasor(path.f * t / nd) * acc;
        }
    }
    add_awgn(r, noise_var, rng);
    return r;
}

CMatrix build_matrix(const ChannelModel& m, const ChirpParams& p) {
    if (p.n() != m.n()) {
        throw Error(ErrorCode::InvalidSize, "build_matrix: chirp block length does not match channel");
    }
    if (!m.integer_delays()) {
        throw Error(ErrorCode::Unsupported,
                    "build_matrix: fractional delays have no matrix form here; use apply_time_domain");
    }
    const auto n = static_cast<long long>(m.n());
    CMatrix h = CMatrix::Zero(n, n);
    for (const auto& path : m.paths()) {
        const long long ell = std::llround(path.ell);
        const CVector diag = path.h * phi_diagonal(ell, p).cwiseProduct(w_power_diagonal(m.n(), path.f));
        for (long long k = 0; k < n; ++k) {
            h(k, mod_index(k - ell, n)) += diag[k];
        }
    }
    return h;
}

ChannelModel random_gains(const ChannelModel& m, Rng& rng) {
    const double per_path = 1.0 / static_cast<double>(m.num_paths());
    std::normal_distribution<double> gauss(0.0, std::sqrt(per_path / 2.0));
    std::vector<Path> paths = m.paths();
    for (auto& path : paths) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        path.h = Complex(re, im);
    }
    return m.with_paths(std::move(paths));
}

}  // namespace afdm
