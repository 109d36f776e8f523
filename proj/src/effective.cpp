// effective.cpp - Effective channel construction and collision geometry

#include "afdm/effective.hpp"

#include <cmath>
#include <string>

namespace afdm {

namespace {

long long mod_index(long long k, long long n) {
    const long long r = k % n;
    return r < 0 ? r + n : r;
}

void require_integer_paths(const ChannelModel& m, const char* who) {
    if (!m.integer_delays() || !m.integer_dopplers()) {
        throw Error(ErrorCode::Unsupported,
                    std::string(who) + ": closed form needs integer delay and Doppler; use effective_direct");
    }
}

}  // namespace

EffectiveChannel effective_direct(const CMatrix& h, const CMatrix& transform, TransformDomain domain) {
    if (h.rows() != h.cols() || transform.rows() != h.rows() || transform.cols() != h.cols()) {
        throw Error(ErrorCode::InvalidSize, "effective_direct: matrix sizes do not match");
    }
    EffectiveChannel out;
    out.domain = domain;
    out.source = EffectiveSource::Direct;
    if (domain == TransformDomain::Time) {
        out.g = h;
    } else {
        out.g.noalias() = transform * h * transform.adjoint();
    }
    return out;
}

EffectiveChannel effective_direct(const CMatrix& h, const ChirpParams& p, TransformDomain domain) {
    if (static_cast<std::size_t>(h.rows()) != p.n()) {
        throw Error(ErrorCode::InvalidSize, "effective_direct: H is not n x n");
    }
    switch (domain) {
        case TransformDomain::Time:
            return effective_direct(h, CMatrix::Identity(h.rows(), h.cols()), domain);
        case TransformDomain::Frequency:
            return effective_direct(h, dft_matrix(p.n()), domain);
        case TransformDomain::AffineFrequency:
            return effective_direct(h, daft_matrix(p), domain);
    }
    throw Error(ErrorCode::InvalidParameter, "effective_direct: unknown domain");
}

long long coupled_index(long long ell, long long f, double c1, std::size_t n) {
    const double coupling = 2.0 * static_cast<double>(n) * c1;
    if (!is_near_integer(coupling)) {
        throw Error(ErrorCode::InvalidConfiguration,
                    "coupled_index: 2*n*c1 = " + std::to_string(coupling) + " is not an integer");
    }
    return std::llround(coupling) * ell - f;
}

PathDiagonalForm path_diagonal_form(const Path& path, const ChirpParams& p) {
    const auto n = static_cast<long long>(p.n());
    const long long ell = std::llround(path.ell);
    const long long f = std::llround(path.f);
    PathDiagonalForm form;
    form.q = coupled_index(ell, f, p.c1(), p.n());
    form.shift = mod_index(-form.q, n);
    form.ramp_exponent = -static_cast<double>(ell) + 2.0 * static_cast<double>(n) * p.c2() * static_cast<double>(form.q);
    const double ell_d = static_cast<double>(ell);
    const double q_d = static_cast<double>(form.q);
    // exp(j2*pi*c1*ell^2) * exp(-j2*pi*c2*q^2)
    form.h_prime = path.h * phasor(product_turns(p.c1(), ell_d * ell_d)) * phasor_neg(product_turns(p.c2(), q_d * q_d));
    return form;
}

AfdmClosedForm effective_afdm_closed_form(const ChannelModel& m, const ChirpParams& p) {
    if (p.n() != m.n()) {
        throw Error(ErrorCode::InvalidSize, "effective_afdm_closed_form: block length mismatch");
    }
    require_integer_paths(m, "effective_afdm_closed_form");
    if (!quadratic_phase_is_periodic(p.c1(), p.n()) || !quadratic_phase_is_periodic(p.c2(), p.n())) {
        throw Error(ErrorCode::Unsupported,
                    "effective_afdm_closed_form: needs 2n*c and c*n^2 integral for c1 and c2; use effective_direct");
    }
    const auto n = static_cast<long long>(p.n());
    AfdmClosedForm out;
    out.channel.g = CMatrix::Zero(n, n);
    out.channel.domain = TransformDomain::AffineFrequency;
    out.channel.source = EffectiveSource::ClosedForm;
    out.paths.reserve(m.num_paths());
    for (const auto& path : m.paths()) {
        const PathDiagonalForm form = path_diagonal_form(path, p);
        const CVector ramp = w_power_diagonal(p.n(), form.ramp_exponent);
        // h' Pi^{-q} W^{r}: row k picks column (k + q) mod n.
        for (long long k = 0; k < n; ++k) {
            const long long col = mod_index(k + form.q, n);
            out.channel.g(k, col) += form.h_prime * ramp[col];
        }
        out.paths.push_back(form);
    }
    return out;
}

EffectiveChannel effective_ofdm_closed_form(const ChannelModel& m) {
    require_integer_paths(m, "effective_ofdm_closed_form");
    const auto n = static_cast<long long>(m.n());
    EffectiveChannel out;
    out.g = CMatrix::Zero(n, n);
    out.domain = TransformDomain::Frequency;
    out.source = EffectiveSource::ClosedForm;
    for (const auto& path : m.paths()) {
        const long long ell = std::llround(path.ell);
        const long long f = std::llround(path.f);
        const CVector ramp = w_power_diagonal(m.n(), -static_cast<double>(ell));
        // h Pi^{f} W^{-ell}: row k picks column (k - f) mod n.
        for (long long k = 0; k < n; ++k) {
            const long long col = mod_index(k - f, n);
            out.g(k, col) += path.h * ramp[col];
        }
    }
    return out;
}

CMatrix dirichlet_kernel(double f, std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidSize, "dirichlet_kernel: n must be at least 2");
    }
    const auto ni = static_cast<long long>(n);
    const double nd = static_cast<double>(n);
    CMatrix d(ni, ni);
    for (long long k = 0; k < ni; ++k) {
        for (long long kp = 0; kp < ni; ++kp) {
            // The kernel is n-periodic in x = f - (k - k').
            const double x = std::remainder(f - static_cast<double>(k - kp), nd);
            if (std::abs(x) < 1e-12) {
                d(k, kp) = 1.0;
                continue;
            }
            const Complex num = 1.0 - phasor(x);
            const Complex den = 1.0 - phasor(x / nd);
            d(k, kp) = num / (nd * den);
        }
    }
    return d;
}

CollisionReport collision_report(const ChannelModel& m, const ChirpParams& p, TransformDomain domain) {
    require_integer_paths(m, "collision_report");
    const auto n = static_cast<long long>(m.n());
    CollisionReport report;
    for (const auto& path : m.paths()) {
        const long long ell = std::llround(path.ell);
        const long long f = std::llround(path.f);
        long long pos = 0;
        switch (domain) {
            case TransformDomain::Time: pos = mod_index(ell, n); break;
            case TransformDomain::Frequency: pos = mod_index(f, n); break;
            case TransformDomain::AffineFrequency: pos = mod_index(-coupled_index(ell, f, p.c1(), p.n()), n); break;
        }
        report.positions.push_back(pos);
    }
    for (std::size_t a = 0; a < report.positions.size(); ++a) {
        for (std::size_t b = a + 1; b < report.positions.size(); ++b) {
            if (report.positions[a] == report.positions[b]) report.collided_pairs.emplace_back(a, b);
        }
    }
    return report;
}

double off_diagonal_energy_fraction(const CMatrix& g, long long d) {
    const long long n = g.rows();
    const double total = g.squaredNorm();
    if (total == 0.0) return 0.0;
    double on = 0.0;
    for (long long k = 0; k < n; ++k) on += std::norm(g(k, mod_index(k - d, n)));
    return on / total;
}

}  // namespace afdm
