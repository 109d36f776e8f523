// transforms.cpp - DAFT/IDAFT via FFT plus chirp rotations

#include "afdm/transforms.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

namespace afdm {

std::string_view to_string(TransformDomain domain) {
    switch (domain) {
        case TransformDomain::Time: return "time";
        case TransformDomain::Frequency: return "ofdm";
        case TransformDomain::AffineFrequency: return "afdm";
    }
    return "unknown";
}

TransformDomain parse_domain(std::string_view text) {
    if (text == "time") return TransformDomain::Time;
    if (text == "ofdm" || text == "frequency") return TransformDomain::Frequency;
    if (text == "afdm" || text == "affine") return TransformDomain::AffineFrequency;
    throw Error(ErrorCode::InvalidParameter, "unknown transform domain '" + std::string(text) + "'");
}

bool is_near_integer(double x, double tol) {
    return std::abs(x - std::round(x)) <= tol;
}

bool quadratic_phase_is_periodic(double c, std::size_t n) {
    const double nd = static_cast<double>(n);
    return is_near_integer(2.0 * nd * c) && is_near_integer(c * nd * nd);
}

CVector chirp_sequence(double c, std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidSize, "chirp_sequence: length must be positive");
    }
    CVector lambda(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        lambda[static_cast<Eigen::Index>(k)] = phasor_neg(product_turns(c, kd * kd));
    }
    return lambda;
}

ChirpParams::ChirpParams(double c1, double c2, std::size_t n)
    : c1_(c1), c2_(c2), n_(n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidSize, "ChirpParams: block length must be at least 2");
    }
    if (!std::isfinite(c1) || !std::isfinite(c2)) {
        throw Error(ErrorCode::InvalidParameter, "ChirpParams: chirp rates must be finite");
    }
    lambda1_ = chirp_sequence(c1, n);
    lambda2_ = chirp_sequence(c2, n);
    cpp_reduces_to_cp_ = quadratic_phase_is_periodic(c1, n);
}

ChirpParams ChirpParams::ocdm(std::size_t n) {
    const double c = 1.0 / (2.0 * static_cast<double>(n));
    return {c, c, n};
}

ChirpParams ChirpParams::afdm(std::size_t n, int f_max, double c2) {
    if (f_max < 0) {
        throw Error(ErrorCode::InvalidParameter, "ChirpParams::afdm: f_max must be non-negative");
    }
    const double c1 = (2.0 * f_max + 1.0) / (2.0 * static_cast<double>(n));
    return {c1, c2, n};
}

CMatrix dft_matrix(std::size_t n) {
    const auto ni = static_cast<Eigen::Index>(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix f(ni, ni);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
            // (k*m) mod n keeps the phase argument small and exact.
            const double turns = static_cast<double>((k * m) % n) / static_cast<double>(n);
            f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = scale * phasor_neg(turns);
        }
    }
    return f;
}

CMatrix daft_matrix(const ChirpParams& p) {
    return p.lambda2().asDiagonal() * dft_matrix(p.n()) * p.lambda1().asDiagonal();
}

DaftEngine::DaftEngine(ChirpParams params)
    : params_(std::move(params)), in_(params_.n()), out_(params_.n()) {
    fft_.SetFlag(Eigen::FFT<double>::Unscaled);
}

CVector DaftEngine::dft(const CVector& v) {
    const std::size_t n = params_.n();
    if (static_cast<std::size_t>(v.size()) != n) {
        throw Error(ErrorCode::InvalidSize, "dft: input length does not match block length");
    }
    for (std::size_t k = 0; k < n; ++k) in_[k] = v[static_cast<Eigen::Index>(k)];
    fft_.fwd(out_, in_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVector result(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) result[static_cast<Eigen::Index>(k)] = scale * out_[k];
    return result;
}

CVector DaftEngine::idft(const CVector& v) {
    const std::size_t n = params_.n();
    if (static_cast<std::size_t>(v.size()) != n) {
        throw Error(ErrorCode::InvalidSize, "idft: input length does not match block length");
    }
    for (std::size_t k = 0; k < n; ++k) in_[k] = v[static_cast<Eigen::Index>(k)];
    fft_.inv(out_, in_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVector result(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) result[static_cast<Eigen::Index>(k)] = scale * out_[k];
    return result;
}

CVector DaftEngine::modulate(const CVector& x) {
    if (static_cast<std::size_t>(x.size()) != params_.n()) {
        throw Error(ErrorCode::InvalidSize, "modulate: symbol vector length does not match block length");
    }
    const CVector pre = params_.lambda2().conjugate().cwiseProduct(x);
    return params_.lambda1().conjugate().cwiseProduct(idft(pre));
}

CVector DaftEngine::demodulate(const CVector& r) {
    if (static_cast<std::size_t>(r.size()) != params_.n()) {
        throw Error(ErrorCode::InvalidSize, "demodulate: sample vector length does not match block length");
    }
    const CVector pre = params_.lambda1().cwiseProduct(r);
    return params_.lambda2().cwiseProduct(dft(pre));
}

CVector modulate(const ChirpParams& p, const CVector& x) {
    DaftEngine engine(p);
    return engine.modulate(x);
}

CVector demodulate(const ChirpParams& p, const CVector& r) {
    DaftEngine engine(p);
    return engine.demodulate(r);
}

FlopOverhead flop_overhead(std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidSize, "flop_overhead: n must be at least 2");
    }
    FlopOverhead out;
    const double nd = static_cast<double>(n);
    double log2n = 0.0;
    if (std::has_single_bit(n)) {
        log2n = static_cast<double>(std::countr_zero(n));
    } else {
        log2n = std::log2(nd);
        out.non_power_of_two = true;
    }
    out.patch_flops = 12LL * static_cast<long long>(n);
    out.fft_flops = 5.0 * nd * log2n;
    out.relative = 12.0 / (5.0 * log2n);
    return out;
}

}  // namespace afdm
