// equalizers.cpp - One-tap, full MMSE and cyclic-banded MMSE equalizers

#include "afdm/detection.hpp"

#include <cmath>
#include <string>

namespace afdm {

namespace {

// Cyclic offset i - j reduced to (-n/2, n/2].
long long cyclic_offset(long long i, long long j, long long n) {
    long long d = (i - j) % n;
    if (d < 0) d += n;
    if (d > n / 2) d -= n;
    return d;
}

long long mod_index(long long k, long long n) {
    const long long r = k % n;
    return r < 0 ? r + n : r;
}

// Lower-triangular Cholesky factor stored row by row over its envelope.
// Rows below n - m are dense from column 0 (they hold the wrap-around
// corner); every other row starts at i - m.
class EnvelopeCholesky {
public:
    EnvelopeCholesky(long long n, long long m) : n_(n), m_(m), first_(n), rows_(n) {
        for (long long i = 0; i < n; ++i) {
            first_[i] = (i >= n - m) ? 0 : std::max(0LL, i - m);
            rows_[i].assign(static_cast<std::size_t>(i - first_[i] + 1), Complex{});
        }
    }

    long long first(long long i) const { return first_[i]; }
    Complex& at(long long i, long long j) { return rows_[i][static_cast<std::size_t>(j - first_[i])]; }
    Complex at(long long i, long long j) const { return rows_[i][static_cast<std::size_t>(j - first_[i])]; }

    // In-place factorization of the stored lower triangle of a Hermitian PD matrix.
    void factor() {
        for (long long i = 0; i < n_; ++i) {
            for (long long j = first_[i]; j <= i; ++j) {
                Complex s = at(i, j);
                const long long k0 = std::max(first_[i], first_[j]);
                for (long long k = k0; k < j; ++k) s -= at(i, k) * std::conj(at(j, k));
                if (j < i) {
                    at(i, j) = s / at(j, j).real();
                } else {
                    if (!(s.real() > 0.0) || !std::isfinite(s.real())) {
                        throw NumericalError("banded MMSE: matrix is not positive definite", INFINITY);
                    }
                    at(i, i) = Complex(std::sqrt(s.real()), 0.0);
                }
            }
        }
    }

    CVector solve(CVector w) const {
        for (long long i = 0; i < n_; ++i) {
            Complex s = w[i];
            for (long long k = first_[i]; k < i; ++k) s -= at(i, k) * w[k];
            w[i] = s / at(i, i).real();
        }
        for (long long i = n_ - 1; i >= 0; --i) {
            w[i] /= at(i, i).real();
            for (long long k = first_[i]; k < i; ++k) w[k] -= std::conj(at(i, k)) * w[i];
        }
        return w;
    }

private:
    long long n_;
    long long m_;
    std::vector<long long> first_;
    std::vector<std::vector<Complex>> rows_;
};

}  // namespace

OneTapResult equalize_one_tap(const CVector& g_diag, const CVector& y) {
    if (g_diag.size() != y.size()) {
        throw Error(ErrorCode::InvalidSize, "equalize_one_tap: length mismatch");
    }
    OneTapResult out;
    out.symbols = CVector::Zero(y.size());
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        if (std::abs(g_diag[k]) < 1e-15) {
            out.erasures.push_back(static_cast<std::size_t>(k));
            continue;
        }
        out.symbols[k] = y[k] / g_diag[k];
    }
    return out;
}

CVector equalize_mmse(const EffectiveChannel& g, const CVector& y, double noise_var, double constellation_energy) {
    const Eigen::Index n = g.g.rows();
    if (g.g.cols() != n || y.size() != n) {
        throw Error(ErrorCode::InvalidSize, "equalize_mmse: size mismatch");
    }
    if (noise_var < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "equalize_mmse: noise variance must be non-negative");
    }
    CMatrix m = constellation_energy * (g.g * g.g.adjoint());
    m.diagonal().array() += noise_var;
    Eigen::PartialPivLU<CMatrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw NumericalError("equalize_mmse: system is numerically singular (rcond " + std::to_string(rcond) + ")",
                             rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }
    return constellation_energy * (g.g.adjoint() * lu.solve(y));
}

std::size_t default_half_bandwidth(int ell_max, int f_max, bool fractional_doppler) {
    const long long base = (2LL * f_max + 1) * (static_cast<long long>(ell_max) + 1) - 1;
    return static_cast<std::size_t>(base + (fractional_doppler ? 4 : 0));
}

BandedMmseResult equalize_banded_mmse(const EffectiveChannel& g, const CVector& y, double noise_var,
                                      std::size_t half_bandwidth, double constellation_energy) {
    const long long n = g.g.rows();
    if (g.g.cols() != n || y.size() != n) {
        throw Error(ErrorCode::InvalidSize, "equalize_banded_mmse: size mismatch");
    }
    if (noise_var < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "equalize_banded_mmse: noise variance must be non-negative");
    }
    BandedMmseResult out;
    const auto b = static_cast<long long>(std::min<std::size_t>(half_bandwidth, static_cast<std::size_t>(n)));
    if (2 * b + 1 >= n) {
        out.symbols = equalize_mmse(g, y, noise_var, constellation_energy);
        return out;
    }

    const double total = g.g.squaredNorm();
    double outside = 0.0;
    for (long long i = 0; i < n; ++i) {
        for (long long j = 0; j < n; ++j) {
            if (std::abs(cyclic_offset(i, j, n)) > b) outside += std::norm(g.g(i, j));
        }
    }
    out.out_of_band_energy = total > 0.0 ? outside / total : 0.0;
    out.band_truncated = out.out_of_band_energy > 1e-12;

    // Band entry accessor: G restricted to |offset| <= b.
    auto band = [&](long long i, long long j) -> Complex {
        return std::abs(cyclic_offset(i, j, n)) <= b ? g.g(i, j) : Complex{};
    };
    // M(i, j) = Es * sum_k Gb(i, k) conj(Gb(j, k)) + noise_var * delta(i, j)
    auto gram = [&](long long i, long long j) -> Complex {
        Complex s{};
        for (long long d = -b; d <= b; ++d) {
            const long long k = mod_index(i - d, n);
            s += g.g(i, k) * std::conj(band(j, k));
        }
        s *= constellation_energy;
        if (i == j) s += noise_var;
        return s;
    };

    const long long m = 2 * b;
    CVector z;
    if (2 * m + 1 >= n) {
        CMatrix dense(n, n);
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < n; ++j) dense(i, j) = std::abs(cyclic_offset(i, j, n)) <= m ? gram(i, j) : Complex{};
        Eigen::LLT<CMatrix> llt(dense);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("banded MMSE: matrix is not positive definite", INFINITY);
        }
        z = llt.solve(y);
    } else {
        EnvelopeCholesky chol(n, m);
        for (long long i = 0; i < n; ++i) {
            for (long long j = chol.first(i); j <= i; ++j) {
                chol.at(i, j) = std::abs(cyclic_offset(i, j, n)) <= m ? gram(i, j) : Complex{};
            }
        }
        chol.factor();
        z = chol.solve(y);
    }

    out.symbols = CVector::Zero(n);
    for (long long k = 0; k < n; ++k) {
        Complex s{};
        for (long long d = -b; d <= b; ++d) {
            const long long i = mod_index(k + d, n);
            s += std::conj(g.g(i, k)) * z[i];
        }
        out.symbols[k] = constellation_energy * s;
    }
    return out;
}

}  // namespace afdm
