// oracles.hpp - Slow, direct reference implementations for the tests
//
// Nothing here calls into the FFT or the library operators; everything is
// built from explicit sums so it can be used to check them.

#pragma once

#include "afdm/types.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using afdm::CMatrix;
using afdm::Complex;
using afdm::CVector;

inline Complex expj(double radians) { return {std::cos(radians), std::sin(radians)}; }

// Inverse DAFT kernel written straight from the modulator sum
//   s[m] = 1/sqrt(n) sum_k x[k] exp(j2*pi*(c1 m^2 + c2 k^2 + m k / n))
// Phases are reduced mod one turn in long double to survive large m, k.
inline CMatrix idaft_kernel(double c1, double c2, std::size_t n) {
    CMatrix a(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const long double mm = static_cast<long double>(m);
            const long double kk = static_cast<long double>(k);
            long double turns = c1 * mm * mm + c2 * kk * kk +
                                std::fmod(mm * kk, static_cast<long double>(n)) / static_cast<long double>(n);
            turns -= std::floor(turns);
            a(m, k) = scale * expj(2.0 * M_PI * static_cast<double>(turns));
        }
    }
    return a;
}

inline CVector naive_dft(const CVector& v, int sign = -1) {
    const auto n = v.size();
    CVector out = CVector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index m = 0; m < n; ++m) {
            const double turns = static_cast<double>((k * m) % n) / static_cast<double>(n);
            out[k] += v[m] * expj(sign * 2.0 * M_PI * turns);
        }
    }
    return out / std::sqrt(static_cast<double>(n));
}

inline CVector naive_idft(const CVector& v) { return naive_dft(v, +1); }

inline CMatrix naive_dft_matrix(std::size_t n) {
    CMatrix f(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
            f(k, m) = expj(-2.0 * M_PI * static_cast<double>((k * m) % n) / static_cast<double>(n)) /
                      std::sqrt(static_cast<double>(n));
        }
    }
    return f;
}

inline CVector chirp(double c, std::size_t n) {
    CVector v(n);
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = std::polar(1.0, -2.0 * M_PI * c * static_cast<double>(k) * static_cast<double>(k));
    }
    return v;
}

struct IntPath {
    Complex h;
    long long ell;
    long long f;
};

// Physical channel run sample by sample on a prefixed frame, then stripped.
// The prefix is built as in the transmitter: the last n_cpp samples of the
// body, each rotated by exp(-j2*pi*c1*(n^2 - 2n(n_cpp - i))).
inline CVector frame_channel(const std::vector<IntPath>& paths, double c1, std::size_t n_cpp, const CVector& s) {
    const auto n = static_cast<long long>(s.size());
    const auto ncpp = static_cast<long long>(n_cpp);
    std::vector<Complex> frame(static_cast<std::size_t>(n + ncpp));
    for (long long i = 0; i < ncpp; ++i) {
        const double nn = static_cast<double>(n);
        const double phase = c1 * (nn * nn - 2.0 * nn * static_cast<double>(ncpp - i));
        frame[static_cast<std::size_t>(i)] = std::polar(1.0, -2.0 * M_PI * phase) * s[n - ncpp + i];
    }
    for (long long i = 0; i < n; ++i) frame[static_cast<std::size_t>(ncpp + i)] = s[i];

    CVector r = CVector::Zero(n);
    for (long long k = 0; k < n; ++k) {
        for (const auto& p : paths) {
            const long long src = ncpp + k - p.ell;
            if (src < 0) continue;
            const double doppler = static_cast<double>(p.f) * static_cast<double>(k) / static_cast<double>(n);
            r[k] += p.h * std::polar(1.0, 2.0 * M_PI * doppler) * frame[static_cast<std::size_t>(src)];
        }
    }
    return r;
}

// Circular channel r[k] = sum_p h_p exp(j2*pi*f_p*k/n) s[(k - ell_p) mod n].
inline CVector circular_channel(const std::vector<IntPath>& paths, const CVector& s) {
    const auto n = static_cast<long long>(s.size());
    CVector r = CVector::Zero(n);
    for (long long k = 0; k < n; ++k) {
        for (const auto& p : paths) {
            const long long src = ((k - p.ell) % n + n) % n;
            r[k] += p.h * std::polar(1.0, 2.0 * M_PI * static_cast<double>(p.f * k) / static_cast<double>(n)) * s[src];
        }
    }
    return r;
}

// Ideal circular fractional delay: the sinc kernel summed over every alias,
// i.e. a long periodized sum instead of a short window.
inline CVector periodized_sinc_delay(const CVector& s, double ell, long long aliases = 20000) {
    const auto n = static_cast<long long>(s.size());
    std::vector<double> weight(static_cast<std::size_t>(n), 0.0);
    for (long long l = -aliases * n; l < aliases * n; ++l) {
        const double x = static_cast<double>(l) - ell;
        const double w = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
        weight[static_cast<std::size_t>(((l % n) + n) % n)] += w;
    }
    CVector r = CVector::Zero(n);
    for (long long k = 0; k < n; ++k) {
        for (long long l = 0; l < n; ++l) {
            r[k] += weight[static_cast<std::size_t>(l)] * s[((k - l) % n + n) % n];
        }
    }
    return r;
}

// Brute-force ML by recursive enumeration over every candidate vector.
inline CVector brute_force_ml(const CMatrix& g, const CVector& y, const std::vector<Complex>& points) {
    const auto n = g.cols();
    CVector x(n), best(n);
    double best_metric = std::numeric_limits<double>::infinity();
    std::function<void(Eigen::Index)> rec = [&](Eigen::Index i) {
        if (i == n) {
            const double metric = (y - g * x).squaredNorm();
            if (metric < best_metric) {
                best_metric = metric;
                best = x;
            }
            return;
        }
        for (const auto& pt : points) {
            x[i] = pt;
            rec(i + 1);
        }
    };
    rec(0);
    return best;
}

// Gray QPSK over AWGN: Q(sqrt(Es/N0)) per bit.
inline double qpsk_awgn_ber(double snr_db) {
    const double es_n0 = std::pow(10.0, snr_db / 10.0);
    return 0.5 * std::erfc(std::sqrt(es_n0 / 2.0));
}

inline CVector random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex(nd(rng), nd(rng));
    return v;
}

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(nd(rng), nd(rng));
    return m;
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
