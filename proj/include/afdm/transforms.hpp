// transforms.hpp - Chirp sequences and the discrete affine Fourier transform
//
// The DAFT is A = diag(lambda_c2) * F * diag(lambda_c1), with F the unitary
// DFT and lambda_c[k] = exp(-j2*pi*c*k^2). The inverse used by the modulator
// is A^H = diag(conj lambda_c1) * F^H * diag(conj lambda_c2).
//
// modulate/demodulate are computed as an n-point FFT plus two element-wise
// phase rotations. That is the whole difference from an OFDM modem: set
// c1 = c2 = 0 and both collapse to the IDFT/DFT pair.
//
// FFT scaling: the FFT core used here is run unnormalized and the 1/sqrt(n)
// factor is applied explicitly in both directions.

#pragma once

#include "afdm/types.hpp"

#include <unsupported/Eigen/FFT>

#include <cstddef>
#include <string_view>
#include <vector>

namespace afdm {

enum class TransformDomain { Time, Frequency, AffineFrequency };

std::string_view to_string(TransformDomain domain);
TransformDomain parse_domain(std::string_view text);

// True when x is within tol of an integer.
bool is_near_integer(double x, double tol = 1e-9);

// True when exp(-j2*pi*c*k^2) is n-periodic in k, i.e. 2nc and cn^2 are both
// integers. This is the regime where the CPP is a plain CP and where the
// per-path closed forms of the effective channel hold.
bool quadratic_phase_is_periodic(double c, std::size_t n);

// lambda_c[k] = exp(-j2*pi*c*k^2), k = 0..n-1.
CVector chirp_sequence(double c, std::size_t n);

class ChirpParams {
public:
    ChirpParams(double c1, double c2, std::size_t n);

    static ChirpParams ofdm(std::size_t n) { return {0.0, 0.0, n}; }
    static ChirpParams ocdm(std::size_t n);
    // c1 = (2 f_max + 1) / (2n), the full-diversity setting.
    static ChirpParams afdm(std::size_t n, int f_max, double c2 = 0.0);

    double c1() const { return c1_; }
    double c2() const { return c2_; }
    std::size_t n() const { return n_; }

    const CVector& lambda1() const { return lambda1_; }
    const CVector& lambda2() const { return lambda2_; }

    // 2*n*c1, the coupling factor between delay and off-diagonal position.
    double two_n_c1() const { return 2.0 * static_cast<double>(n_) * c1_; }
    bool two_n_c1_is_integer() const { return is_near_integer(two_n_c1()); }

    // All CPP rotations are unity: the chirp-periodic prefix is a plain CP.
    bool cpp_reduces_to_cp() const { return cpp_reduces_to_cp_; }

private:
    double c1_;
    double c2_;
    std::size_t n_;
    CVector lambda1_;
    CVector lambda2_;
    bool cpp_reduces_to_cp_;
};

// Unitary forward DFT matrix, entry (k, m) = exp(-j2*pi*k*m/n) / sqrt(n).
CMatrix dft_matrix(std::size_t n);

// Dense forward DAFT matrix diag(lambda_c2) * F * diag(lambda_c1).
CMatrix daft_matrix(const ChirpParams& p);

// FFT-backed modem. Holds FFT plan state, so one instance per thread.
class DaftEngine {
public:
    explicit DaftEngine(ChirpParams params);

    const ChirpParams& params() const { return params_; }

    // s = conj(lambda_c1) .* IDFT(conj(lambda_c2) .* x)
    CVector modulate(const CVector& x);
    // y = lambda_c2 .* DFT(lambda_c1 .* r)
    CVector demodulate(const CVector& r);

    // Plain unitary DFT / IDFT of length n.
    CVector dft(const CVector& v);
    CVector idft(const CVector& v);

private:
    ChirpParams params_;
    Eigen::FFT<double> fft_;
    std::vector<Complex> in_;
    std::vector<Complex> out_;
};

CVector modulate(const ChirpParams& p, const CVector& x);
CVector demodulate(const ChirpParams& p, const CVector& r);

struct FlopOverhead {
    long long patch_flops = 0;    // 2n complex multiplies at 6 FLOPs each
    double fft_flops = 0.0;       // 5 n log2 n
    double relative = 0.0;        // 12 / (5 log2 n)
    bool non_power_of_two = false;
};

FlopOverhead flop_overhead(std::size_t n);

}  // namespace afdm
