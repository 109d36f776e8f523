// detection.hpp - Constellations, equalizers and the ML detector

#pragma once

#include "afdm/effective.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace afdm {

using Bits = std::vector<std::uint8_t>;

// Gray-labeled constellation with unit average energy. Label i (read as
// bits_per_symbol bits, MSB first) maps to points()[i].
class Constellation {
public:
    static Constellation bpsk();
    // 00 -> (1+j)/sqrt2, first bit selects the sign of I, second the sign of Q.
    static Constellation qpsk();
    // Bits (b0 b1 b2 b3): I from (b0, b2), Q from (b1, b3), levels
    // (1-2 b0)(2-(1-2 b2)) / sqrt(10).
    static Constellation qam16();
    static Constellation by_name(std::string_view name);

    std::string_view name() const { return name_; }
    const std::vector<Complex>& points() const { return points_; }
    std::size_t bits_per_symbol() const { return bits_per_symbol_; }
    std::size_t size() const { return points_.size(); }
    double min_distance() const;

    CVector map_bits(std::span<const std::uint8_t> bits) const;
    Bits demap(const CVector& symbols) const;
    // Index of the nearest point.
    std::size_t nearest(Complex z) const;
    // Hard decision onto the constellation.
    CVector slice(const CVector& symbols) const;

private:
    Constellation(std::string_view name, std::vector<Complex> points, std::size_t bits_per_symbol);

    std::string_view name_;
    std::vector<Complex> points_;
    std::size_t bits_per_symbol_;
};

enum class DetectionMethod { OneTap, Mmse, BandedMmse, Ml };

std::string_view to_string(DetectionMethod method);
DetectionMethod parse_detection_method(std::string_view text);

struct DetectionResult {
    CVector symbols;
    Bits hard_bits;
    DetectionMethod method = DetectionMethod::Ml;
};

struct OneTapResult {
    CVector symbols;
    std::vector<std::size_t> erasures;   // indices where |g| < 1e-15; symbol left at 0
};

OneTapResult equalize_one_tap(const CVector& g_diag, const CVector& y);

// x = Es G^H (Es G G^H + noise_var I)^{-1} y, via an LU solve.
CVector equalize_mmse(const EffectiveChannel& g, const CVector& y, double noise_var,
                      double constellation_energy = 1.0);

struct BandedMmseResult {
    CVector symbols;
    bool band_truncated = false;     // G has energy outside the cyclic band
    double out_of_band_energy = 0.0; // relative to ||G||_F^2
};

// MMSE restricted to the cyclic band |d| <= half_bandwidth of G (off-diagonal
// d as in effective.hpp). Works in O(n * half_bandwidth^2).
BandedMmseResult equalize_banded_mmse(const EffectiveChannel& g, const CVector& y, double noise_var,
                                      std::size_t half_bandwidth, double constellation_energy = 1.0);

// (2 f_max + 1)(ell_max + 1) - 1, plus 4 guard taps when fractional Doppler is on.
std::size_t default_half_bandwidth(int ell_max, int f_max, bool fractional_doppler);

enum class MlStrategy { Exhaustive, SphereDecoding };

// Exhaustive search is limited to n <= 8 and 2^24 candidates; the depth-first
// sphere search (radius = best residual so far) to n <= 16. Both are exact.
DetectionResult detect_ml(const EffectiveChannel& g, const CVector& y, const Constellation& c,
                          MlStrategy strategy = MlStrategy::SphereDecoding);

// Reusable sphere decoder for a fixed matrix. Keeps its QR factorization.
class SphereDecoder {
public:
    SphereDecoder(const CMatrix& g, const Constellation& c);
    // Constellation indices of the minimizer of ||y - G x||.
    std::vector<std::size_t> decode(const CVector& y);

private:
    void search(Eigen::Index level, double partial);

    const Constellation& constellation_;
    Eigen::Index n_;
    CMatrix r_;
    CMatrix q_adjoint_;
    CVector target_;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
    CVector chosen_;
    double best_metric_ = 0.0;
};

}  // namespace afdm
