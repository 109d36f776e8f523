// constellation.cpp - Gray-labeled BPSK / QPSK / 16-QAM

#include "afdm/detection.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace afdm {

Constellation::Constellation(std::string_view name, std::vector<Complex> points, std::size_t bits_per_symbol)
    : name_(name), points_(std::move(points)), bits_per_symbol_(bits_per_symbol) {}

Constellation Constellation::bpsk() {
    return {"bpsk", {Complex(1.0, 0.0), Complex(-1.0, 0.0)}, 1};
}

Constellation Constellation::qpsk() {
    const double a = 1.0 / std::sqrt(2.0);
    std::vector<Complex> pts(4);
    for (std::size_t label = 0; label < 4; ++label) {
        const double i = (label & 2U) ? -1.0 : 1.0;
        const double q = (label & 1U) ? -1.0 : 1.0;
        pts[label] = Complex(a * i, a * q);
    }
    return {"qpsk", std::move(pts), 2};
}

Constellation Constellation::qam16() {
    const double a = 1.0 / std::sqrt(10.0);
    std::vector<Complex> pts(16);
    for (std::size_t label = 0; label < 16; ++label) {
        const int b0 = (label >> 3) & 1U;
        const int b1 = (label >> 2) & 1U;
        const int b2 = (label >> 1) & 1U;
        const int b3 = label & 1U;
        const double i = (1 - 2 * b0) * (1 + 2 * b2);
        const double q = (1 - 2 * b1) * (1 + 2 * b3);
        pts[label] = Complex(a * i, a * q);
    }
    return {"qam16", std::move(pts), 4};
}

Constellation Constellation::by_name(std::string_view name) {
    if (name == "bpsk") return bpsk();
    if (name == "qpsk") return qpsk();
    if (name == "qam16" || name == "16qam") return qam16();
    throw Error(ErrorCode::InvalidParameter, "unknown constellation '" + std::string(name) + "'");
}

double Constellation::min_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < points_.size(); ++a) {
        for (std::size_t b = a + 1; b < points_.size(); ++b) {
            best = std::min(best, std::abs(points_[a] - points_[b]));
        }
    }
    return best;
}

CVector Constellation::map_bits(std::span<const std::uint8_t> bits) const {
    if (bits.size() % bits_per_symbol_ != 0) {
        throw Error(ErrorCode::InvalidSize, "map_bits: bit count is not a multiple of bits per symbol");
    }
    const std::size_t count = bits.size() / bits_per_symbol_;
    CVector symbols(static_cast<Eigen::Index>(count));
    for (std::size_t s = 0; s < count; ++s) {
        std::size_t label = 0;
        for (std::size_t b = 0; b < bits_per_symbol_; ++b) {
            const std::uint8_t bit = bits[s * bits_per_symbol_ + b];
            if (bit > 1) {
                throw Error(ErrorCode::InvalidParameter, "map_bits: bit values must be 0 or 1");
            }
            label = (label << 1U) | bit;
        }
        symbols[static_cast<Eigen::Index>(s)] = points_[label];
    }
    return symbols;
}

std::size_t Constellation::nearest(Complex z) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = std::norm(z - points_[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Bits Constellation::demap(const CVector& symbols) const {
    Bits bits(static_cast<std::size_t>(symbols.size()) * bits_per_symbol_);
    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        const std::size_t label = nearest(symbols[s]);
        for (std::size_t b = 0; b < bits_per_symbol_; ++b) {
            bits[static_cast<std::size_t>(s) * bits_per_symbol_ + b] =
                static_cast<std::uint8_t>((label >> (bits_per_symbol_ - 1 - b)) & 1U);
        }
    }
    return bits;
}

CVector Constellation::slice(const CVector& symbols) const {
    CVector out(symbols.size());
    for (Eigen::Index s = 0; s < symbols.size(); ++s) out[s] = points_[nearest(symbols[s])];
    return out;
}

std::string_view to_string(DetectionMethod method) {
    switch (method) {
        case DetectionMethod::OneTap: return "one_tap";
        case DetectionMethod::Mmse: return "mmse";
        case DetectionMethod::BandedMmse: return "banded_mmse";
        case DetectionMethod::Ml: return "ml";
    }
    return "unknown";
}

DetectionMethod parse_detection_method(std::string_view text) {
    if (text == "one_tap") return DetectionMethod::OneTap;
    if (text == "mmse") return DetectionMethod::Mmse;
    if (text == "banded_mmse") return DetectionMethod::BandedMmse;
    if (text == "ml") return DetectionMethod::Ml;
    throw Error(ErrorCode::InvalidParameter, "unknown detector '" + std::string(text) + "'");
}

}  // namespace afdm
