// ml_detector.cpp - Exhaustive and depth-first sphere ML detection
//
// Both searches minimize ||y - G x||^2 over x in C^n. The sphere search works
// on G = QR: ||y - G x||^2 = ||Q^H y - R x||^2 for square G, and descends from
// the last row with Schnorr-Euchner ordering. The radius is the best full
// metric found so far, so the first leaf reached is the Babai point.

#include "afdm/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace afdm {

namespace {

constexpr std::size_t kMaxExhaustiveN = 8;
constexpr std::size_t kMaxSphereN = 16;
constexpr double kMaxExhaustiveCandidates = 16777216.0;  // 2^24

DetectionResult finish(const Constellation& c, CVector symbols) {
    DetectionResult out;
    out.method = DetectionMethod::Ml;
    out.hard_bits = c.demap(symbols);
    out.symbols = std::move(symbols);
    return out;
}

DetectionResult detect_exhaustive(const CMatrix& g, const CVector& y, const Constellation& c) {
    const Eigen::Index n = g.cols();
    const std::size_t m = c.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    CVector x(n);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = c.points()[0];
    CVector best = x;
    double best_metric = std::numeric_limits<double>::infinity();
    while (true) {
        const double metric = (y - g * x).squaredNorm();
        if (metric < best_metric) {
            best_metric = metric;
            best = x;
        }
        // Odometer increment over constellation indices.
        Eigen::Index k = 0;
        for (; k < n; ++k) {
            auto& i = idx[static_cast<std::size_t>(k)];
            if (++i < m) {
                x[k] = c.points()[i];
                break;
            }
            i = 0;
            x[k] = c.points()[0];
        }
        if (k == n) break;
    }
    return finish(c, best);
}

}  // namespace

SphereDecoder::SphereDecoder(const CMatrix& g, const Constellation& c)
    : constellation_(c), n_(g.cols()) {
    if (g.rows() != g.cols()) {
        throw Error(ErrorCode::InvalidSize, "SphereDecoder: G must be square");
    }
    if (c.size() > 16) {
        throw Error(ErrorCode::Unsupported, "SphereDecoder: constellations above 16 points are not supported");
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    r_ = qr.matrixQR().triangularView<Eigen::Upper>();
    q_adjoint_ = qr.householderQ().adjoint();
    current_.assign(static_cast<std::size_t>(n_), 0);
    best_.assign(static_cast<std::size_t>(n_), 0);
    chosen_ = CVector::Zero(n_);
}

std::vector<std::size_t> SphereDecoder::decode(const CVector& y) {
    if (y.size() != n_) {
        throw Error(ErrorCode::InvalidSize, "SphereDecoder: observation length mismatch");
    }
    target_ = q_adjoint_ * y;
    best_metric_ = std::numeric_limits<double>::infinity();
    search(n_ - 1, 0.0);
    return best_;
}

void SphereDecoder::search(Eigen::Index level, double partial) {
    const auto& pts = constellation_.points();
    Complex residual = target_[level];
    for (Eigen::Index j = level + 1; j < n_; ++j) residual -= r_(level, j) * chosen_[j];
    const Complex diag = r_(level, level);

    // Candidates at this level sorted by their metric increment.
    constexpr std::size_t kMaxPoints = 16;
    std::array<std::pair<double, std::size_t>, kMaxPoints> order{};
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) order[i] = {std::norm(residual - diag * pts[i]), i};
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));

    for (std::size_t t = 0; t < m; ++t) {
        const double metric = partial + order[t].first;
        if (metric >= best_metric_) break;
        const std::size_t i = order[t].second;
        current_[static_cast<std::size_t>(level)] = i;
        chosen_[level] = pts[i];
        if (level == 0) {
            best_metric_ = metric;
            best_ = current_;
        } else {
            search(level - 1, metric);
        }
    }
}

DetectionResult detect_ml(const EffectiveChannel& g, const CVector& y, const Constellation& c, MlStrategy strategy) {
    const Eigen::Index n = g.g.rows();
    if (g.g.cols() != n || y.size() != n) {
        throw Error(ErrorCode::InvalidSize, "detect_ml: size mismatch");
    }
    const auto nn = static_cast<std::size_t>(n);
    if (strategy == MlStrategy::Exhaustive) {
        const double candidates = std::pow(static_cast<double>(c.size()), static_cast<double>(n));
        if (nn > kMaxExhaustiveN || candidates > kMaxExhaustiveCandidates) {
            throw Error(ErrorCode::Unsupported,
                        "detect_ml: exhaustive search limited to n <= 8 and 2^24 candidates; use the sphere "
                        "search or an MMSE equalizer");
        }
        return detect_exhaustive(g.g, y, c);
    }
    if (nn > kMaxSphereN) {
        throw Error(ErrorCode::Unsupported, "detect_ml: ML detection limited to n <= 16; use an MMSE equalizer");
    }
    SphereDecoder decoder(g.g, c);
    const auto labels = decoder.decode(y);
    CVector symbols(n);
    for (Eigen::Index k = 0; k < n; ++k) symbols[k] = c.points()[labels[static_cast<std::size_t>(k)]];
    return finish(c, std::move(symbols));
}

}  // namespace afdm
