// selfcheck.cpp - Randomized equivalence checks between fast and dense paths

#include "afdm/selfcheck.hpp"

#include "afdm/isac.hpp"

#include <functional>
#include <ostream>
#include <set>
#include <string>

namespace afdm {

namespace {

CVector random_vector(std::size_t n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(static_cast<Eigen::Index>(n));
    for (auto& z : v) z = Complex(gauss(rng), gauss(rng));
    return v;
}

// Even n with a no-aliasing integer channel of up to 5 distinct paths.
ChannelModel random_integer_channel(Rng& rng, std::size_t& n_out, int& f_max_out) {
    std::uniform_int_distribution<int> fmax_d(0, 2);
    std::uniform_int_distribution<int> ellmax_d(0, 4);
    const int f_max = fmax_d(rng);
    const int ell_max = ellmax_d(rng);
    auto n = static_cast<std::size_t>((2 * f_max + 1) * (ell_max + 1));
    n += n % 2;
    n = std::max<std::size_t>(n, 4);
    n = std::min<std::size_t>(n + 2 * std::uniform_int_distribution<std::size_t>(0, 8)(rng), 64);
    GridConfig g{n, static_cast<std::size_t>(ell_max), ell_max, f_max, 1e-6};

    std::uniform_int_distribution<int> ell_d(0, ell_max);
    std::uniform_int_distribution<int> f_d(-f_max, f_max);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t grid_points = static_cast<std::size_t>((2 * f_max + 1) * (ell_max + 1));
    const std::size_t p_count = std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 5)(rng), grid_points);
    std::set<std::pair<int, int>> used;
    std::vector<Path> paths;
    while (paths.size() < p_count) {
        const int ell = ell_d(rng);
        const int f = f_d(rng);
        if (!used.emplace(ell, f).second) continue;
        paths.push_back(Path{Complex(gauss(rng), gauss(rng)), static_cast<double>(ell), static_cast<double>(f)});
    }
    n_out = n;
    f_max_out = f_max;
    return ChannelModel(std::move(paths), g);
}

}  // namespace

bool run_selfcheck(std::ostream& out, const SelfcheckOptions& options) {
    Rng rng(options.seed);
    bool all = true;
    auto report = [&](const std::string& name, bool ok, double worst) {
        out << (ok ? "PASS " : "FAIL ") << name << " (worst " << worst << ")\n";
        all = all && ok;
    };

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> c_d(-0.5, 0.5);
        std::uniform_int_distribution<std::size_t> n_d(2, 128);
        for (std::size_t i = 0; i < options.cases; ++i) {
            const ChirpParams p(c_d(rng), c_d(rng), n_d(rng));
            const CVector x = random_vector(p.n(), rng);
            const CVector fast = modulate(p, x);
            const CVector dense = daft_matrix(p).adjoint() * x;
            worst = std::max(worst, (fast - dense).norm() / x.norm());
            worst = std::max(worst, (demodulate(p, fast) - x).norm() / x.norm());
        }
        report("fft modulator matches dense IDAFT and round-trips", worst < 1e-10, worst);
    }
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < options.cases; ++i) {
            std::size_t n = 0;
            int f_max = 0;
            const ChannelModel m = random_integer_channel(rng, n, f_max);
            std::uniform_int_distribution<int> c2_d(0, 3);
            const ChirpParams p = ChirpParams::afdm(n, f_max, c2_d(rng) / (2.0 * static_cast<double>(n)));
            const CMatrix h = build_matrix(m, p);
            const double scale = h.norm();
            worst = std::max(worst, (effective_afdm_closed_form(m, p).channel.g -
                                     effective_direct(h, p, TransformDomain::AffineFrequency).g).norm() / scale);
            worst = std::max(worst, (effective_ofdm_closed_form(m).g -
                                     effective_direct(h, p, TransformDomain::Frequency).g).norm() / scale);
        }
        report("closed-form effective channels match dense conjugation", worst < 1e-10, worst);
    }
    {
        double worst = 0.0;
        for (const double f : {0.0, 0.2, 0.5, 1.3}) {
            const std::size_t n = 16;
            const CMatrix fm = dft_matrix(n);
            const CMatrix direct = fm * w_power(n, f) * fm.adjoint();
            worst = std::max(worst, (dirichlet_kernel(f, n) - direct).cwiseAbs().maxCoeff());
        }
        report("Dirichlet kernel matches F W^f F^H", worst < 1e-10, worst);
    }
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < options.cases; ++i) {
            std::size_t n = 0;
            int f_max = 0;
            const ChannelModel m = random_integer_channel(rng, n, f_max);
            const ChirpParams p = ChirpParams::afdm(n, f_max);
            Rng noise(0);
            const CVector column = probe_column(m, p, 0, 0.0, noise);
            const PathEstimates est = estimate_paths(column, 0, m.grid(), p, 1e-6);
            bool ok = est.paths.size() == m.num_paths() && est.spurious.empty();
            for (const auto& path : m.paths()) {
                bool found = false;
                for (const auto& e : est.paths) {
                    if (e.ell_hat == std::lround(path.ell) && e.f_hat == std::lround(path.f)) {
                        found = true;
                        worst = std::max(worst, std::abs(e.h_hat - path.h));
                    }
                }
                ok = ok && found;
            }
            if (!ok) worst = std::max(worst, 1.0);
        }
        report("single-pilot probe recovers every path", worst < 1e-8, worst);
    }
    return all;
}

}  // namespace afdm
