// afdm_sim.cpp - Command line front end
//
//   afdm_sim ber SCENARIO [-o out.csv] [--threads K] [--window LO HI]
//   afdm_sim effchan SCENARIO --domain ofdm|afdm [--closed-form] [-o out.csv]
//   afdm_sim isac SCENARIO [--trials T] [--snr-db S] [--threshold X] [--pilot K] [-o out.csv]
//   afdm_sim flops --n N
//   afdm_sim selfcheck
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or numerical failure.

#include "afdm/csv_io.hpp"
#include "afdm/selfcheck.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Writes to the file if a path was given, stdout otherwise.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw afdm::Error(afdm::ErrorCode::Io, "cannot open '" + path + "' for writing");
    fn(out);
    out.flush();
    if (!out) throw afdm::Error(afdm::ErrorCode::Io, "write to '" + path + "' failed");
}

afdm::Scenario load(const std::string& path) {
    try {
        return afdm::load_scenario(path);
    } catch (const afdm::Error& e) {
        if (e.code() == afdm::ErrorCode::Io) throw afdm::Error(afdm::ErrorCode::InvalidConfiguration, e.what());
        throw;
    }
}

int run_ber(const std::string& scenario_path, const std::string& output, std::size_t threads,
            const std::vector<double>& window) {
    const afdm::Scenario s = load(scenario_path);
    afdm::BerCurve curve = afdm::run_link(s, {threads});
    for (double snr : afdm::low_error_points(curve)) {
        std::cerr << "warning: fewer than 100 bit errors at " << snr << " dB\n";
    }
    with_output(output, [&](std::ostream& out) { afdm::write_ber_csv(curve, out); });
    if (window.size() == 2) {
        const auto slope = afdm::estimate_diversity_slope(curve, {window[0], window[1]});
        std::cerr << "diversity order " << slope.diversity_order << " (95% CI " << slope.ci_low << " .. "
                  << slope.ci_high << ", " << slope.points_used << " points)\n";
    }
    return 0;
}

int run_effchan(const std::string& scenario_path, const std::string& domain_text, bool closed_form,
                const std::string& output) {
    const afdm::Scenario s = load(scenario_path);
    afdm::TransformDomain domain{};
    try {
        domain = afdm::parse_domain(domain_text);
    } catch (const afdm::Error& e) {
        throw afdm::Error(afdm::ErrorCode::InvalidConfiguration, e.what());
    }
    // Rayleigh paths get one draw from the scenario seed.
    afdm::Rng rng(afdm::derive_seed(s.seed, 0, 0, afdm::Stream::Channel));
    const afdm::ChannelModel channel = afdm::draw_channel(s, s.nominal_channel(), rng);

    const afdm::ChirpParams p =
        domain == afdm::TransformDomain::AffineFrequency ? s.chirp() : afdm::ChirpParams::ofdm(s.grid.n);
    afdm::EffectiveChannel g;
    if (closed_form) {
        if (domain == afdm::TransformDomain::AffineFrequency) g = afdm::effective_afdm_closed_form(channel, p).channel;
        else if (domain == afdm::TransformDomain::Frequency) g = afdm::effective_ofdm_closed_form(channel);
        else throw afdm::Error(afdm::ErrorCode::InvalidConfiguration, "--closed-form needs --domain ofdm or afdm");
    } else {
        const afdm::CMatrix transform =
            domain == afdm::TransformDomain::AffineFrequency ? afdm::daft_matrix(p) : afdm::dft_matrix(s.grid.n);
        g = afdm::link_effective_channel(channel, p, domain, transform);
    }
    with_output(output, [&](std::ostream& out) { afdm::write_heatmap(g.g, g.domain, out); });
    return 0;
}

int run_isac(const std::string& scenario_path, std::size_t trials, std::optional<double> snr_db, double threshold,
             std::size_t pilot, const std::string& output) {
    const afdm::Scenario s = load(scenario_path);
    const afdm::ChirpParams p = s.chirp();
    if (!s.grid.no_aliasing()) {
        throw afdm::Error(afdm::ErrorCode::InvalidConfiguration, "isac: grid violates the no-aliasing condition");
    }
    const double noise_var = snr_db ? afdm::noise_variance_for_snr(*snr_db) : 0.0;
    const afdm::ChannelModel nominal = s.nominal_channel();
    with_output(output, [&](std::ostream& out) {
        afdm::write_isac_header(out);
        for (std::size_t t = 0; t < trials; ++t) {
            afdm::Rng channel_rng(afdm::derive_seed(s.seed, 0, t, afdm::Stream::Channel));
            afdm::Rng noise_rng(afdm::derive_seed(s.seed, 0, t, afdm::Stream::Noise));
            const afdm::ChannelModel channel = afdm::draw_channel(s, nominal, channel_rng);
            const afdm::CVector column = afdm::probe_column(channel, p, pilot, noise_var, noise_rng);
            const auto est = afdm::estimate_paths(column, pilot, s.grid, p, threshold);
            for (const auto& sp : est.spurious) {
                std::cerr << "warning: trial " << t << " spurious peak at row " << sp.row << '\n';
            }
            afdm::write_isac_rows(t, est.paths, out);
        }
    });
    return 0;
}

int run_flops(std::size_t n) {
    const afdm::FlopOverhead f = afdm::flop_overhead(n);
    std::cout << "n," << n << '\n'
              << "patch_flops," << f.patch_flops << '\n'
              << "fft_flops," << afdm::format_double(f.fft_flops) << '\n'
              << "relative," << afdm::format_double(f.relative) << '\n';
    if (f.non_power_of_two) std::cerr << "warning: n is not a power of two; log2 taken as a real number\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AFDM/OFDM waveform simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string output;
    std::size_t threads = 1;
    std::vector<double> window;
    auto* ber = app.add_subcommand("ber", "Monte Carlo BER curve for a scenario");
    ber->add_option("scenario", scenario, "Scenario file")->required();
    ber->add_option("-o,--output", output, "Output CSV (default stdout)");
    ber->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    ber->add_option("--window", window, "SNR window LO HI for the diversity-slope fit")->expected(2);

    std::string domain = "afdm";
    bool closed_form = false;
    auto* effchan = app.add_subcommand("effchan", "Effective channel magnitude heatmap");
    effchan->add_option("scenario", scenario, "Scenario file")->required();
    effchan->add_option("--domain", domain, "ofdm | afdm | time");
    effchan->add_flag("--closed-form", closed_form, "Use the per-path closed form");
    effchan->add_option("-o,--output", output, "Output CSV (default stdout)");

    std::size_t isac_trials = 1;
    std::optional<double> snr_db;
    double threshold = afdm::kDefaultIsacThreshold;
    std::size_t pilot = 0;
    auto* isac = app.add_subcommand("isac", "Single-pilot delay-Doppler estimation");
    isac->add_option("scenario", scenario, "Scenario file")->required();
    isac->add_option("--trials", isac_trials, "Number of channel draws");
    isac->add_option("--snr-db", snr_db, "Pilot SNR in dB (noiseless if omitted)");
    isac->add_option("--threshold", threshold, "Relative peak threshold in (0, 1)");
    isac->add_option("--pilot", pilot, "Pilot chirp index");
    isac->add_option("-o,--output", output, "Output CSV (default stdout)");

    std::size_t n = 0;
    auto* flops = app.add_subcommand("flops", "Phase-rotation FLOP overhead over the FFT");
    flops->add_option("--n", n, "Block length")->required();

    auto* selfcheck = app.add_subcommand("selfcheck", "Run the oracle-equivalence checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*ber) return run_ber(scenario, output, threads, window);
        if (*effchan) return run_effchan(scenario, domain, closed_form, output);
        if (*isac) return run_isac(scenario, isac_trials, snr_db, threshold, pilot, output);
        if (*flops) return run_flops(n);
        if (*selfcheck) return afdm::run_selfcheck(std::cout) ? 0 : kExitRuntime;
    } catch (const afdm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const bool config = e.code() == afdm::ErrorCode::InvalidConfiguration ||
                            e.code() == afdm::ErrorCode::InvalidParameter;
        return config ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
