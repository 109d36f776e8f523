// scenario.cpp - Scenario parsing and validation

#include "afdm/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace afdm {

namespace {

[[noreturn]] void config_error(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::InvalidConfiguration,
                "scenario line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view text, std::size_t line) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        config_error(line, "expected a number, got '" + t + "'");
    }
    return v;
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t line) {
    const std::string t = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        config_error(line, "expected an integer, got '" + t + "'");
    }
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

PathSpec parse_path(const std::string& value, std::size_t line) {
    std::istringstream fields(value);
    std::string mode, third, fourth;
    fields >> mode;
    PathSpec spec;
    if (mode == "rayleigh") {
        spec.mode = GainMode::Rayleigh;
    } else if (mode == "fixed") {
        spec.mode = GainMode::Fixed;
        std::string gain;
        fields >> gain;
        const auto parts = split(gain, ',');
        if (parts.size() != 2) config_error(line, "fixed gain must be written re,im");
        spec.gain = Complex(parse_real(parts[0], line), parse_real(parts[1], line));
    } else {
        config_error(line, "path gain mode must be 'rayleigh' or 'fixed'");
    }
    if (!(fields >> third >> fourth)) config_error(line, "path needs a delay and a Doppler");
    std::string extra;
    if (fields >> extra) config_error(line, "unexpected trailing field '" + extra + "'");
    spec.ell = parse_real(third, line);
    spec.f = parse_real(fourth, line);
    return spec;
}

}  // namespace

std::string_view to_string(WaveformPreset preset) {
    switch (preset) {
        case WaveformPreset::Ofdm: return "ofdm";
        case WaveformPreset::Ocdm: return "ocdm";
        case WaveformPreset::Afdm: return "afdm";
        case WaveformPreset::Custom: return "custom";
    }
    return "unknown";
}

ChirpParams Scenario::chirp() const {
    switch (waveform) {
        case WaveformPreset::Ofdm: return ChirpParams::ofdm(grid.n);
        case WaveformPreset::Ocdm: return ChirpParams::ocdm(grid.n);
        case WaveformPreset::Afdm: return ChirpParams::afdm(grid.n, grid.f_max, c2);
        case WaveformPreset::Custom: return {c1, c2, grid.n};
    }
    throw Error(ErrorCode::InvalidConfiguration, "unknown waveform preset");
}

TransformDomain Scenario::domain() const {
    return waveform == WaveformPreset::Ofdm ? TransformDomain::Frequency : TransformDomain::AffineFrequency;
}

Constellation Scenario::make_constellation() const {
    try {
        return Constellation::by_name(constellation);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfiguration, e.what());
    }
}

std::size_t Scenario::effective_half_bandwidth() const {
    return half_bandwidth.value_or(default_half_bandwidth(grid.ell_max, grid.f_max, has_fractional_doppler()));
}

bool Scenario::has_fractional_doppler() const {
    for (const auto& p : paths) {
        if (!is_near_integer(p.f, 1e-12)) return true;
    }
    return false;
}

ChannelModel Scenario::nominal_channel() const {
    std::vector<Path> out;
    const double rayleigh_amp = paths.empty() ? 1.0 : 1.0 / std::sqrt(static_cast<double>(paths.size()));
    for (const auto& spec : paths) {
        out.push_back(Path{spec.mode == GainMode::Fixed ? spec.gain : Complex(rayleigh_amp, 0.0), spec.ell, spec.f});
    }
    return ChannelModel(std::move(out), grid, seed);
}

void Scenario::validate() const {
    grid.validate();
    if (paths.empty()) throw Error(ErrorCode::InvalidConfiguration, "scenario: at least one path is required");
    if (snr_db.empty()) throw Error(ErrorCode::InvalidConfiguration, "scenario: snr_db list is empty");
    if (trials < 1) throw Error(ErrorCode::InvalidConfiguration, "scenario: trials must be at least 1");
    (void)make_constellation();
    (void)nominal_channel();
    (void)chirp();
    if (detector == DetectionMethod::Ml && grid.n > 16) {
        throw Error(ErrorCode::InvalidConfiguration, "scenario: ML detection supports n <= 16");
    }
}

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    bool have_n_cpp = false;
    bool have_c1 = false;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) config_error(line, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));

        if (key == "n") s.grid.n = parse_int<std::size_t>(value, line);
        else if (key == "n_cpp") { s.grid.n_cpp = parse_int<std::size_t>(value, line); have_n_cpp = true; }
        else if (key == "ell_max") s.grid.ell_max = parse_int<int>(value, line);
        else if (key == "f_max") s.grid.f_max = parse_int<int>(value, line);
        else if (key == "t_s") s.grid.t_s = parse_real(value, line);
        else if (key == "waveform") {
            if (value == "ofdm") s.waveform = WaveformPreset::Ofdm;
            else if (value == "ocdm") s.waveform = WaveformPreset::Ocdm;
            else if (value == "afdm") s.waveform = WaveformPreset::Afdm;
            else if (value == "custom") s.waveform = WaveformPreset::Custom;
            else config_error(line, "unknown waveform '" + value + "'");
        }
        else if (key == "c1") { s.c1 = parse_real(value, line); have_c1 = true; }
        else if (key == "c2") s.c2 = parse_real(value, line);
        else if (key == "path") s.paths.push_back(parse_path(value, line));
        else if (key == "constellation") s.constellation = value;
        else if (key == "detector") {
            try {
                s.detector = parse_detection_method(value);
            } catch (const Error& e) {
                config_error(line, e.what());
            }
        }
        else if (key == "half_bandwidth") s.half_bandwidth = parse_int<std::size_t>(value, line);
        else if (key == "snr_db") {
            s.snr_db.clear();
            for (const auto& part : split(value, ',')) s.snr_db.push_back(parse_real(part, line));
        }
        else if (key == "trials") s.trials = parse_int<std::size_t>(value, line);
        else if (key == "seed") s.seed = parse_int<std::uint64_t>(value, line);
        else config_error(line, "unknown key '" + key + "'");
    }
    if (!have_n_cpp) s.grid.n_cpp = static_cast<std::size_t>(std::max(0, s.grid.ell_max));
    if (have_c1 && s.waveform != WaveformPreset::Custom) {
        throw Error(ErrorCode::InvalidConfiguration,
                    "scenario: c1 is fixed by the '" + std::string(to_string(s.waveform)) +
                        "' preset; use waveform = custom to set it");
    }
    if ((s.waveform == WaveformPreset::Ofdm || s.waveform == WaveformPreset::Ocdm) && s.c2 != 0.0) {
        throw Error(ErrorCode::InvalidConfiguration, "scenario: c2 is fixed by the ofdm/ocdm presets");
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open scenario file '" + path.string() + "'");
    }
    return parse_scenario(in);
}

}  // namespace afdm
