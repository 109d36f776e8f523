// scenario.hpp - Link-level scenario description and its text format
//
// Scenario files are line-oriented "key = value" text; '#' starts a comment.
//
//   n = 8                      block length
//   n_cpp = 1                  prefix length (default: ell_max)
//   ell_max = 1
//   f_max = 0
//   t_s = 1e-6                 sample period in seconds
//   waveform = afdm            ofdm | ocdm | afdm | custom
//   c1 = 0.0625                custom waveform only
//   c2 = 0                     afdm and custom
//   path = rayleigh 0 0        gain mode, delay, Doppler; repeat per path
//   path = fixed 0.7,-0.1 1 0  fixed gain given as re,im
//   constellation = qpsk       bpsk | qpsk | qam16
//   detector = ml              one_tap | mmse | banded_mmse | ml
//   half_bandwidth = 3         banded_mmse only (default from ell_max/f_max)
//   snr_db = 0, 5, 10
//   trials = 1000              frames per SNR point
//   seed = 1

#pragma once

#include "afdm/detection.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace afdm {

enum class WaveformPreset { Ofdm, Ocdm, Afdm, Custom };

std::string_view to_string(WaveformPreset preset);

enum class GainMode { Rayleigh, Fixed };

struct PathSpec {
    GainMode mode = GainMode::Rayleigh;
    Complex gain{1.0, 0.0};   // used when mode == Fixed
    double ell = 0.0;
    double f = 0.0;
};

struct Scenario {
    GridConfig grid;
    WaveformPreset waveform = WaveformPreset::Afdm;
    double c1 = 0.0;   // custom only
    double c2 = 0.0;   // afdm and custom
    std::vector<PathSpec> paths;
    std::string constellation = "qpsk";
    DetectionMethod detector = DetectionMethod::Ml;
    std::optional<std::size_t> half_bandwidth;
    std::vector<double> snr_db;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;

    ChirpParams chirp() const;
    // Frequency for OFDM, AffineFrequency otherwise.
    TransformDomain domain() const;
    Constellation make_constellation() const;
    std::size_t effective_half_bandwidth() const;
    bool has_fractional_doppler() const;

    // Channel with the configured fixed gains; Rayleigh paths start at
    // 1/sqrt(P) and are redrawn per frame by the link simulation.
    ChannelModel nominal_channel() const;

    // Throws InvalidConfiguration for inconsistent settings.
    void validate() const;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace afdm
