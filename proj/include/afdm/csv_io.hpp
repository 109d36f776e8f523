// csv_io.hpp - CSV artifacts: BER curves, |G| heatmaps, probe columns, ISAC estimates
//
// Numbers are written with std::to_chars at 17 significant digits, so they
// are locale independent and read back bit-exact.
//
//   BER curve:  snr_db,bit_errors,bits,ber,frame_errors,frames
//   heatmap:    "# n=<n> domain=<time|ofdm|afdm>" then n rows of n magnitudes
//   column:     "# n=<n> domain=<d> pilot=<k>", "row,re,im,magnitude", n rows
//   ISAC:       trial,ell_hat,f_hat,re_h,im_h,peak_magnitude

#pragma once

#include "afdm/isac.hpp"
#include "afdm/link.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace afdm {

std::string format_double(double v);
double parse_double(std::string_view text);

inline constexpr std::string_view kBerCsvHeader = "snr_db,bit_errors,bits,ber,frame_errors,frames";
inline constexpr std::string_view kIsacCsvHeader = "trial,ell_hat,f_hat,re_h,im_h,peak_magnitude";

void write_ber_csv(const BerCurve& curve, std::ostream& out);
BerCurve read_ber_csv(std::istream& in);

void write_heatmap(const CMatrix& g, TransformDomain domain, std::ostream& out);

struct Heatmap {
    std::size_t n = 0;
    std::string domain;
    Eigen::MatrixXd magnitude;
};

Heatmap read_heatmap(std::istream& in);

void write_column(const CVector& column, TransformDomain domain, std::size_t pilot_index, std::ostream& out);

void write_isac_header(std::ostream& out);
void write_isac_rows(std::size_t trial, const std::vector<PathEstimate>& estimates, std::ostream& out);

// File wrappers; I/O failures raise Error(Io) naming the path.
void emit_csv(const BerCurve& curve, const std::filesystem::path& path);
void emit_heatmap(const EffectiveChannel& g, const std::filesystem::path& path);
void emit_column(const CVector& column, TransformDomain domain, std::size_t pilot_index,
                 const std::filesystem::path& path);

}  // namespace afdm
