// csv_io.cpp - Round-trip safe CSV emission and parsing

#include "afdm/csv_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace afdm {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

std::uint64_t parse_u64(const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::Io, "csv: expected an integer, got '" + text + "'");
    }
    return v;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
    }
}

std::string header_value(const std::string& header, const std::string& key) {
    const std::string tag = key + "=";
    const auto pos = header.find(tag);
    if (pos == std::string::npos) {
        throw Error(ErrorCode::Io, "heatmap header lacks '" + key + "'");
    }
    const auto start = pos + tag.size();
    const auto end = header.find(' ', start);
    return header.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw Error(ErrorCode::Io, "format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::Io, "csv: expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

void write_ber_csv(const BerCurve& curve, std::ostream& out) {
    out << kBerCsvHeader << '\n';
    for (const auto& p : curve.points) {
        out << format_double(p.snr_db) << ',' << p.bit_errors << ',' << p.bits << ',' << format_double(p.ber())
            << ',' << p.frame_errors << ',' << p.frames << '\n';
    }
}

BerCurve read_ber_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kBerCsvHeader) {
        throw Error(ErrorCode::Io, "BER csv: missing or unexpected header");
    }
    BerCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 6) throw Error(ErrorCode::Io, "BER csv: expected 6 fields");
        BerPoint p;
        p.snr_db = parse_double(f[0]);
        p.bit_errors = parse_u64(f[1]);
        p.bits = parse_u64(f[2]);
        p.frame_errors = parse_u64(f[4]);
        p.frames = parse_u64(f[5]);
        curve.points.push_back(p);
    }
    return curve;
}

void write_heatmap(const CMatrix& g, TransformDomain domain, std::ostream& out) {
    out << "# n=" << g.rows() << " domain=" << to_string(domain) << '\n';
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(std::abs(g(i, j)));
        }
        out << '\n';
    }
}

Heatmap read_heatmap(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# ", 0) != 0) {
        throw Error(ErrorCode::Io, "heatmap: missing header");
    }
    Heatmap h;
    h.n = static_cast<std::size_t>(parse_u64(header_value(header, "n")));
    h.domain = header_value(header, "domain");
    const auto n = static_cast<Eigen::Index>(h.n);
    h.magnitude.resize(n, n);
    std::string line;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw Error(ErrorCode::Io, "heatmap: too few rows");
        const auto f = split_commas(line);
        if (static_cast<Eigen::Index>(f.size()) != n) throw Error(ErrorCode::Io, "heatmap: wrong row width");
        for (Eigen::Index j = 0; j < n; ++j) h.magnitude(i, j) = parse_double(f[static_cast<std::size_t>(j)]);
    }
    return h;
}

void write_column(const CVector& column, TransformDomain domain, std::size_t pilot_index, std::ostream& out) {
    out << "# n=" << column.size() << " domain=" << to_string(domain) << " pilot=" << pilot_index << '\n';
    out << "row,re,im,magnitude\n";
    for (Eigen::Index r = 0; r < column.size(); ++r) {
        out << r << ',' << format_double(column[r].real()) << ',' << format_double(column[r].imag()) << ','
            << format_double(std::abs(column[r])) << '\n';
    }
}

void write_isac_header(std::ostream& out) {
    out << kIsacCsvHeader << '\n';
}

void write_isac_rows(std::size_t trial, const std::vector<PathEstimate>& estimates, std::ostream& out) {
    for (const auto& e : estimates) {
        out << trial << ',' << e.ell_hat << ',' << e.f_hat << ',' << format_double(e.h_hat.real()) << ','
            << format_double(e.h_hat.imag()) << ',' << format_double(e.peak_magnitude) << '\n';
    }
}

void emit_csv(const BerCurve& curve, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_ber_csv(curve, out);
    finish_write(out, path);
}

void emit_heatmap(const EffectiveChannel& g, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_heatmap(g.g, g.domain, out);
    finish_write(out, path);
}

void emit_column(const CVector& column, TransformDomain domain, std::size_t pilot_index,
                 const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_column(column, domain, pilot_index, out);
    finish_write(out, path);
}

}  // namespace afdm
