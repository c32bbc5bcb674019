#pragma once

// Two-port response files: Touchstone v1 (.s2p) and a plain CSV layout.
//
// Touchstone output uses the option line "# GHz S RI R 50" and one row per
// frequency: freq S11 S21 S12 S22 as real/imaginary pairs. The reader also
// accepts Hz/kHz/MHz units and MA/DB data formats, comments, and rows
// wrapped over several lines.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "resonet/error.hpp"
#include "resonet/response.hpp"
#include "resonet/version.hpp"

namespace resonet::io {

namespace detail {

[[nodiscard]] inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[nodiscard]] inline double parse_number(const std::string& token, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        fail(errc::parse_error,
             "line " + std::to_string(line) + ": '" + token + "' is not a number");
    }
}

} // namespace detail

[[nodiscard]] inline std::string write_touchstone(const FrequencyResponse& resp) {
    resp.validate();
    if (resp.domain != FrequencyDomain::bandpass_hz)
        fail(errc::invalid_specification, "Touchstone output needs a grid in Hz");
    std::ostringstream out;
    out << "! resonet " << version << " two-port S-parameters\n";
    out << "! freq S11re S11im S21re S21im S12re S12im S22re S22im\n";
    out << "# GHz S RI R 50\n";
    for (std::size_t i = 0; i < resp.size(); ++i) {
        const cplx s22 = resp.s22.empty() ? resp.s11[i] : resp.s22[i];
        const cplx row[4] = {resp.s11[i], resp.s21[i], resp.s21[i], s22};
        out << detail::format_number(resp.grid[i] / 1e9);
        for (const cplx v : row)
            out << ' ' << detail::format_number(v.real()) << ' ' << detail::format_number(v.imag());
        out << '\n';
    }
    return out.str();
}

[[nodiscard]] inline FrequencyResponse parse_touchstone(std::string_view text) {
    double unit = 1e9; // Touchstone default is GHz
    std::string format = "ma";
    bool saw_option = false;
    std::vector<double> values;
    std::vector<std::size_t> value_lines;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto bang = line.find('!'); bang != std::string::npos) line.erase(bang);
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first)) continue;
        if (first[0] == '#') {
            if (saw_option) continue; // only the first option line counts
            saw_option = true;
            std::vector<std::string> opts;
            if (first.size() > 1) opts.push_back(first.substr(1));
            for (std::string t; tokens >> t;) opts.push_back(t);
            for (std::size_t k = 0; k < opts.size(); ++k) {
                const std::string o = detail::lower(opts[k]);
                if (o == "hz") unit = 1.0;
                else if (o == "khz") unit = 1e3;
                else if (o == "mhz") unit = 1e6;
                else if (o == "ghz") unit = 1e9;
                else if (o == "ri" || o == "ma" || o == "db") format = o;
                else if (o == "s") continue;
                else if (o == "r") ++k; // reference impedance value
                else
                    fail(errc::parse_error, "line " + std::to_string(lineno) +
                                                ": unsupported option '" + opts[k] + "'");
            }
            continue;
        }
        values.push_back(detail::parse_number(first, lineno));
        value_lines.push_back(lineno);
        for (std::string t; tokens >> t;) {
            values.push_back(detail::parse_number(t, lineno));
            value_lines.push_back(lineno);
        }
    }
    if (values.size() % 9 != 0)
        fail(errc::parse_error, "line " + std::to_string(value_lines.empty() ? 0 : value_lines.back()) +
                                    ": a two-port row needs 9 values");

    const auto to_complex = [&](double a, double b) {
        if (format == "ri") return cplx(a, b);
        const double mag = format == "db" ? std::pow(10.0, a / 20.0) : a;
        return std::polar(mag, b * std::numbers::pi / 180.0);
    };

    FrequencyResponse r;
    r.domain = FrequencyDomain::bandpass_hz;
    for (std::size_t i = 0; i < values.size(); i += 9) {
        r.grid.push_back(values[i] * unit);
        r.s11.push_back(to_complex(values[i + 1], values[i + 2]));
        r.s21.push_back(to_complex(values[i + 3], values[i + 4]));
        r.s22.push_back(to_complex(values[i + 7], values[i + 8]));
    }
    if (r.grid.empty()) fail(errc::parse_error, "Touchstone file has no data rows");
    try {
        r.validate();
    } catch (const error& e) {
        fail(errc::parse_error, std::string("Touchstone data: ") + e.what());
    }
    return r;
}

inline constexpr std::string_view csv_header = "freq_hz,s11_re,s11_im,s21_re,s21_im";

[[nodiscard]] inline std::string write_csv(const FrequencyResponse& resp) {
    resp.validate();
    std::ostringstream out;
    out << csv_header << '\n';
    for (std::size_t i = 0; i < resp.size(); ++i)
        out << detail::format_number(resp.grid[i]) << ',' << detail::format_number(resp.s11[i].real())
            << ',' << detail::format_number(resp.s11[i].imag()) << ','
            << detail::format_number(resp.s21[i].real()) << ','
            << detail::format_number(resp.s21[i].imag()) << '\n';
    return out.str();
}

[[nodiscard]] inline FrequencyResponse parse_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    FrequencyResponse r;
    r.domain = FrequencyDomain::bandpass_hz;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != csv_header)
                fail(errc::parse_error, "line " + std::to_string(lineno) +
                                            ": expected header '" + std::string(csv_header) + "'");
            header = true;
            continue;
        }
        std::vector<double> v;
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');)
            v.push_back(detail::parse_number(cell, lineno));
        if (v.size() != 5)
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": expected 5 columns");
        r.grid.push_back(v[0]);
        r.s11.emplace_back(v[1], v[2]);
        r.s21.emplace_back(v[3], v[4]);
    }
    if (r.grid.empty()) fail(errc::parse_error, "CSV file has no data rows");
    try {
        r.validate();
    } catch (const error& e) {
        fail(errc::parse_error, std::string("CSV data: ") + e.what());
    }
    return r;
}

/// Picks the parser from the content: CSV files start with the CSV header.
[[nodiscard]] inline FrequencyResponse parse_response(std::string_view text) {
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string_view::npos && text.substr(start).starts_with("freq_hz"))
        return parse_csv(text);
    return parse_touchstone(text);
}

} // namespace resonet::io
