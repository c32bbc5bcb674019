#pragma once

// Synthesis and optimizer configuration files (JSON).
//
// Synthesis:  { "order": 4, "f0": 10e9, "bandwidth": 0.5e9, "ripple_db": 0.04321 }
//             "fbw" may replace "bandwidth" (bandwidth = fbw * f0).
// Optimizer:  { "max_iter": 500, "tol": 1e-10, "free": ["couplings", "qe"],
//               "perturb": 0.1, "nelder_mead": false }

#include <algorithm>
#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include "resonet/io/json_io.hpp"
#include "resonet/optimizer.hpp"
#include "resonet/prototype.hpp"

namespace resonet::io {

/// Parse errors (syntax, missing or mistyped keys) raise parse_error; the
/// returned spec is not validated.
[[nodiscard]] inline FilterSpec parse_filter_config(std::string_view text,
                                                    std::string_view source = "config") {
    const json j = parse_json(text, source);
    if (!j.is_object()) fail(errc::parse_error, std::string(source) + ": expected a JSON object");
    FilterSpec s;
    s.order = require<int>(j, "order", "");
    s.f0 = require<double>(j, "f0", "");
    s.ripple_db = require<double>(j, "ripple_db", "");
    const auto bw = optional_key<double>(j, "bandwidth", "");
    const auto fbw = optional_key<double>(j, "fbw", "");
    if (bw && fbw) fail(errc::parse_error, "give either 'bandwidth' or 'fbw', not both");
    if (!bw && !fbw) fail(errc::parse_error, "missing required key 'bandwidth' (or 'fbw')");
    s.bandwidth = bw ? *bw : *fbw * s.f0;
    return s;
}

struct OptimizerConfig {
    int max_iter = 500;
    double tol = 1e-10;
    std::vector<std::string> free{"couplings"};
    double perturb = 0.0; ///< relative perturbation applied to the free slots before optimizing
    bool nelder_mead = false;

    void validate() const {
        if (max_iter < 1) fail(errc::invalid_specification, "max_iter must be at least 1");
        if (!(tol >= 0.0)) fail(errc::invalid_specification, "tol must be non-negative");
        if (!(perturb >= 0.0 && perturb < 1.0))
            fail(errc::invalid_specification, "perturb must lie in [0, 1)");
        if (free.empty()) fail(errc::invalid_specification, "no free parameters selected");
    }
};

[[nodiscard]] inline OptimizerConfig parse_optimizer_config(std::string_view text,
                                                            std::string_view source = "config") {
    const json j = parse_json(text, source);
    if (!j.is_object()) fail(errc::parse_error, std::string(source) + ": expected a JSON object");
    OptimizerConfig c;
    if (auto v = optional_key<int>(j, "max_iter", "")) c.max_iter = *v;
    if (auto v = optional_key<double>(j, "tol", "")) c.tol = *v;
    if (auto v = optional_key<std::vector<std::string>>(j, "free", "")) c.free = *v;
    if (auto v = optional_key<double>(j, "perturb", "")) c.perturb = *v;
    if (auto v = optional_key<bool>(j, "nelder_mead", "")) c.nelder_mead = *v;
    return c;
}

/// Expands free-parameter names: "couplings" (ladder), "diagonal", "qe"
/// (both ports), "qe1", "qen", or a single entry such as "m1,2".
[[nodiscard]] inline std::vector<FreeParameter> resolve_free_parameters(
    const std::vector<std::string>& names, int n) {
    std::vector<FreeParameter> out;
    const auto add = [&](const FreeParameter& p) {
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    };
    for (const auto& name : names) {
        if (name == "couplings") {
            for (const auto& p : ladder_couplings(n)) add(p);
        } else if (name == "diagonal") {
            for (const auto& p : diagonal_entries(n)) add(p);
        } else if (name == "qe") {
            add(FreeParameter::input_q());
            add(FreeParameter::output_q());
        } else if (name == "qe1") {
            add(FreeParameter::input_q());
        } else if (name == "qen") {
            add(FreeParameter::output_q());
        } else if (name.size() > 1 && name[0] == 'm' && name.find(',') != std::string::npos) {
            const auto comma = name.find(',');
            int i = 0, j = 0;
            try {
                i = std::stoi(name.substr(1, comma - 1));
                j = std::stoi(name.substr(comma + 1));
            } catch (const std::exception&) {
                fail(errc::invalid_specification, "bad free parameter '" + name + "'");
            }
            if (i < 1 || j < 1 || i > n || j > n)
                fail(errc::invalid_specification, "free parameter '" + name + "' out of range");
            add(FreeParameter::coupling(i - 1, j - 1));
        } else {
            fail(errc::invalid_specification, "unknown free parameter '" + name + "'");
        }
    }
    return out;
}

} // namespace resonet::io
