#pragma once

// JSON encodings of the model types and the design file.

#include <chrono>
#include <ctime>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "resonet/coupling_matrix.hpp"
#include "resonet/error.hpp"
#include "resonet/polynomials.hpp"
#include "resonet/prototype.hpp"
#include "resonet/version.hpp"

namespace resonet::io {

using nlohmann::json;

/// Parses JSON text, reporting syntax errors with their position.
[[nodiscard]] inline json parse_json(std::string_view text, std::string_view source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(errc::parse_error, std::string(source) + ": " + e.what());
    }
}

/// Typed lookup of a required key; the diagnostic names the dotted path.
template <typename T>
[[nodiscard]] T require(const json& j, const std::string& key, const std::string& context) {
    const std::string where = context.empty() ? key : context + "." + key;
    if (!j.is_object())
        fail(errc::parse_error, "'" + (context.empty() ? std::string("document") : context) +
                                    "' must be an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(errc::parse_error, "missing required key '" + where + "'");
    try {
        if constexpr (std::is_same_v<T, int>) {
            if (!it->is_number_integer())
                fail(errc::parse_error, "key '" + where + "' must be an integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) fail(errc::parse_error, "key '" + where + "' must be a number");
        }
        return it->get<T>();
    } catch (const json::exception& e) {
        fail(errc::parse_error, "key '" + where + "' has the wrong type: " + e.what());
    }
}

template <typename T>
[[nodiscard]] std::optional<T> optional_key(const json& j, const std::string& key,
                                            const std::string& context) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return require<T>(j, key, context);
}

[[nodiscard]] inline json encode(const FilterSpec& s) {
    return {{"order", s.order}, {"f0", s.f0}, {"bandwidth", s.bandwidth}, {"ripple_db", s.ripple_db}};
}

[[nodiscard]] inline FilterSpec decode_spec(const json& j, const std::string& ctx) {
    FilterSpec s;
    s.order = require<int>(j, "order", ctx);
    s.f0 = require<double>(j, "f0", ctx);
    s.bandwidth = require<double>(j, "bandwidth", ctx);
    s.ripple_db = require<double>(j, "ripple_db", ctx);
    return s;
}

[[nodiscard]] inline json encode(const CouplingTargets& t) {
    return {{"q_ea", t.q_ea}, {"q_eb", t.q_eb}, {"k", t.k}};
}

[[nodiscard]] inline CouplingTargets decode_targets(const json& j, const std::string& ctx) {
    return {require<double>(j, "q_ea", ctx), require<double>(j, "q_eb", ctx),
            require<std::vector<double>>(j, "k", ctx)};
}

[[nodiscard]] inline json encode(const CouplingMatrix& cm) {
    json rows = json::array();
    for (int i = 0; i < cm.order(); ++i) {
        json row = json::array();
        for (int j = 0; j < cm.order(); ++j) row.push_back(cm.m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"n", cm.order()}, {"m", std::move(rows)}, {"qe1", cm.qe1()}, {"qen", cm.qen()}};
}

[[nodiscard]] inline CouplingMatrix decode_matrix(const json& j, const std::string& ctx) {
    const int n = require<int>(j, "n", ctx);
    const auto rows = require<std::vector<std::vector<double>>>(j, "m", ctx);
    if (n < 1 || rows.size() != static_cast<std::size_t>(n))
        fail(errc::parse_error, "'" + ctx + ".m' must have n rows");
    RealMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (rows[r].size() != static_cast<std::size_t>(n))
            fail(errc::parse_error, "'" + ctx + ".m' row " + std::to_string(r + 1) +
                                        " must have n entries");
        for (int c = 0; c < n; ++c) m(r, c) = rows[r][c];
    }
    return CouplingMatrix(std::move(m), require<double>(j, "qe1", ctx),
                          require<double>(j, "qen", ctx));
}

[[nodiscard]] inline json encode_roots(const std::vector<cplx>& roots) {
    json out = json::array();
    for (const cplx r : roots) out.push_back({r.real(), r.imag()});
    return out;
}

[[nodiscard]] inline std::vector<cplx> decode_roots(const json& j, const std::string& key,
                                                    const std::string& ctx) {
    const auto pairs = require<std::vector<std::vector<double>>>(j, key, ctx);
    std::vector<cplx> out;
    for (const auto& p : pairs) {
        if (p.size() != 2) fail(errc::parse_error, "'" + ctx + "." + key + "' entries are [re, im]");
        out.emplace_back(p[0], p[1]);
    }
    return out;
}

[[nodiscard]] inline json encode(const CharacteristicPolynomials& cp) {
    return {{"e_roots", encode_roots(cp.e_roots)},
            {"f_roots", encode_roots(cp.f_roots)},
            {"p_roots", encode_roots(cp.p_roots)},
            {"epsilon", cp.epsilon}};
}

[[nodiscard]] inline CharacteristicPolynomials decode_polynomials(const json& j,
                                                                  const std::string& ctx) {
    return {decode_roots(j, "e_roots", ctx), decode_roots(j, "f_roots", ctx),
            decode_roots(j, "p_roots", ctx), require<double>(j, "epsilon", ctx)};
}

struct Provenance {
    std::string tool;
    std::string timestamp; ///< UTC, ISO 8601

    [[nodiscard]] static Provenance now() {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&t, &utc);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
        return {"resonet " + std::string(version), buf};
    }

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct OptimizationRecord {
    int iterations = 0;
    double initial_cost = 0.0;
    double final_cost = 0.0;
    bool converged = false;

    friend bool operator==(const OptimizationRecord&, const OptimizationRecord&) = default;
};

struct DesignFile {
    FilterSpec spec;
    LowpassPrototype prototype;
    CouplingTargets targets;
    CouplingMatrix matrix;
    std::optional<CharacteristicPolynomials> polynomials;
    Provenance provenance;
    std::optional<OptimizationRecord> optimization;

    friend bool operator==(const DesignFile&, const DesignFile&) = default;
};

inline constexpr std::string_view design_format = "resonet-design";

[[nodiscard]] inline std::string serialize_design(const DesignFile& d) {
    json j;
    j["format"] = design_format;
    j["format_version"] = 1;
    j["provenance"] = {{"tool", d.provenance.tool}, {"timestamp", d.provenance.timestamp}};
    j["spec"] = encode(d.spec);
    j["prototype"] = {{"g", d.prototype.g}};
    j["targets"] = encode(d.targets);
    j["matrix"] = encode(d.matrix);
    if (d.polynomials) j["polynomials"] = encode(*d.polynomials);
    if (d.optimization)
        j["optimization"] = {{"iterations", d.optimization->iterations},
                             {"initial_cost", d.optimization->initial_cost},
                             {"final_cost", d.optimization->final_cost},
                             {"converged", d.optimization->converged}};
    return j.dump(2) + "\n";
}

[[nodiscard]] inline DesignFile parse_design(std::string_view text,
                                             std::string_view source = "design file") {
    const json j = parse_json(text, source);
    if (!j.is_object()) fail(errc::parse_error, std::string(source) + ": expected a JSON object");
    if (j.value("format", std::string()) != design_format)
        fail(errc::parse_error, std::string(source) + ": not a resonet design file");

    DesignFile d;
    const json& prov = j.contains("provenance") ? j.at("provenance") : json::object();
    d.provenance.tool = prov.value("tool", std::string());
    d.provenance.timestamp = prov.value("timestamp", std::string());
    d.spec = decode_spec(require<json>(j, "spec", ""), "spec");
    d.prototype.g = require<std::vector<double>>(require<json>(j, "prototype", ""), "g", "prototype");
    d.targets = decode_targets(require<json>(j, "targets", ""), "targets");
    try {
        d.matrix = decode_matrix(require<json>(j, "matrix", ""), "matrix");
    } catch (const error& e) {
        if (e.code() != errc::invalid_specification) throw;
        fail(errc::parse_error, std::string(source) + ": " + e.what());
    }
    if (j.contains("polynomials"))
        d.polynomials = decode_polynomials(j.at("polynomials"), "polynomials");
    if (j.contains("optimization")) {
        const json& o = j.at("optimization");
        d.optimization = OptimizationRecord{require<int>(o, "iterations", "optimization"),
                                            require<double>(o, "initial_cost", "optimization"),
                                            require<double>(o, "final_cost", "optimization"),
                                            require<bool>(o, "converged", "optimization")};
    }
    return d;
}

/// Runs the synthesis chain prototype -> targets -> matrix -> polynomials.
[[nodiscard]] inline DesignFile synthesize_design(const FilterSpec& spec) {
    spec.validate();
    DesignFile d;
    d.spec = spec;
    d.prototype = chebyshev_g_values(spec.order, spec.ripple_db);
    d.targets = couplings_from_prototype(d.prototype, spec.fbw());
    d.matrix = from_couplings(d.targets, spec.fbw());
    d.polynomials = extract_polynomials(d.matrix);
    d.provenance = Provenance::now();
    return d;
}

} // namespace resonet::io
