#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit code, so tests can drive it in-process.

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resonet/io/catalog.hpp"
#include "resonet/io/config.hpp"
#include "resonet/io/files.hpp"
#include "resonet/io/json_io.hpp"
#include "resonet/io/touchstone.hpp"
#include "resonet/resonet.hpp"

#ifndef RESONET_DATA_DIR
#define RESONET_DATA_DIR "data"
#endif

namespace resonet::cli {

enum exit_code : int {
    ok = 0,
    failure = 1,
    parse = 2,
    invalid = 3,
    io = 4,
    extraction = 5,
    numerical = 6,
};

[[nodiscard]] inline int exit_code_for(errc code) {
    switch (code) {
    case errc::parse_error: return parse;
    case errc::invalid_specification:
    case errc::below_cutoff:
    case errc::unknown_preset: return invalid;
    case errc::io_error: return io;
    case errc::insufficient_peaks:
    case errc::insufficient_span:
    case errc::no_passband: return extraction;
    case errc::singular_frequency:
    case errc::numerical_failure: return numerical;
    }
    return failure;
}

namespace detail {

[[gnu::format(printf, 1, 2)]] inline std::string strf(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    va_list copy;
    va_copy(copy, args);
    const int len = std::vsnprintf(nullptr, 0, fmt, copy);
    va_end(copy);
    std::string out(static_cast<std::size_t>(std::max(len, 0)), '\0');
    std::vsnprintf(out.data(), out.size() + 1, fmt, args);
    va_end(args);
    return out;
}

[[nodiscard]] inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("RESONET_DATA_DIR"); env && *env) return env;
    return RESONET_DATA_DIR;
}

[[nodiscard]] inline std::vector<WaveguideSpec> load_presets() {
    const auto path = data_dir() / "waveguides.json";
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return builtin_presets();
    return io::parse_waveguide_catalog(io::read_text_file(path), path.string());
}

[[nodiscard]] inline std::uint64_t seed_from_env() {
    const char* env = std::getenv("RESONET_SEED");
    if (!env || !*env) return 1;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        fail(errc::invalid_specification, std::string("RESONET_SEED is not an integer: ") + env);
    }
}

inline void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (path) io::write_text_atomic(*path, text);
    else out << text;
}

[[nodiscard]] inline std::string spec_line(const FilterSpec& s) {
    return strf("n = %d, f0 = %.6g GHz, BW = %.6g MHz (FBW = %.5f), ripple = %.5g dB\n", s.order,
                s.f0 / 1e9, s.bandwidth / 1e6, s.fbw(), s.ripple_db);
}

/// Q_ea, Q_eb and K_c1..K_c(n-1) as one table row.
[[nodiscard]] inline std::string targets_table(const CouplingTargets& t) {
    std::string head = strf("%-10s%-10s", "Q_ea", "Q_eb");
    std::string row = strf("%-10.3f%-10.3f", t.q_ea, t.q_eb);
    for (std::size_t i = 0; i < t.k.size(); ++i) {
        head += strf("%-8s", ("K_c" + std::to_string(i + 1)).c_str());
        row += strf("%-8.3f", t.k[i]);
    }
    return head + "\n" + row + "\n";
}

[[nodiscard]] inline std::string matrix_block(const CouplingMatrix& cm) {
    std::string s = strf("qe1 = %.6f, qen = %.6f\n", cm.qe1(), cm.qen());
    for (int i = 0; i < cm.order(); ++i) {
        for (int j = 0; j < cm.order(); ++j) s += strf("%10.6f", cm.m(i, j));
        s += "\n";
    }
    return s;
}

[[nodiscard]] inline std::string roots_line(const std::vector<cplx>& roots) {
    if (roots.empty()) return "(none)\n";
    std::string s;
    for (const cplx r : roots) s += strf(" %+.6f%+.6fj", r.real(), r.imag());
    return s + "\n";
}

[[nodiscard]] inline std::string design_report(const io::DesignFile& d) {
    std::string s = "Design: " + spec_line(d.spec);
    s += "\nChebyshev prototype:\n";
    for (std::size_t i = 0; i < d.prototype.g.size(); ++i)
        s += strf("  g%zu = %.6f\n", i, d.prototype.g[i]);
    s += "\nCoupling coefficients and external quality factors:\n" + targets_table(d.targets);
    s += "\nNormalized coupling matrix:\n" + matrix_block(d.matrix);
    if (d.polynomials) {
        s += "\nPoles (E):            " + roots_line(d.polynomials->e_roots);
        s += "Reflection zeros (F): " + roots_line(d.polynomials->f_roots);
        s += "Transmission zeros:   " + roots_line(d.polynomials->p_roots);
        s += strf("epsilon = %.9g\n", d.polynomials->epsilon);
    }
    return s;
}

[[nodiscard]] inline io::DesignFile load_design(const std::string& path) {
    return io::parse_design(io::read_text_file(path), path);
}

/// Bandpass targets read back from a matrix (ladder entries only).
[[nodiscard]] inline CouplingTargets targets_of(const CouplingMatrix& cm, double fbw) {
    CouplingTargets t{cm.qe1() / fbw, cm.qen() / fbw, {}};
    for (int i = 0; i + 1 < cm.order(); ++i) t.k.push_back(cm.m(i, i + 1) * fbw);
    return t;
}

} // namespace detail

struct Options {
    std::string config;
    std::string design;
    std::string response;
    std::optional<std::string> out;
    std::optional<std::string> report;
    std::string format = "touchstone";
    int points = 1001;
    std::optional<double> f_start_ghz;
    std::optional<double> f_stop_ghz;
    std::string mode = "k";
    std::optional<double> f0_ghz;
    double level_db = -20.0;
    std::string preset;
    std::optional<double> a_mm;
    std::optional<double> at_ghz;
};

inline int cmd_synthesize(const Options& o, std::ostream& out) {
    const auto spec = io::parse_filter_config(io::read_text_file(o.config), o.config);
    const io::DesignFile d = io::synthesize_design(spec);
    const std::string report = detail::design_report(d);
    if (o.out) io::write_text_atomic(*o.out, io::serialize_design(d));
    if (o.report) io::write_text_atomic(*o.report, report);
    out << report;
    if (o.out) out << "design written to " << *o.out << "\n";
    return ok;
}

[[nodiscard]] inline std::pair<double, double> sweep_range(const Options& o, const FilterSpec& s) {
    const double lo = o.f_start_ghz ? *o.f_start_ghz * 1e9 : s.f0 - 2.0 * s.bandwidth;
    const double hi = o.f_stop_ghz ? *o.f_stop_ghz * 1e9 : s.f0 + 2.0 * s.bandwidth;
    return {lo, hi};
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
    const io::DesignFile d = detail::load_design(o.design);
    const auto [lo, hi] = sweep_range(o, d.spec);
    const FrequencyResponse r = sweep(d.matrix, d.spec, lo, hi, o.points);
    detail::emit(o.out, o.format == "csv" ? io::write_csv(r) : io::write_touchstone(r), out);
    return ok;
}

inline int cmd_extract(const Options& o, std::ostream& out) {
    const FrequencyResponse r = io::parse_response(io::read_text_file(o.response));
    using detail::strf;
    std::string s;
    if (o.mode == "k") {
        const PeakPair p = find_peak_pair(r);
        s = strf("f_p1 = %.9g GHz\nf_p2 = %.9g GHz\nk = %.6f\n", p.f_p1 / 1e9, p.f_p2 / 1e9,
                 extract_k(p));
    } else {
        const LoadedBandwidth bw = loaded_bandwidth(r);
        const double f0 = o.f0_ghz ? *o.f0_ghz * 1e9 : bw.f_peak;
        s = strf("f0 = %.9g GHz\nf_low = %.9g GHz\nf_high = %.9g GHz\nQ_e = %.3f\n", f0 / 1e9,
                 bw.f_low / 1e9, bw.f_high / 1e9, extract_qe(r, f0));
    }
    detail::emit(o.report, s, out);
    if (o.report) out << s;
    return ok;
}

inline int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
    io::DesignFile d = detail::load_design(o.design);
    io::OptimizerConfig cfg;
    if (!o.config.empty())
        cfg = io::parse_optimizer_config(io::read_text_file(o.config), o.config);
    cfg.validate();

    const auto free = io::resolve_free_parameters(cfg.free, d.matrix.order());
    CouplingMatrix start = d.matrix;
    const std::uint64_t seed = detail::seed_from_env();
    if (cfg.perturb > 0.0) start = perturb(start, free, cfg.perturb, seed);

    OptimizerSettings settings;
    settings.nelder_mead_fallback = cfg.nelder_mead;
    settings.on_iteration = [&err](const IterationRecord& rec) {
        err << detail::strf("iteration %d cost %.6e max_step %.3e\n", rec.iteration, rec.cost,
                            rec.max_step);
    };
    const auto problem = OptimizationProblem::for_spec(start, d.spec, free);
    const OptimizationResult res = optimize(problem, cfg.max_iter, cfg.tol, settings);

    d.matrix = res.final;
    d.targets = detail::targets_of(res.final, d.spec.fbw());
    d.polynomials = extract_polynomials(res.final);
    d.provenance = io::Provenance::now();
    d.optimization = io::OptimizationRecord{res.iterations, res.initial_cost, res.final_cost,
                                            res.converged};

    std::string s = "Design: " + detail::spec_line(d.spec);
    s += detail::strf("seed %llu, perturbation %.3g, %d free parameter(s)\n",
                      static_cast<unsigned long long>(seed), cfg.perturb,
                      static_cast<int>(free.size()));
    s += detail::strf("initial cost %.6e, final cost %.6e after %d iteration(s), %s\n",
                      res.initial_cost, res.final_cost, res.iterations,
                      res.converged ? "converged" : "not converged");
    s += "\nCoupling coefficients and external quality factors:\n" +
         detail::targets_table(d.targets);
    s += "\nNormalized coupling matrix:\n" + detail::matrix_block(d.matrix);
    if (o.out) io::write_text_atomic(*o.out, io::serialize_design(d));
    if (o.report) io::write_text_atomic(*o.report, s);
    out << s;
    return ok;
}

inline int cmd_waveguide(const Options& o, std::ostream& out) {
    WaveguideSpec w;
    if (o.a_mm && !o.preset.empty())
        fail(errc::invalid_specification, "give either a preset name or --a-mm, not both");
    if (o.a_mm) {
        w.name = "custom";
        w.a = *o.a_mm * 1e-3;
    } else if (!o.preset.empty()) {
        w = find_preset(detail::load_presets(), o.preset);
    } else {
        fail(errc::invalid_specification, "give a preset name or --a-mm");
    }
    using detail::strf;
    std::string s = strf("%s: a = %.4f mm, TE10 cutoff = %.3f GHz\n", w.name.c_str(), w.a * 1e3,
                         cutoff_frequency(w.a) / 1e9);
    if (w.band_stop > 0.0)
        s += strf("usable band %.4g-%.4g GHz, b = %.4f mm\n", w.band_start / 1e9, w.band_stop / 1e9,
                  w.b * 1e3);
    if (o.at_ghz) {
        const double f = *o.at_ghz * 1e9;
        s += strf("at %.6g GHz: guided wavelength = %.4f mm (free space %.4f mm)\n", *o.at_ghz,
                  guided_wavelength(w.a, f) * 1e3, speed_of_light / f * 1e3);
    }
    out << s;
    return ok;
}

inline int cmd_analyze(const Options& o, std::ostream& out) {
    FrequencyResponse r;
    std::optional<io::DesignFile> d;
    if (!o.design.empty()) d = detail::load_design(o.design);
    if (!o.response.empty()) {
        r = io::parse_response(io::read_text_file(o.response));
        if (d) r.spec = d->spec;
    } else if (d) {
        const auto [lo, hi] = sweep_range(o, d->spec);
        r = sweep(d->matrix, d->spec, lo, hi, o.points);
    } else {
        fail(errc::invalid_specification, "analyze needs --design or --response");
    }
    const ResponseMetrics m = analyze_response(r, o.level_db);
    using detail::strf;
    std::string s = strf("center frequency = %.6f GHz\n", m.f_center / 1e9);
    s += strf("bandwidth at %.2f dB = %.3f MHz\n", o.level_db, m.bandwidth_at_level / 1e6);
    s += strf("max in-band |S11| = %.3f dB\n", m.max_inband_s11_db);
    s += strf("reflection zeros = %d\n", m.reflection_zero_count);
    detail::emit(o.report, s, out);
    if (o.report) out << s;
    return ok;
}

[[nodiscard]] inline int run(const std::vector<std::string>& args, std::ostream& out,
                             std::ostream& err) {
    CLI::App app{"Coupled-resonator bandpass filter synthesis and analysis", "resonet"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    Options o;

    auto* syn = app.add_subcommand("synthesize", "Prototype, couplings, matrix and polynomials");
    syn->add_option("--config", o.config, "Filter configuration (JSON)")->required();
    syn->add_option("--out", o.out, "Design file to write");
    syn->add_option("--report", o.report, "Also write the report to this file");

    const auto grid_opts = [&o](CLI::App* c) {
        c->add_option("--points", o.points, "Number of grid points");
        c->add_option("--f-start", o.f_start_ghz, "Start frequency, GHz");
        c->add_option("--f-stop", o.f_stop_ghz, "Stop frequency, GHz");
    };

    auto* swp = app.add_subcommand("sweep", "Export S-parameters of a design");
    swp->add_option("--design", o.design, "Design file")->required();
    swp->add_option("--out", o.out, "Output file (default: standard output)");
    swp->add_option("--format", o.format, "touchstone or csv")
        ->check(CLI::IsMember({"touchstone", "csv"}));
    grid_opts(swp);

    auto* ext = app.add_subcommand("extract", "Coupling or external Q from a measured response");
    ext->add_option("--response", o.response, "Touchstone or CSV file")->required();
    ext->add_option("--mode", o.mode, "k or qe")->check(CLI::IsMember({"k", "qe"}));
    ext->add_option("--f0-ghz", o.f0_ghz, "Center frequency for Q_e (default: peak)");
    ext->add_option("--report", o.report, "Also write the report to this file");

    auto* opt = app.add_subcommand("optimize", "Refine a design's coupling matrix");
    opt->add_option("--design", o.design, "Design file")->required();
    opt->add_option("--config", o.config, "Optimizer configuration (JSON)");
    opt->add_option("--out", o.out, "Updated design file");
    opt->add_option("--report", o.report, "Also write the report to this file");

    auto* wg = app.add_subcommand("waveguide", "TE10 cutoff and guided wavelength");
    wg->add_option("preset", o.preset, "Preset name (WG16, WR3, ...)");
    wg->add_option("--a-mm", o.a_mm, "Broad wall width, mm");
    wg->add_option("--at-ghz", o.at_ghz, "Query frequency, GHz");

    auto* ana = app.add_subcommand("analyze", "Passband metrics of a design or response file");
    ana->add_option("--design", o.design, "Design file");
    ana->add_option("--response", o.response, "Touchstone or CSV file");
    ana->add_option("--level-db", o.level_db, "Passband threshold on |S11|, dB");
    ana->add_option("--report", o.report, "Also write the report to this file");
    grid_opts(ana);

    std::vector<std::string> argv_store{"resonet"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return invalid;
    }

    try {
        if (syn->parsed()) return cmd_synthesize(o, out);
        if (swp->parsed()) return cmd_sweep(o, out);
        if (ext->parsed()) return cmd_extract(o, out);
        if (opt->parsed()) return cmd_optimize(o, out, err);
        if (wg->parsed()) return cmd_waveguide(o, out);
        if (ana->parsed()) return cmd_analyze(o, out);
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}

} // namespace resonet::cli
