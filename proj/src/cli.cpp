#include "nclab/cli.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "nclab/config.hpp"
#include "nclab/pipeline.hpp"
#include "nclab/report.hpp"

namespace nclab {

namespace {

struct Common {
    std::string config;
    std::string out_dir = "./out";
    std::string convention = "lattice";
    bool quiet = false;
};

ResidueOptions residue_options(const RunConfig& cfg, Convention conv) {
    ResidueOptions r;
    r.convention = conv;
    r.sphere_order = cfg.sphere_order;
    r.torus_Q = cfg.torus_Q;
    return r;
}

OperatorSpectrumOptions spectrum_options(const RunConfig& cfg, const Symbol& sigma) {
    OperatorSpectrumOptions o;
    o.M = cfg.M;
    o.Q = cfg.Q;
    o.symmetrize = cfg.symmetrize.value_or(!is_x_independent(sigma, TruncationBox(sigma.dim(), cfg.M)));
    return o;
}

FitOptions fit_options(const RunConfig& cfg, bool fast_path) {
    FitOptions f = cfg.fit;
    if (cfg.discard_auto) f.discard = fast_path ? 0.0 : 0.5;
    return f;
}

Symbol discrete_symbol(const RunConfig& cfg) {
    Symbol s = build_symbol(cfg);
    return s.side() == Side::Discrete ? s : unflip(s);
}

int run_symbol_check(const Common& c, std::ostream& out) {
    const RunConfig cfg = load_config(c.config);
    const Symbol sigma = build_symbol(cfg);
    const auto n = static_cast<std::size_t>(sigma.dim());
    SeminormOptions opts;
    opts.torus_points = cfg.torus_points;
    Json reports = Json::array();
    if (!c.quiet) out << "alpha beta  sup_ratio            fitted_exponent      residual\n";
    for (const auto& [a, b] : cfg.pairs) {
        const auto rep = seminorm_estimate(sigma, MultiIndex::along(n, 0, a), MultiIndex::along(n, 0, b), cfg.window, opts);
        reports.push_back(seminorm_json(rep));
        if (!c.quiet)
            out << std::setw(5) << a << std::setw(5) << b << "  " << std::setprecision(10) << std::setw(20)
                << rep.sup_ratio << " " << std::setw(20) << rep.fitted_exponent << " " << std::setw(12)
                << rep.residual << "\n";
    }
    Json j;
    j["order"] = sigma.order();
    j["rho"] = sigma.rho();
    j["delta"] = sigma.delta();
    j["reports"] = reports;
    write_file(std::filesystem::path(c.out_dir) / "symbol_check.json", j.dump(2) + "\n");
    return 0;
}

int run_quantize(const Common& c, std::ostream& out) {
    const RunConfig cfg = load_config(c.config);
    const Symbol sigma = discrete_symbol(cfg);
    const TruncationBox box(sigma.dim(), cfg.M);
    const QuadratureGrid grid = cfg.Q > 0 ? QuadratureGrid{box.dim(), cfg.Q} : QuadratureGrid::for_box(box);
    const OperatorMatrix A = cfg.matrix == "discrete" ? assemble_discrete(sigma, box, grid)
                                                      : assemble_toroidal(flip(sigma), box, grid);
    const std::filesystem::path dir(c.out_dir);
    if (cfg.write_csv) write_file(dir / "matrix.csv", matrix_csv(A));
    if (cfg.write_binary) write_file(dir / "matrix.bin", matrix_binary(A));
    if (!c.quiet)
        out << "assembled " << cfg.matrix << " matrix, size " << A.entries.rows() << ", basis " << to_string(A.basis)
            << ", Q = " << grid.Q << "\n";
    return 0;
}

int run_spectrum(const Common& c, std::ostream& out, bool fit) {
    const RunConfig cfg = load_config(c.config);
    const Symbol sigma = discrete_symbol(cfg);
    const OperatorSpectrum spec = operator_spectrum(sigma, spectrum_options(cfg, sigma));
    const std::filesystem::path dir(c.out_dir);
    if (!fit) {
        write_file(dir / "spectrum.csv", spectrum_csv(spec.values));
        if (!c.quiet)
            out << "wrote " << spec.values.size() << " " << (spec.symmetrized ? "eigenvalues" : "singular values")
                << (spec.fast_path ? " (diagonal fast path)" : "") << "\n";
        return 0;
    }
    const SpectralSummary sum = trace_estimate(spec.values, fit_options(cfg, spec.fast_path));
    write_file(dir / "dixmier.json", dixmier_json(sum, spec.fast_path, spec.symmetrized).dump(2) + "\n");
    if (!c.quiet)
        out << std::setprecision(12) << "trace estimate " << sum.trace_estimate << "  (window [" << sum.window_begin
            << ", " << sum.window_end << "], rms " << sum.fit_rms << ", stability span " << sum.stability_span
            << ")\n";
    return 0;
}

int run_residue(const Common& c, std::ostream& out) {
    const RunConfig cfg = load_config(c.config);
    const Convention conv = c.convention == "paper" ? Convention::Paper : Convention::Lattice;
    const Symbol sigma = build_symbol(cfg);
    const ResidueReport rep = sigma.side() == Side::Discrete
                                  ? dixmier_trace_formula(sigma, residue_options(cfg, conv))
                                  : noncommutative_residue(sigma, residue_options(cfg, conv));
    write_file(std::filesystem::path(c.out_dir) / "residue.json", residue_json(rep).dump(2) + "\n");
    if (!c.quiet)
        out << std::setprecision(15) << "residue (" << to_string(conv) << " convention, " << to_string(rep.source)
            << " component) = " << rep.value.real()
            << (rep.value.imag() != 0.0 ? " + " + std::to_string(rep.value.imag()) + "i" : "") << "\n";
    return 0;
}

int run_verify_identity(const Common& c, std::ostream& out) {
    const RunConfig cfg = load_config(c.config);
    const Symbol sigma = discrete_symbol(cfg);
    const TruncationBox box(sigma.dim(), cfg.M);
    const QuadratureGrid grid = cfg.Q > 0 ? QuadratureGrid{box.dim(), cfg.Q} : QuadratureGrid::for_box(box);
    const IdentityReport rep = verify_identity(sigma, box, grid);
    write_file(std::filesystem::path(c.out_dir) / "identity.json", identity_json(rep, cfg.M, grid.Q).dump(2) + "\n");
    // Deviations are printed even with --quiet.
    out << std::setprecision(6) << std::scientific << "full deviation     " << rep.full_deviation << "\n"
        << "interior deviation " << rep.interior_deviation << "  (|index| <= " << rep.interior_half_width
        << ", bandwidth " << rep.bandwidth << ")\n"
        << std::defaultfloat;
    return 0;
}

int run_connes(const Common& c, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_config(c.config);
    const Symbol sigma = discrete_symbol(cfg);
    ConnesOptions opts;
    opts.spectrum = spectrum_options(cfg, sigma);
    opts.fit = cfg.fit;
    opts.discard_auto = cfg.discard_auto;
    opts.residue = residue_options(cfg, Convention::Lattice);
    const ConnesComparison cmp = run_connes_check(sigma, opts);
    const std::filesystem::path dir(c.out_dir);
    write_file(dir / "connes.json", connes_json(cmp).dump(2) + "\n");
    write_file(dir / "spectrum.csv", spectrum_csv(cmp.summary.values));
    if (!c.quiet) {
        out << std::setprecision(10) << "spectral estimate  " << cmp.spectral_estimate << "\n"
            << "residue (lattice)  " << cmp.residue_lattice.real() << "\n"
            << "residue (paper)    " << cmp.residue_paper.real() << "\n"
            << "relative deviation " << cmp.relative_deviation << "\n"
            << "stability span     " << cmp.summary.stability_span << "\n";
    }
    for (const auto& w : cmp.warnings) err << "warning: " << w << "\n";
    return 0;
}

}  // namespace

int command_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"nclab: discrete and toroidal pseudo-differential quantization, Dixmier traces and residues"};
    app.require_subcommand(1);
    app.footer(config_grammar());

    Common common;
    struct Cmd {
        const char* name;
        const char* help;
    };
    const Cmd cmds[] = {
        {"symbol-check", "Estimate symbol-class seminorms and decay exponents"},
        {"quantize", "Assemble and export the truncated operator matrix"},
        {"spectrum", "Write spectrum.csv (singular values or symmetrised eigenvalues)"},
        {"dixmier", "Estimate the Dixmier trace by log-fit of partial sums"},
        {"residue", "Compute the residue formula and write residue.json"},
        {"verify-identity", "Check t_sigma = F tau(x,D)* F^-1 and report deviations"},
        {"connes", "Compare the spectral Dixmier-trace estimate with the residue"},
    };
    for (const auto& cmd : cmds) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", common.config, "Config file")->required();
        sub->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--convention", common.convention, "Residue prefactor convention")
            ->check(CLI::IsMember({"lattice", "paper"}))
            ->capture_default_str();
        sub->add_flag("--quiet", common.quiet, "Suppress progress output");
        sub->footer(config_grammar());
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "symbol-check") return run_symbol_check(common, out);
        if (name == "quantize") return run_quantize(common, out);
        if (name == "spectrum") return run_spectrum(common, out, false);
        if (name == "dixmier") return run_spectrum(common, out, true);
        if (name == "residue") return run_residue(common, out);
        if (name == "verify-identity") return run_verify_identity(common, out);
        if (name == "connes") return run_connes(common, out, err);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int command_dispatch(int argc, const char* const* argv) { return command_dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace nclab
