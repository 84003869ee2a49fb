// outagekit command-line tool: sweeps, asymptotics, figures, classification.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "outagekit/config.hpp"
#include "outagekit/error.hpp"
#include "outagekit/figures.hpp"
#include "outagekit/fit.hpp"
#include "outagekit/harness.hpp"
#include "outagekit/io.hpp"

namespace ok = outagekit;

namespace {

enum ExitCode {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kParse = 3,
    kValidation = 4,
    kNotImplemented = 5,
    kRuntime = 6,
};

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    std::optional<std::size_t> reps;
};

void add_common(CLI::App* cmd, Overrides& o, bool needs_config) {
    auto* c = cmd->add_option("-c,--config", o.config, "INI run configuration");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "base seed (overrides sweep.seed)");
    cmd->add_option("--out", o.out, "output directory (overrides output.directory)");
    cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores (overrides sweep.threads)");
    cmd->add_option("--reps", o.reps, "replications per point (overrides sweep.replications)")
        ->check(CLI::PositiveNumber);
}

ok::RunConfig load(const Overrides& o) {
    ok::RunConfig cfg = o.config.empty() ? ok::parse_config("") : ok::load_config(o.config);
    if (o.seed) cfg.sweep.seed = *o.seed;
    if (o.out) cfg.output_directory = *o.out;
    if (o.threads) cfg.sweep.threads = *o.threads;
    if (o.reps) cfg.sweep.replications = *o.reps;
    cfg.validate();
    return cfg;
}

std::string num(double x) { return ok::format_number(x); }

int cmd_simulate(const Overrides& o) {
    const auto cfg = load(o);
    const auto result = ok::sweep(cfg.sweep_config());
    const auto path = cfg.output_directory / "sweep.csv";
    {
        auto os = ok::open_output(path);
        ok::write_sweep_csv(os, result);
    }
    std::cout << "wrote " << path.string() << " (" << result.points.size() << " points, " << result.model << " + "
              << result.scheme << ")\n";
    return kOk;
}

int cmd_asymptotic(const Overrides& o) {
    const auto cfg = load(o);
    const auto a = ok::gamma_kappa_for(cfg.model, cfg.mac, cfg.link, cfg.pathloss);
    const auto dir = cfg.output_directory;
    {
        auto os = ok::open_output(dir / "asymptotic.csv");
        ok::write_asymptotic_csv(os, {{a, cfg.pathloss.alpha(), cfg.link.theta}});
    }
    std::cout << "scheme=" << a.scheme << " gamma=" << num(a.gamma) << " kappa=" << num(a.kappa)
              << " provenance=" << ok::to_string(a.provenance);
    if (a.p0) std::cout << " p0=" << num(*a.p0);
    if (a.gamma > 0.0 && a.kappa > 0.0) {
        std::cout << " eta_max=" << num(ok::eta_max(a.gamma, a.kappa));
    }
    std::cout << "\n  " << a.validity << "\n";
    if (a.gamma > 0.0 && a.kappa >= 1.0 && !a.p0) {
        std::vector<double> grid;
        for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
        auto os = ok::open_output(dir / "envelope.csv");
        ok::write_envelope_csv(os, ok::conjecture_envelope(a.gamma, a.kappa, grid));
    }
    if (const auto* t = std::get_if<ok::TdmaLattice>(&cfg.mac)) {
        const auto& lat = std::get<ok::LatticeModel>(cfg.model);
        if (lat.spacing == 1.0 && cfg.pathloss.kind() == ok::PathLossKind::Singular &&
            cfg.link.resolved_distance(cfg.pathloss) == 1.0) {
            std::vector<std::vector<double>> rows;
            for (int m = 2; m <= 12; ++m) {
                const auto b = ok::tdma_bounds(t->dimension, m, cfg.link.theta, cfg.pathloss.alpha());
                rows.push_back({static_cast<double>(m), b.eta, b.lower, b.exact, b.upper});
            }
            auto os = ok::open_output(dir / "tdma_bounds.csv");
            ok::write_table_csv(os, {"m", "eta", "lower", "exact", "upper"}, rows);
        }
    }
    std::cout << "wrote " << (dir / "asymptotic.csv").string() << "\n";
    return kOk;
}

int cmd_figure(const std::string& id, const Overrides& o) {
    const auto cfg = load(o);
    ok::FigureOptions fo;
    fo.seed = cfg.sweep.seed;
    fo.replications = cfg.sweep.replications;
    fo.threads = cfg.sweep.threads;
    fo.progress = [](const std::string& s) { std::cerr << s << "\n"; };
    const auto report = ok::reproduce_figure(id, cfg.output_directory, fo);
    for (const auto& c : report.curves) {
        std::cout << c.file << "  " << c.label << " [" << c.kind << "]";
        if (c.kappa_fit) std::cout << " kappa_fit=" << num(*c.kappa_fit);
        if (c.gamma_fit) std::cout << " gamma_fit=" << num(*c.gamma_fit);
        if (c.gamma_analytic) std::cout << " gamma=" << num(*c.gamma_analytic);
        if (c.kappa_analytic) std::cout << " kappa=" << num(*c.kappa_analytic);
        if (c.cls) std::cout << " class=" << ok::to_string(*c.cls);
        std::cout << "\n";
    }
    std::cout << "wrote " << report.directory.string() << "\n";
    return kOk;
}

int cmd_conditions(const Overrides& o) {
    const auto cfg = load(o);
    ok::ConditionOptions co;
    co.seed = cfg.sweep.seed;
    const auto report = ok::sweep_conditions(cfg.sweep_config(), co);
    std::vector<std::vector<double>> rows;
    for (const auto& r : report.rows) {
        rows.push_back({r.eta, r.k_unit_square, r.k_unit_square_se, r.scaled_k, r.scaled_k_se, r.mean_points,
                        r.flagged ? 1.0 : 0.0});
    }
    const auto path = cfg.output_directory / "conditions.csv";
    {
        auto os = ok::open_output(path);
        ok::write_table_csv(os, {"eta", "k_unit_square", "k_unit_square_se", "scaled_k", "scaled_k_se", "mean_points",
                                 "flagged"},
                            rows);
    }
    std::cout << "c1_bounded=" << report.c1_bounded << " c2_positive=" << report.c2_positive
              << " reasonable=" << report.reasonable << " growth_exponent=" << num(report.k_growth_exponent) << "\n";
    if (!report.notes.empty()) std::cout << "  " << report.notes << "\n";
    std::cout << "wrote " << path.string() << "\n";
    return kOk;
}

int cmd_classify(const Overrides& o, bool with_conditions) {
    const auto cfg = load(o);
    const auto sc = cfg.sweep_config();
    const auto result = ok::sweep(sc);
    std::optional<ok::ConditionReport> cond;
    if (with_conditions) {
        ok::ConditionOptions co;
        co.seed = cfg.sweep.seed;
        cond = ok::sweep_conditions(sc, co);
    }
    ok::ClassifyOptions opts;
    if (cfg.sweep.fit_window) opts.window = *cfg.sweep.fit_window;
    const auto label = ok::classify(result, cond, opts);
    std::cout << "class=" << ok::to_string(label.cls) << " p0=" << num(label.p0) << " kappa=" << num(label.kappa)
              << " gamma=" << num(label.gamma) << "\n  " << label.diagnostics << "\n";
    const auto dir = cfg.output_directory;
    {
        auto os = ok::open_output(dir / "sweep.csv");
        ok::write_sweep_csv(os, result);
    }
    ok::write_key_values(dir / "classification.txt",
                         {{"class", ok::to_string(label.cls)},
                          {"p0", num(label.p0)},
                          {"p0_se", num(label.p0_se)},
                          {"kappa", num(label.kappa)},
                          {"gamma", num(label.gamma)},
                          {"low_eta_slope", num(label.low_eta_slope)},
                          {"low_eta_slope_se", num(label.low_eta_slope_se)},
                          {"diagnostics", label.diagnostics}});
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"outagekit: outage and spatial contention of MAC schemes on point-process networks"};
    app.require_subcommand(1);
    Overrides o;
    std::string figure_id;
    bool with_conditions = false;

    auto* sim = app.add_subcommand("simulate", "run one eta sweep and write sweep.csv");
    add_common(sim, o, true);
    auto* asy = app.add_subcommand("asymptotic", "spatial contention gamma and exponent kappa");
    add_common(asy, o, true);
    auto* fig = app.add_subcommand("figure", "reproduce a figure dataset");
    fig->add_option("id", figure_id, "3, 4, 5, 6, 7, 8, swap5, swap6, linkR or 2-demo")->required();
    add_common(fig, o, false);
    auto* cls = app.add_subcommand("classify", "sweep and assign a taxonomy class");
    add_common(cls, o, true);
    cls->add_flag("--with-conditions", with_conditions, "also check the reasonableness conditions");
    auto* con = app.add_subcommand("conditions", "check the reasonableness conditions on the eta grid");
    add_common(con, o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*sim) return cmd_simulate(o);
        if (*asy) return cmd_asymptotic(o);
        if (*fig) return cmd_figure(figure_id, o);
        if (*cls) return cmd_classify(o, with_conditions);
        if (*con) return cmd_conditions(o);
    } catch (const ok::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ok::ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kParse;
    } catch (const ok::ParameterError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kValidation;
    } catch (const ok::NotImplementedError& e) {
        std::cerr << "not implemented: " << e.what() << "\n";
        return kNotImplemented;
    } catch (const ok::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
