#include "outagekit/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "outagekit/error.hpp"
#include "outagekit/io.hpp"
#include "outagekit/special.hpp"

namespace outagekit {

namespace fs = std::filesystem;

namespace {

const std::vector<double> kAlohaGrid = {1.0,  0.7,   0.5,   0.35,  0.25,  0.18,  0.12, 0.08,
                                        0.05, 0.035, 0.025, 0.018, 0.012, 0.008, 0.005, 0.0035, 0.002};
const std::vector<double> kCsmaGrid = {0.5,  0.4,   0.3,   0.25,  0.2,   0.15,   0.1,
                                       0.07, 0.05, 0.035, 0.025, 0.018, 0.0125, 0.01};

std::string fmt(double x) { return format_number(x); }

class Builder {
public:
    Builder(std::string id, const fs::path& outdir, const FigureOptions& options)
        : options_(options) {
        report_.id = std::move(id);
        report_.directory = outdir / ("fig" + report_.id);
        fs::create_directories(report_.directory);
        manifest_.emplace_back("figure", report_.id);
        manifest_.emplace_back("seed", std::to_string(options.seed));
        manifest_.emplace_back("replications", std::to_string(options.replications));
        manifest_.emplace_back("seed_rule", "curve k uses derive_seed(seed, k); point i of a sweep uses derive_seed(curve seed, i)");
    }

    void set(const std::string& key, const std::string& value) { manifest_.emplace_back(key, value); }

    void progress(const std::string& text) const {
        if (options_.progress) options_.progress(text);
    }

    std::uint64_t curve_seed() const { return derive_seed(options_.seed, report_.curves.size() + 1); }

    CurveSummary& add_curve(const Curve& curve, const std::string& kind) {
        CurveSummary s;
        s.label = curve.label;
        s.kind = kind;
        s.file = next_file();
        auto os = open_output(report_.directory / s.file);
        write_curve_csv(os, curve);
        return push(std::move(s));
    }

    CurveSummary& add_table(const std::string& label, const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows) {
        CurveSummary s;
        s.label = label;
        s.kind = "table";
        s.file = next_file();
        auto os = open_output(report_.directory / s.file);
        write_table_csv(os, header, rows);
        return push(std::move(s));
    }

    /// Simulated sweep plus its closed form and asymptote when available.
    SweepResult simulate(const std::string& label, SweepConfig cfg, std::optional<FitWindow> window = std::nullopt) {
        cfg.estimator.seed = curve_seed();
        cfg.estimator.replications = options_.replications;
        cfg.estimator.threads = options_.threads;
        progress("fig" + report_.id + ": " + label);
        const Scenario scenario(cfg.model, with_eta(cfg.mac, cfg.eta_grid.front()));
        SweepResult r = sweep(cfg);

        CurveSummary s;
        s.label = label;
        s.kind = "simulation";
        const bool has_gamma = r.analytic && std::isfinite(r.analytic->gamma) && r.analytic->gamma > 0.0;
        if (has_gamma) {
            s.gamma_analytic = r.analytic->gamma;
            s.kappa_analytic = r.analytic->kappa;
        }
        const FitWindow w = window.value_or(
            has_gamma ? default_fit_window(r.analytic->gamma, r.analytic->kappa) : FitWindow{});
        const double p0 = has_gamma && r.analytic->p0 ? *r.analytic->p0 : 1.0;
        std::ostringstream note;
        note << "fit window [" << fmt(w.eta_min) << ", " << fmt(w.eta_max) << "]";
        try {
            const auto f = fit_kappa_gamma(r, w, p0);
            s.kappa_fit = f.kappa;
            s.gamma_fit = f.gamma;
        } catch (const EstimationError& e) {
            note << "; " << e.what();
        }
        try {
            ClassifyOptions co;
            co.window = w;
            s.cls = classify(r, std::nullopt, co).cls;
        } catch (const EstimationError& e) {
            note << "; classification: " << e.what();
        }
        s.note = note.str();
        s.file = next_file();
        {
            auto os = open_output(report_.directory / s.file);
            write_sweep_csv(os, r);
        }
        push(std::move(s));
        set(key(report_.curves.size(), "config"), scenario.describe() + "; " + cfg.pathloss.name() +
                                                      " alpha=" + fmt(cfg.pathloss.alpha()) +
                                                      " theta=" + fmt(cfg.link.theta) + " R=" +
                                                      fmt(cfg.link.resolved_distance(cfg.pathloss)) +
                                                      (cfg.link.orientation == Orientation::TransmitterTypical
                                                           ? " (transmitter typical)"
                                                           : ""));
        set(key(report_.curves.size(), "seed"), std::to_string(cfg.estimator.seed));

        if (auto ex = exact_curve(r, label + " (closed form)")) {
            add_curve(*ex, "closed_form");
        }
        if (has_gamma) {
            Curve a;
            a.label = label + " (asymptote)";
            a.scheme = r.scheme;
            a.alpha = r.alpha;
            a.theta = r.theta;
            for (const auto& p : r.points) {
                a.rows.push_back({p.eta, std::max(0.0, p0 - r.analytic->gamma * std::pow(p.eta, r.analytic->kappa)),
                                  0.0, 0, "asymptote"});
            }
            auto& c = add_curve(a, "asymptote");
            c.gamma_analytic = r.analytic->gamma;
            c.kappa_analytic = r.analytic->kappa;
        }
        return r;
    }

    const FigureReport& report() const { return report_; }

    FigureReport finish() {
        write_key_values(report_.directory / "manifest.txt", manifest_);
        return report_;
    }

private:
    static std::string key(std::size_t k, const std::string& field) {
        return "curve." + std::to_string(k) + "." + field;
    }

    std::string next_file() const { return "curve-" + std::to_string(report_.curves.size() + 1) + ".csv"; }

    CurveSummary& push(CurveSummary s) {
        report_.curves.push_back(std::move(s));
        const auto k = report_.curves.size();
        const auto& c = report_.curves.back();
        set(key(k, "file"), c.file);
        set(key(k, "label"), c.label);
        set(key(k, "kind"), c.kind);
        return report_.curves.back();
    }

    FigureOptions options_;
    FigureReport report_;
    KeyValueList manifest_;
};

void annotate(Builder& b, const FigureReport& partial) {
    for (std::size_t k = 0; k < partial.curves.size(); ++k) {
        const auto& c = partial.curves[k];
        const auto base = "curve." + std::to_string(k + 1) + ".";
        if (c.gamma_analytic) b.set(base + "gamma_analytic", fmt(*c.gamma_analytic));
        if (c.kappa_analytic) b.set(base + "kappa_analytic", fmt(*c.kappa_analytic));
        if (c.kappa_fit) b.set(base + "kappa_fit", fmt(*c.kappa_fit));
        if (c.gamma_fit) b.set(base + "gamma_fit", fmt(*c.gamma_fit));
        if (c.cls) b.set(base + "class", to_string(*c.cls));
        if (!c.note.empty()) b.set(base + "note", c.note);
    }
}

SweepConfig base_config(NodeModel model, MacScheme mac, double theta, std::vector<double> grid) {
    SweepConfig c;
    c.model = std::move(model);
    c.mac = std::move(mac);
    c.link.theta = theta;
    c.pathloss = PathLoss(PathLossKind::Singular, 4.0);
    c.eta_grid = std::move(grid);
    return c;
}

FigureReport run(Builder& b, const std::function<void(Builder&)>& body) {
    body(b);
    // Fit results go after the curve list so the manifest reads top-down.
    const FigureReport snapshot = b.report();
    annotate(b, snapshot);
    return b.finish();
}

void fig3(Builder& b) {
    b.set("title", "hard-core process with ALOHA, lambda = 0.194, alpha = 4, theta = 2");
    for (double h : {0.0, 0.44, 0.7, 1.0}) {
        const double lp = matern_parent_intensity(0.194, h);
        NodeModel model = h == 0.0 ? NodeModel{PppModel{0.194, 2}} : NodeModel{MaternModel{lp, h}};
        b.simulate("h=" + fmt(h) + " lambda_p=" + fmt(lp), base_config(model, Aloha{1.0}, 2.0, kAlohaGrid));
    }
}

void fig4(Builder& b, bool swapped) {
    b.set("title", std::string("PPP lambda = 0.3 with CSMA, alpha = 4, theta = 2") +
                       (swapped ? ", transmitter and receiver swapped (R = 1)" : ""));
    auto cfg = base_config(PppModel{0.3, 2}, CsmaMatern{0.5}, 2.0, kCsmaGrid);
    if (swapped) {
        cfg.link.orientation = Orientation::TransmitterTypical;
        cfg.link.distance = 1.0;
    }
    b.simulate("CSMA", cfg);
}

void fig5(Builder& b) {
    b.set("title", "ALOHA on Thomas cluster processes of intensity 0.48, alpha = 4, theta = 2");
    b.set("configs", "(mu, c) pairs chosen here; sigma solved so that the ALOHA contention hits each target");
    for (const auto& c : cluster_aloha_configs()) {
        const ClusterSpec spec{c.parent_intensity, c.mean_daughters, c.sigma};
        b.simulate("mu=" + fmt(c.parent_intensity) + " c=" + fmt(c.mean_daughters) + " sigma=" + fmt(c.sigma) +
                       " target gamma=" + fmt(c.target_gamma),
                   base_config(ThomasModel{spec}, Aloha{1.0}, 2.0, kAlohaGrid));
    }
    b.simulate("PPP lambda=0.48", base_config(PppModel{0.48, 2}, Aloha{1.0}, 2.0, kAlohaGrid));
}

void fig6(Builder& b) {
    b.set("title", "parent thinning (cluster MAC b = 0), Thomas mu = 0.1, c = 4, sigma = 3.6, alpha = 4, theta = 2");
    const ClusterSpec spec{0.1, 4.0, 3.6};
    const std::vector<double> grid = {1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
    b.simulate("b=0", base_config(ThomasModel{spec}, ClusterMac{0.0, 1.0}, 2.0, grid));
}

void fig7(Builder& b) {
    b.set("title", "cluster MAC b = 0.5 and ALOHA (b = 1), Thomas mu = 0.1, c = 4, sigma = 3.6, alpha = 4, theta = 2");
    const ClusterSpec spec{0.1, 4.0, 3.6};
    const auto grid = log_grid(0.5, 1e-7, 15);
    b.set("fit_window.b0.5", "[1e-7, 1e-4]");
    b.set("fit_window.b1", "[1e-4, 1e-2]");
    b.simulate("b=0.5", base_config(ThomasModel{spec}, ClusterMac{0.5, 1.0}, 2.0, grid), FitWindow{1e-7, 1e-4});
    b.simulate("b=1", base_config(ThomasModel{spec}, ClusterMac{1.0, 1.0}, 2.0, grid), FitWindow{1e-4, 1e-2});
}

void fig8(Builder& b) {
    b.set("title", "m^d-phase TDMA on Z^d, bounds and exact success, alpha = 4, theta = 2");
    for (int d = 1; d <= 3; ++d) {
        Curve lower, upper, exact;
        for (Curve* c : {&lower, &upper, &exact}) {
            c->scheme = "tdma";
            c->alpha = 4.0;
            c->theta = 2.0;
        }
        lower.label = "d=" + std::to_string(d) + " lower bound";
        upper.label = "d=" + std::to_string(d) + " upper bound";
        exact.label = "d=" + std::to_string(d) + " exact";
        for (int m = 2; m <= 12; ++m) {
            const auto t = tdma_bounds(d, m, 2.0, 4.0);
            lower.rows.push_back({t.eta, t.lower, 0.0, 0, "lower_bound"});
            upper.rows.push_back({t.eta, t.upper, 0.0, 0, "upper_bound"});
            exact.rows.push_back({t.eta, t.exact, 0.0, 0, "closed_form"});
        }
        const double z = SpecialFunctionTable::global().epstein(d, 4.0);
        b.add_curve(lower, "lower_bound").gamma_analytic = 2.0 * z;
        b.add_curve(upper, "upper_bound").gamma_analytic = 2.0 * z;
        auto& e = b.add_curve(exact, "closed_form");
        e.gamma_analytic = 2.0 * z;
        e.kappa_analytic = 4.0 / d;
    }
}

void fig_swap5(Builder& b) {
    b.set("title", "hard-core process h = 1.5, lambda_p = 1, ALOHA, transmitter and receiver swapped, alpha = 4, theta = 2");
    auto cfg = base_config(MaternModel{1.0, 1.5}, Aloha{1.0}, 2.0, kAlohaGrid);
    cfg.link.orientation = Orientation::TransmitterTypical;
    cfg.link.distance = 1.0;
    b.simulate("h=1.5 swapped", cfg);
}

void fig_link(Builder& b, const FigureOptions& options) {
    const double lambda = 1.0, eta = 0.052, theta = 2.0, alpha = 4.0;
    const double h = solve_hardcore_radius(lambda, eta);
    b.set("title", "CSMA on a PPP lambda = 1 at eta = 0.052 against link distance R, alpha = 4, theta = 2");
    b.set("hardcore_radius", fmt(h));
    b.set("note", "eta = 0.052 with lambda_p = 1 gives h = " + fmt(h) + " under the Matern II retention rule");
    const PathLoss pl(PathLossKind::Singular, alpha);
    const double g1 = gamma_csma_matern(lambda, theta, alpha);
    const double gp = gamma_ppp(2, lambda, theta, pl);

    std::vector<std::vector<double>> rows;
    const Scenario sc(PppModel{lambda, 2}, CsmaMatern{eta});
    std::size_t k = 0;
    for (double r = 0.5; r <= 3.0 + 1e-9; r += 0.25, ++k) {
        b.progress("figlinkR: R=" + fmt(r));
        LinkSpec link;
        link.theta = theta;
        link.distance = r;
        EstimatorOptions o;
        o.replications = options.replications;
        o.threads = options.threads;
        o.seed = derive_seed(b.curve_seed(), k);
        const auto e = estimate_success(sc, link, pl, o);
        const double g = g1 * std::pow(r, alpha);
        rows.push_back({r, e.p_success, e.std_err, static_cast<double>(e.n_reps), g,
                        std::max(0.0, 1.0 - g * eta * eta)});
    }
    b.add_table("success against R at eta = 0.052", {"R", "p_success", "std_err", "n_reps", "gamma", "asymptote"},
                rows);

    std::vector<std::vector<double>> grows;
    for (double r = 0.5; r <= 3.0 + 1e-9; r += 0.25) {
        grows.push_back({r, g1 * std::pow(r, alpha), gp * r * r, std::pow(r, alpha), r * r});
    }
    b.add_table("gamma against R (CSMA scales as R^4, PPP ALOHA as R^2)",
                {"R", "gamma_csma", "gamma_ppp_aloha", "ratio_csma", "ratio_ppp_aloha"}, grows);

    EstimatorOptions o;
    o.replications = std::max<std::size_t>(1000, options.replications / 5);
    o.threads = options.threads;
    o.seed = b.curve_seed();
    b.progress("figlinkR: gamma(R) from small-eta sweeps");
    const auto fits = csma_gamma_vs_distance(lambda, theta, alpha, {1.0, 1.5, 2.0, 2.5, 3.0}, {0.005, 0.0025}, o);
    std::vector<std::vector<double>> frows;
    for (const auto& f : fits) {
        frows.push_back({f.distance, f.gamma_fit, f.gamma_se, f.gamma_analytic, f.gamma_fit / fits.front().gamma_fit,
                         std::pow(f.distance / fits.front().distance, alpha)});
    }
    b.add_table("gamma(R) fitted with kappa = 2", {"R", "gamma_fit", "gamma_se", "gamma_analytic", "ratio_fit",
                                                    "ratio_r4"},
                frows);
}

void fig_2demo(Builder& b) {
    b.set("title", "TDMA and unreasonable TDMA on Z^2, m = 2..10, alpha = 4, theta = 2");
    std::vector<double> grid;
    for (int m = 2; m <= 10; ++m) grid.push_back(1.0 / (m * m));
    b.simulate("reasonable TDMA", base_config(LatticeModel{2, 1.0}, TdmaLattice{2, 2}, 2.0, grid));
    b.simulate("unreasonable TDMA", base_config(LatticeModel{2, 1.0}, UnreasonableTdma{2}, 2.0, grid));
}

}  // namespace

std::vector<std::string> figure_ids() { return {"3", "4", "5", "6", "7", "8", "swap5", "swap6", "linkR", "2-demo"}; }

FigureReport reproduce_figure(const std::string& id, const fs::path& outdir, const FigureOptions& options) {
    const auto ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string list;
        for (const auto& i : ids) list += (list.empty() ? "" : ", ") + i;
        throw UsageError("unknown figure id '" + id + "' (known: " + list + ")");
    }
    if (options.replications < 2) {
        throw ParameterError("figures need at least two replications per point");
    }
    Builder b(id, outdir, options);
    std::function<void(Builder&)> body;
    if (id == "3") body = fig3;
    else if (id == "4") body = [](Builder& x) { fig4(x, false); };
    else if (id == "5") body = fig5;
    else if (id == "6") body = fig6;
    else if (id == "7") body = fig7;
    else if (id == "8") body = fig8;
    else if (id == "swap5") body = fig_swap5;
    else if (id == "swap6") body = [](Builder& x) { fig4(x, true); };
    else if (id == "linkR") body = [&](Builder& x) { fig_link(x, options); };
    else body = fig_2demo;
    return run(b, body);
}

double solve_thomas_sigma(double parent_intensity, double mean_daughters, double target_gamma, double theta,
                          const PathLoss& pathloss) {
    const double lambda = parent_intensity * mean_daughters;
    auto gamma_at = [&](double sigma) {
        const auto rho = ProductDensity::thomas(ClusterSpec{parent_intensity, mean_daughters, sigma});
        return gamma_aloha(rho, lambda, theta, pathloss);
    };
    double lo = std::log(1e-2), hi = std::log(1e3);
    if (!(gamma_at(std::exp(lo)) > target_gamma && gamma_at(std::exp(hi)) < target_gamma)) {
        throw ParameterError("target contention " + fmt(target_gamma) + " is out of reach for mu = " +
                             fmt(parent_intensity) + ", c = " + fmt(mean_daughters));
    }
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gamma_at(std::exp(mid)) > target_gamma ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

std::vector<ClusterConfig> cluster_aloha_configs() {
    const PathLoss pl(PathLossKind::Singular, 4.0);
    const double pairs[4][3] = {{0.12, 4.0, 3.61}, {0.08, 6.0, 4.74}, {0.048, 10.0, 6.54}, {0.03, 16.0, 9.73}};
    std::vector<ClusterConfig> out;
    for (const auto& p : pairs) {
        const double sigma = solve_thomas_sigma(p[0], p[1], p[2], 2.0, pl);
        const auto rho = ProductDensity::thomas(ClusterSpec{p[0], p[1], sigma});
        out.push_back({p[0], p[1], sigma, p[2], gamma_aloha(rho, p[0] * p[1], 2.0, pl)});
    }
    return out;
}

std::vector<DistanceGamma> csma_gamma_vs_distance(double lambda, double theta, double alpha,
                                                  const std::vector<double>& distances,
                                                  const std::vector<double>& outage_levels,
                                                  const EstimatorOptions& estimator) {
    if (distances.empty() || outage_levels.empty()) {
        throw ParameterError("need at least one distance and one outage level");
    }
    auto levels = outage_levels;
    std::sort(levels.rbegin(), levels.rend());
    const PathLoss pl(PathLossKind::Singular, alpha);
    std::vector<DistanceGamma> out;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        SweepConfig cfg;
        cfg.model = PppModel{lambda, 2};
        cfg.mac = CsmaMatern{0.5};
        cfg.link.theta = theta;
        cfg.link.distance = distances[i];
        cfg.pathloss = pl;
        const double g = gamma_kappa_for(cfg.model, cfg.mac, cfg.link, pl).gamma;
        for (double level : levels) {
            cfg.eta_grid.push_back(std::sqrt(level / g));
        }
        cfg.estimator = estimator;
        cfg.estimator.seed = derive_seed(estimator.seed, i);
        const auto r = sweep(cfg);
        const auto f = fit_gamma_fixed_kappa(r, 0.5 * alpha);
        out.push_back({distances[i], f.gamma, f.std_err, g});
    }
    return out;
}

}  // namespace outagekit
