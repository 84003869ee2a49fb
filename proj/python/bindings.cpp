#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "outagekit/asymptotics.hpp"
#include "outagekit/config.hpp"
#include "outagekit/error.hpp"
#include "outagekit/figures.hpp"
#include "outagekit/fit.hpp"
#include "outagekit/harness.hpp"
#include "outagekit/special.hpp"

namespace py = pybind11;
namespace ok = outagekit;

namespace {

py::dict to_dict(const ok::SweepResult& r) {
    py::list points;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        py::dict d;
        d["eta"] = p.eta;
        d["p_success"] = p.p_success;
        d["std_err"] = p.std_err;
        d["n_reps"] = p.n_reps;
        d["estimator"] = ok::to_string(p.estimator);
        d["exact"] = r.exact[i];
        points.append(d);
    }
    py::dict out;
    out["scheme"] = r.scheme;
    out["model"] = r.model;
    out["alpha"] = r.alpha;
    out["theta"] = r.theta;
    out["seed"] = r.seed;
    out["points"] = points;
    if (r.analytic) {
        out["gamma"] = r.analytic->gamma;
        out["kappa"] = r.analytic->kappa;
    }
    return out;
}

ok::RunConfig config_from(const std::string& text) {
    auto cfg = ok::parse_config(text, [](const std::string&) { return std::optional<std::string>(); });
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Outage simulation and asymptotic analysis for spatial MAC schemes";

    auto base = py::register_exception<ok::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ok::ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<ok::EstimationError>(m, "EstimationError", base.ptr());
    py::register_exception<ok::NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ok::NotImplementedError>(m, "NotImplementedError", base.ptr());
    py::register_exception<ok::UsageError>(m, "UsageError", base.ptr());
    py::register_exception<ok::ConfigParseError>(m, "ConfigParseError", base.ptr());

    m.def("success_ppp_aloha", &ok::success_ppp_aloha_closed, py::arg("intensity"), py::arg("eta"),
          py::arg("theta"), py::arg("alpha"));
    m.def("epstein_zeta", &ok::epstein_zeta, py::arg("d"), py::arg("alpha"));
    m.def("gamma_csma", &ok::gamma_csma_matern, py::arg("intensity"), py::arg("theta"), py::arg("alpha"));
    m.def("eta_max", &ok::eta_max, py::arg("gamma"), py::arg("kappa"));
    m.def(
        "tdma_bounds",
        [](int d, int mm, double theta, double alpha) {
            const auto b = ok::tdma_bounds(d, mm, theta, alpha);
            return py::dict(py::arg("eta") = b.eta, py::arg("lower") = b.lower, py::arg("exact") = b.exact,
                            py::arg("upper") = b.upper);
        },
        py::arg("d"), py::arg("m"), py::arg("theta"), py::arg("alpha"));

    m.def(
        "asymptotic",
        [](const std::string& text) {
            const auto cfg = config_from(text);
            const auto a = ok::gamma_kappa_for(cfg.model, cfg.mac, cfg.link, cfg.pathloss);
            py::dict d;
            d["scheme"] = a.scheme;
            d["gamma"] = a.gamma;
            d["kappa"] = a.kappa;
            d["provenance"] = ok::to_string(a.provenance);
            d["validity"] = a.validity;
            d["p0"] = a.p0 ? py::cast(*a.p0) : py::none();
            return d;
        },
        py::arg("config"), "Spatial contention and exponent for an INI configuration string.");

    m.def(
        "simulate",
        [](const std::string& text) {
            const auto cfg = config_from(text);
            const auto sc = cfg.sweep_config();
            ok::SweepResult r;
            {
                py::gil_scoped_release release;
                r = ok::sweep(sc);
            }
            return to_dict(r);
        },
        py::arg("config"), "Runs the eta sweep described by an INI configuration string.");

    m.def(
        "classify",
        [](const std::string& text) {
            const auto cfg = config_from(text);
            const auto sc = cfg.sweep_config();
            ok::TaxonomyLabel l;
            {
                py::gil_scoped_release release;
                const auto r = ok::sweep(sc);
                ok::ClassifyOptions o;
                if (cfg.sweep.fit_window) o.window = *cfg.sweep.fit_window;
                l = ok::classify(r, std::nullopt, o);
            }
            return py::dict(py::arg("class") = ok::to_string(l.cls), py::arg("p0") = l.p0,
                            py::arg("kappa") = l.kappa, py::arg("gamma") = l.gamma,
                            py::arg("diagnostics") = l.diagnostics);
        },
        py::arg("config"));

    m.def("figure_ids", &ok::figure_ids);
    m.def(
        "reproduce_figure",
        [](const std::string& id, const std::filesystem::path& outdir, std::uint64_t seed, std::size_t reps,
           unsigned threads) {
            ok::FigureOptions o;
            o.seed = seed;
            o.replications = reps;
            o.threads = threads;
            ok::FigureReport rep;
            {
                py::gil_scoped_release release;
                rep = ok::reproduce_figure(id, outdir, o);
            }
            py::list files;
            for (const auto& c : rep.curves) files.append((rep.directory / c.file).string());
            return files;
        },
        py::arg("id"), py::arg("outdir"), py::arg("seed") = 1, py::arg("replications") = 100000,
        py::arg("threads") = 1);
}
