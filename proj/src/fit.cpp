#include "outagekit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "outagekit/error.hpp"

namespace outagekit {

namespace {

struct Line {
    double intercept = 0.0;
    double slope = 0.0;
    double var_intercept = 0.0;
    double var_slope = 0.0;
    double cov = 0.0;
    double chi2_dof = 0.0;
};

// Weighted straight-line fit; the covariance is inflated by chi2/dof when the
// scatter exceeds the stated errors.
Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& var) {
    double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = 1.0 / var[i];
        s += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    const double det = s * sxx - sx * sx;
    if (!(det > 0.0)) {
        throw EstimationError("degenerate regression: all points share one abscissa");
    }
    Line l;
    l.slope = (s * sxy - sx * sy) / det;
    l.intercept = (sxx * sy - sx * sxy) / det;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - l.intercept - l.slope * x[i];
        chi2 += r * r / var[i];
    }
    const double dof = static_cast<double>(x.size()) - 2.0;
    l.chi2_dof = dof > 0 ? chi2 / dof : 0.0;
    const double scale = std::max(1.0, l.chi2_dof);
    l.var_slope = scale * s / det;
    l.var_intercept = scale * sxx / det;
    l.cov = -scale * sx / det;
    return l;
}

bool in_window(double eta, const FitWindow& w) {
    return eta >= w.eta_min * (1 - 1e-12) && eta <= w.eta_max * (1 + 1e-12);
}

}  // namespace

FitWindow default_fit_window(double gamma, double kappa) {
    return {0.0, std::min(eta_max(gamma, kappa), 0.1)};
}

FitResult fit_kappa_gamma(const SweepResult& sweep, const FitWindow& window, double p0) {
    std::vector<double> x, y, var;
    FitResult out;
    out.p0 = p0;
    std::size_t in = 0;
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        const auto& pt = sweep.points[i];
        if (!in_window(pt.eta, window)) {
            continue;
        }
        ++in;
        const double gap = p0 - pt.p_success;
        if (!(gap > 3.0 * pt.std_err) || !(gap > 0.0)) {
            continue;
        }
        const double rel = pt.std_err / gap;
        x.push_back(std::log(pt.eta));
        y.push_back(std::log(gap));
        // Exact points still get a tiny spread so the weights stay finite.
        var.push_back(std::max(rel * rel, 1e-16));
        out.used.push_back(i);
    }
    if (x.size() < 4) {
        std::ostringstream os;
        os << "fit infeasible: " << x.size() << " of " << in
           << " points in the window resolve the outage above 3 SE; increase replications or widen the window";
        throw EstimationError(os.str());
    }
    const Line l = weighted_line(x, y, var);
    out.kappa = l.slope;
    out.gamma = std::exp(l.intercept);
    out.kappa_se = std::sqrt(l.var_slope);
    out.log_gamma_se = std::sqrt(l.var_intercept);
    out.chi2_dof = l.chi2_dof;
    const boost::math::students_t t(static_cast<double>(x.size() - 2));
    const double q = boost::math::quantile(boost::math::complement(t, 0.025));
    out.kappa_lo = out.kappa - q * out.kappa_se;
    out.kappa_hi = out.kappa + q * out.kappa_se;
    out.gamma_lo = std::exp(l.intercept - q * out.log_gamma_se);
    out.gamma_hi = std::exp(l.intercept + q * out.log_gamma_se);
    return out;
}

GammaFit fit_gamma_fixed_kappa(const SweepResult& sweep, double kappa, const FitWindow& window, double p0) {
    double sw = 0.0, swv = 0.0;
    GammaFit out;
    for (const auto& pt : sweep.points) {
        if (!in_window(pt.eta, window)) {
            continue;
        }
        const double scale = std::pow(pt.eta, -kappa);
        const double v = (p0 - pt.p_success) * scale;
        const double se = std::max(pt.std_err * scale, 1e-12 * std::abs(v));
        const double w = 1.0 / (se * se);
        sw += w;
        swv += w * v;
        ++out.points;
    }
    if (out.points == 0) {
        throw EstimationError("no sweep points inside the fit window");
    }
    out.gamma = swv / sw;
    out.std_err = std::sqrt(1.0 / sw);
    return out;
}

std::string to_string(TaxonomyClass c) {
    switch (c) {
        case TaxonomyClass::R1: return "R1";
        case TaxonomyClass::R2: return "R2";
        case TaxonomyClass::R3: return "R3";
        case TaxonomyClass::U1: return "U1";
        case TaxonomyClass::U2: return "U2";
        case TaxonomyClass::U3: return "U3";
        case TaxonomyClass::Unclassified: return "unclassified";
    }
    return "unclassified";
}

TaxonomyLabel classify(const SweepResult& sweep, const std::optional<ConditionReport>& conditions,
                       const ClassifyOptions& options) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        if (in_window(sweep.points[i].eta, options.window)) {
            idx.push_back(i);
        }
    }
    if (idx.size() < 4) {
        throw EstimationError("classification needs at least four sweep points in the window");
    }
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return sweep.points[a].eta < sweep.points[b].eta; });

    TaxonomyLabel label;
    std::ostringstream diag;
    diag.precision(4);

    // Straight line of P against eta through the low-eta half: its slope
    // detects U3 and its intercept estimates P0.
    const std::size_t low = std::max<std::size_t>(3, idx.size() / 2);
    std::vector<double> x, y, var;
    for (std::size_t k = 0; k < low; ++k) {
        const auto& pt = sweep.points[idx[k]];
        x.push_back(pt.eta);
        y.push_back(pt.p_success);
        var.push_back(std::max(pt.std_err * pt.std_err, 1e-24));
    }
    const Line lin = weighted_line(x, y, var);
    label.low_eta_slope = lin.slope;
    label.low_eta_slope_se = std::sqrt(lin.var_slope);
    label.p0 = std::min(1.0, lin.intercept);
    label.p0_se = std::sqrt(lin.var_intercept);
    diag << "low-eta slope " << lin.slope << " +- " << label.low_eta_slope_se << "; P0 " << lin.intercept << " +- "
         << label.p0_se;

    if (lin.slope > 3.0 * label.low_eta_slope_se && lin.slope > 0.0) {
        label.cls = TaxonomyClass::U3;
        label.gamma = -lin.slope;
        label.kappa = 1.0;
        diag << "; success rises with eta near 0";
        label.diagnostics = diag.str();
        return label;
    }

    // Log-log slope of the raw outage over the same points: near 0 when the
    // outage does not vanish.
    std::vector<double> lx, ly, lv;
    for (std::size_t k = 0; k < low; ++k) {
        const auto& pt = sweep.points[idx[k]];
        const double out = 1.0 - pt.p_success;
        if (out > 0.0) {
            const double rel = std::max(pt.std_err / out, 1e-8);
            lx.push_back(std::log(pt.eta));
            ly.push_back(std::log(out));
            lv.push_back(rel * rel);
        }
    }
    const bool p0_below_one = (1.0 - lin.intercept) > 5.0 * label.p0_se;
    if (lx.size() >= 3) {
        const Line ll = weighted_line(lx, ly, lv);
        diag << "; log-log outage slope " << ll.slope;
        if (ll.slope < 0.2 && p0_below_one) {
            label.cls = TaxonomyClass::U2;
            diag << "; outage does not vanish as eta -> 0";
            try {
                const auto f = fit_kappa_gamma(sweep, options.window, lin.intercept);
                label.kappa = f.kappa;
                label.gamma = f.gamma;
            } catch (const EstimationError& e) {
                diag << "; P0 - P not resolved (" << e.what() << ")";
            }
            label.diagnostics = diag.str();
            return label;
        }
    }

    FitResult f;
    try {
        f = fit_kappa_gamma(sweep, options.window, 1.0);
    } catch (const EstimationError& e) {
        diag << "; " << e.what();
        label.diagnostics = diag.str();
        return label;
    }
    label.p0 = 1.0;
    label.kappa = f.kappa;
    label.gamma = f.gamma;
    diag << "; kappa " << f.kappa << " +- " << f.kappa_se << ", gamma " << f.gamma;

    const double top = sweep.alpha / sweep.dimension;
    const double k = f.kappa;
    if (std::abs(k - 1.0) <= options.kappa_tolerance) {
        label.cls = TaxonomyClass::R1;
    } else if (std::abs(k - top) <= options.r3_relative_tolerance * top) {
        label.cls = TaxonomyClass::R3;
    } else if (k > 1.0 && k < top) {
        label.cls = TaxonomyClass::R2;
    } else if (k < 1.0 - options.kappa_tolerance) {
        label.cls = TaxonomyClass::U1;
    } else {
        diag << "; kappa above alpha/d";
    }
    const bool r_class = label.cls == TaxonomyClass::R1 || label.cls == TaxonomyClass::R2 ||
                         label.cls == TaxonomyClass::R3;
    if (r_class && conditions && !conditions->reasonable) {
        diag << "; fit suggests " << to_string(label.cls) << " but the conditions report is not reasonable ("
             << conditions->notes << ")";
        label.cls = TaxonomyClass::Unclassified;
    }
    label.diagnostics = diag.str();
    return label;
}

}  // namespace outagekit
