#pragma once

#include <optional>
#include <string>
#include <vector>

#include "outagekit/harness.hpp"
#include "outagekit/mac.hpp"

namespace outagekit {

/// Points with eta_min <= eta <= eta_max take part in a fit.
struct FitWindow {
    double eta_min = 0.0;
    double eta_max = 1.0;
};

/// eta <= min(eta_max(gamma, kappa), 0.1).
FitWindow default_fit_window(double gamma, double kappa);

struct FitResult {
    double kappa = 0.0;
    double gamma = 0.0;
    double kappa_se = 0.0;
    double log_gamma_se = 0.0;
    double kappa_lo = 0.0;  // 95% interval
    double kappa_hi = 0.0;
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    double p0 = 1.0;
    double chi2_dof = 0.0;
    std::vector<std::size_t> used;  // indices into the sweep
};

/// Weighted least squares of log(p0 - P) on log eta over the window.
/// Points whose gap p0 - P is not above 3 SE are left out; fewer than four
/// usable points raise EstimationError.
FitResult fit_kappa_gamma(const SweepResult& sweep, const FitWindow& window = {}, double p0 = 1.0);

/// Weighted mean of (p0 - P) / eta^kappa over the window, for a known kappa.
struct GammaFit {
    double gamma = 0.0;
    double std_err = 0.0;
    std::size_t points = 0;
};
GammaFit fit_gamma_fixed_kappa(const SweepResult& sweep, double kappa, const FitWindow& window = {},
                               double p0 = 1.0);

enum class TaxonomyClass { R1, R2, R3, U1, U2, U3, Unclassified };
std::string to_string(TaxonomyClass c);

struct TaxonomyLabel {
    TaxonomyClass cls = TaxonomyClass::Unclassified;
    double p0 = 1.0;
    double p0_se = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double low_eta_slope = 0.0;  // dP/deta over the smallest-eta points
    double low_eta_slope_se = 0.0;
    std::string diagnostics;
};

struct ClassifyOptions {
    FitWindow window;
    double kappa_tolerance = 0.1;     // |kappa - 1| for R1
    double r3_relative_tolerance = 0.1;
};

/// Assigns a taxonomy class from a sweep. A condition report that marks the
/// MAC as unreasonable turns any R class into Unclassified.
TaxonomyLabel classify(const SweepResult& sweep, const std::optional<ConditionReport>& conditions = std::nullopt,
                       const ClassifyOptions& options = {});

}  // namespace outagekit
