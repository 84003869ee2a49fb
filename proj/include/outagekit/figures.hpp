#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "outagekit/fit.hpp"
#include "outagekit/harness.hpp"

namespace outagekit {

struct FigureOptions {
    std::uint64_t seed = 1;
    std::size_t replications = 100000;
    unsigned threads = 1;
    std::function<void(const std::string&)> progress;  // optional status sink
};

struct CurveSummary {
    std::string file;
    std::string label;
    std::string kind;  // simulation, closed_form, asymptote, lower_bound, upper_bound, table
    std::optional<double> kappa_fit;
    std::optional<double> gamma_fit;
    std::optional<double> gamma_analytic;
    std::optional<double> kappa_analytic;
    std::optional<TaxonomyClass> cls;
    std::string note;
};

struct FigureReport {
    std::string id;
    std::filesystem::path directory;
    std::vector<CurveSummary> curves;
};

/// 3, 4, 5, 6, 7, 8, swap5, swap6, linkR, 2-demo.
std::vector<std::string> figure_ids();

/// Writes `<outdir>/fig<id>/curve-<k>.csv` plus `manifest.txt` and returns a
/// per-curve summary. Unknown ids raise UsageError.
FigureReport reproduce_figure(const std::string& id, const std::filesystem::path& outdir,
                              const FigureOptions& options = {});

/// A Thomas configuration for the cluster ALOHA figure.
struct ClusterConfig {
    double parent_intensity;
    double mean_daughters;
    double sigma;
    double target_gamma;
    double gamma;  // ALOHA contention at the solved sigma
};

/// Scatter sigma giving the requested ALOHA contention for fixed mu and c
/// (bisection; contention falls as sigma grows).
double solve_thomas_sigma(double parent_intensity, double mean_daughters, double target_gamma, double theta,
                          const PathLoss& pathloss);

/// Four clusters of intensity 0.48 (c = 4, 6, 10, 16) with ALOHA contention
/// 3.61, 4.74, 6.54, 9.73 at theta = 2, alpha = 4.
std::vector<ClusterConfig> cluster_aloha_configs();

/// CSMA contention against link distance, estimated from simulation with kappa
/// fixed at alpha/2 and eta chosen per R so that gamma(R) eta^2 sits at the given
/// outage levels.
struct DistanceGamma {
    double distance;
    double gamma_fit;
    double gamma_se;
    double gamma_analytic;
};
std::vector<DistanceGamma> csma_gamma_vs_distance(double lambda, double theta, double alpha,
                                                  const std::vector<double>& distances,
                                                  const std::vector<double>& outage_levels,
                                                  const EstimatorOptions& estimator);

}  // namespace outagekit
