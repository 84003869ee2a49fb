#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "outagekit/mac.hpp"
#include "outagekit/outage.hpp"
#include "outagekit/scenario.hpp"

namespace outagekit {

enum class EstimatorKind {
    Auto,         // marginal when available, else conditional
    Conditional,  // fading averaged analytically, MAC realized
    Raw,          // fading sampled, indicator of S >= theta (I + W/P) / l(R)
    Marginal,     // fading and independent MAC coins averaged analytically
};

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view text);

struct EstimatorOptions {
    std::size_t replications = 100000;
    std::uint64_t seed = 1;
    EstimatorKind kind = EstimatorKind::Auto;
    unsigned threads = 1;       // 0 uses every hardware thread
    bool far_field = true;      // correct for interferers beyond the simulated torus
    double window_side = 0.0;   // 0 picks the model's default
    QuadOptions quad;
};

struct OutageEstimate {
    double eta = 0.0;
    double p_success = 1.0;
    double std_err = 0.0;
    std::size_t n_reps = 0;
    EstimatorKind estimator = EstimatorKind::Conditional;
    std::size_t rejected = 0;       // replications redrawn after a coincident point
    double window_side = 0.0;
    double far_field_factor = 1.0;

    double outage() const { return 1.0 - p_success; }
};

/// Palm Monte Carlo estimate of the success probability for a scenario.
/// Results are identical for any thread count.
OutageEstimate estimate_success(const Scenario& scenario, const LinkSpec& link, const PathLoss& pathloss,
                                const EstimatorOptions& options = {});

/// Per-replication values behind estimate_success (for variance studies).
std::vector<double> replicate_values(const Scenario& scenario, const LinkSpec& link, const PathLoss& pathloss,
                                     const EstimatorOptions& options);

/// Draws a full transmitter pattern on a torus from a seed.
using TransmitterGenerator = std::function<TransmitterSet(std::uint64_t seed)>;

/// Estimate from whole-window realizations: each replication picks a
/// transmitter uniformly as the typical node and is weighted by the
/// transmitter count, which yields the Palm expectation on the torus.
OutageEstimate estimate_success(const TransmitterGenerator& generator, const LinkSpec& link,
                                const PathLoss& pathloss, const EstimatorOptions& options = {});

/// Integral of Delta over R^d outside the cube of the given side centred at the origin.
double far_field_integral(int d, const DeltaKernel& kernel, double side, const QuadOptions& opts = {});

}  // namespace outagekit
