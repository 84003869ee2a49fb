#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "outagekit/asymptotics.hpp"
#include "outagekit/estimator.hpp"

namespace outagekit {

struct SweepConfig {
    NodeModel model = PppModel{};
    MacScheme mac = Aloha{};
    LinkSpec link;
    PathLoss pathloss;
    std::vector<double> eta_grid;  // strictly decreasing, inside (0, 1]
    EstimatorOptions estimator;
};

struct SweepResult {
    std::string scheme;
    std::string model;
    int dimension = 2;
    double alpha = 4.0;
    double theta = 1.0;
    std::uint64_t seed = 0;
    std::vector<OutageEstimate> points;
    std::vector<double> exact;  // closed-form success per point, NaN where none exists
    std::optional<AsymptoticResult> analytic;
};

/// Runs estimate_success on every grid point with seed derive_seed(seed, index).
/// Lattice schedules snap eta to m^-d; the snapped grid must stay strictly decreasing.
SweepResult sweep(const SweepConfig& config);

/// Closed-form success probability where one exists (PPP with ALOHA, Thomas
/// with ALOHA or cluster MAC, lattice TDMA under singular loss).
std::optional<double> exact_success(const NodeModel& model, const MacScheme& mac, const LinkSpec& link,
                                    const PathLoss& pathloss);

/// Whole-window transmitter sets for a model and MAC family on a planar torus.
TransmitterFamily transmitter_family(const NodeModel& model, const MacScheme& mac, double side);

/// Checks the reasonableness conditions on the sweep's model, MAC and grid.
/// The torus is wide enough for the largest K radius (radius_factor / sqrt(eta_min)).
ConditionReport sweep_conditions(const SweepConfig& config, const ConditionOptions& options = {});

/// n points from hi down to lo, evenly spaced in log eta.
std::vector<double> log_grid(double hi, double lo, std::size_t n);

}  // namespace outagekit
