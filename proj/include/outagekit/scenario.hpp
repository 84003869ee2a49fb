#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "outagekit/mac.hpp"
#include "outagekit/pointprocess.hpp"
#include "outagekit/rng.hpp"

namespace outagekit {

struct PppModel {
    double intensity = 1.0;
    int dimension = 2;
};
struct MaternModel {
    double parent_intensity = 1.0;
    double hardcore_radius = 0.0;
};
struct ThomasModel {
    ClusterSpec cluster;
};
struct LatticeModel {
    int dimension = 2;
    double spacing = 1.0;
};

using NodeModel = std::variant<PppModel, MaternModel, ThomasModel, LatticeModel>;

std::string model_name(const NodeModel& model);
int model_dimension(const NodeModel& model);
double model_intensity(const NodeModel& model);
void validate(const NodeModel& model);

/// Analytic product density of the node process, when the model has one.
std::optional<ProductDensity> model_product_density(const NodeModel& model);

/// A full realization of the node process in the given window.
PointPattern generate(const NodeModel& model, const Window& window, std::uint64_t seed);

/// Interferer configuration seen from a typical node at the origin.
///
/// Points are displacements from the typical node. When `group_start` is
/// empty every point is an independent candidate kept with `point_keep`.
/// Otherwise points [0, group_start[0]) are the typical node's own cluster
/// (always scheduled) and each further range [group_start[k], group_start[k+1])
/// is a cluster scheduled as a whole with probability `group_keep`.
struct PalmSample {
    std::vector<Point> points;
    std::vector<std::uint32_t> group_start;
    double point_keep = 1.0;
    double group_keep = 1.0;

    void clear() {
        points.clear();
        group_start.clear();
        point_keep = 1.0;
        group_keep = 1.0;
    }
};

/// A node model together with a MAC scheme at a fixed eta.
class Scenario {
public:
    Scenario(NodeModel model, MacScheme mac);

    const NodeModel& model() const { return model_; }
    const MacScheme& mac() const { return mac_; }
    int dimension() const { return model_dimension(model_); }
    double eta() const { return scheme_eta(mac_); }

    /// Intensity of the transmitter process, eta times the node intensity.
    double transmitter_intensity() const;

    /// True when the MAC coins can be averaged analytically per replication.
    bool supports_marginal() const;
    /// True when the Palm configuration has no randomness (lattice schedules).
    bool deterministic(bool marginal) const;

    /// Solved hard-core radius for CSMA, else 0.
    double hardcore_radius() const { return hardcore_radius_; }

    /// Default torus side for a link of the given distance.
    double window_side(double link_distance) const;
    /// Rounds a requested side to one the sampler can use (lattice periods).
    double compatible_side(double side) const;

    /// Fills `out` with one Palm configuration on the torus of side `side`.
    /// With `marginal`, the MAC's independent coins are not drawn but recorded as
    /// keep probabilities; otherwise `out` holds the realized transmitters.
    void sample(Philox4x32& rng, double side, bool marginal, PalmSample& out) const;

    /// Number of equally likely deterministic configurations (lattice schedules).
    std::size_t deterministic_cases() const;
    void sample_case(std::size_t k, double side, PalmSample& out) const;

    std::string describe() const;

private:
    NodeModel model_;
    MacScheme mac_;
    double hardcore_radius_ = 0.0;
};

}  // namespace outagekit
