#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "outagekit/geometry.hpp"

namespace outagekit {

enum class ModelTag { Ppp, MaternII, Thomas, Lattice, DerivedByMac };

std::string to_string(ModelTag tag);

struct ClusterSpec {
    double parent_intensity = 0.1;  // mu
    double mean_daughters = 4.0;    // c
    double sigma = 1.0;             // per-axis scatter

    double intensity() const { return parent_intensity * mean_daughters; }
    void validate() const;
};

/// A finite set of points in a window plus the metadata needed downstream.
struct PointPattern {
    Window window;
    std::vector<Point> points;
    double intensity = 0.0;  // nominal points per unit volume
    ModelTag model = ModelTag::Ppp;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> params;

    /// Cluster id per point (Thomas only).
    std::vector<std::int64_t> parent;

    /// Integer lattice coordinates per point and lattice extent (Lattice only).
    std::vector<std::array<std::int32_t, 3>> lattice_index;
    std::array<std::int32_t, 3> lattice_extent{0, 0, 0};
    double lattice_spacing = 0.0;

    std::size_t size() const { return points.size(); }
    bool has_parentage() const { return !parent.empty() && parent.size() == points.size(); }
    bool has_lattice_index() const { return !lattice_index.empty() && lattice_index.size() == points.size(); }
    double param(const std::string& key, double fallback = 0.0) const;
};

PointPattern gen_ppp(double intensity, const Window& window, std::uint64_t seed);
PointPattern gen_matern2(double parent_intensity, double hardcore_radius, const Window& window,
                         std::uint64_t seed);
PointPattern gen_thomas(const ClusterSpec& spec, const Window& window, std::uint64_t seed);
PointPattern gen_lattice(int d, double spacing, const Window& window, std::uint64_t seed,
                         bool rotate = false);

/// Retained intensity of Matern II thinning: (1 - exp(-lambda_p pi h^2)) / (pi h^2).
double matern_intensity(double parent_intensity, double hardcore_radius);

/// Parent intensity giving retained intensity `target` at radius h; requires target < 1/(pi h^2).
double matern_parent_intensity(double target, double hardcore_radius);

/// Hard-core radius h such that Matern II thinning of a PPP of intensity lambda
/// keeps intensity eta * lambda. Bisection to 1e-10 relative; requires 0 < eta < 1.
double solve_hardcore_radius(double lambda, double eta);

/// Matern II retention: point i survives iff no point within distance h has a
/// smaller (mark, index). Distances follow the window's edge mode.
std::vector<char> matern_retain(std::span<const Point> points, std::span<const double> marks, double h,
                                const Window& window);

/// Second-order product density of a planar model.
class ProductDensity {
public:
    struct Poisson {
        double intensity;
    };
    struct Matern {
        double parent_intensity;
        double hardcore_radius;
    };
    struct Cluster {
        ClusterSpec spec;
    };
    using Params = std::variant<Poisson, Matern, Cluster>;

    static ProductDensity poisson(double intensity);
    static ProductDensity matern(double parent_intensity, double hardcore_radius);
    static ProductDensity thomas(const ClusterSpec& spec);

    double operator()(double r) const;
    double intensity() const;
    ModelTag model() const;
    const Params& params() const { return params_; }

    /// Radii where rho2 is not smooth (quadrature break points).
    std::vector<double> breakpoints() const;

    /// Average of rho2 over the annulus [r0, r1) in the plane.
    double annulus_average(double r0, double r1) const;

private:
    explicit ProductDensity(Params p) : params_(std::move(p)) {}
    Params params_;
};

double rho2(const ProductDensity& model, double r);

struct SecondOrderEstimate {
    std::vector<double> radii;     // evaluation radius (K) or bin centre (rho2)
    std::vector<double> lower;     // bin lower edge (rho2 only)
    std::vector<double> upper;     // bin upper edge (rho2 only)
    std::vector<double> value;
    std::vector<double> std_err;   // across-pattern standard error
    std::size_t patterns = 0;
};

/// Ripley's K averaged over patterns; toroidal or minus-sampling edge correction.
SecondOrderEstimate estimate_k_function(std::span<const PointPattern> patterns, std::span<const double> radii);

/// Product density averaged over annular bins given by consecutive edges.
SecondOrderEstimate estimate_rho2(std::span<const PointPattern> patterns, std::span<const double> edges);

/// Visits each unordered pair (i < j) closer than rmax with the displacement from i to j.
void for_each_close_pair(const PointPattern& pattern, double rmax,
                         const std::function<void(std::size_t, std::size_t, const Point&)>& visit);

}  // namespace outagekit
