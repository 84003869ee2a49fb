#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace outagekit {

using Point = std::array<double, 3>;

enum class EdgeMode { Toroidal, GuardBand };

/// Axis-aligned box [-side/2, side/2)^d. Unused coordinates are zero.
///
/// In toroidal mode distances use the minimum image. In guard-band mode
/// distances are Euclidean, generators simulate beyond the box so that the
/// clipped pattern is unbiased, and second-order estimators only use centres
/// at least `guard` away from the border (minus sampling).
struct Window {
    int dimension = 2;
    std::array<double, 3> side{1.0, 1.0, 1.0};
    EdgeMode edge = EdgeMode::Toroidal;
    double guard = 0.0;

    static Window cube(int dimension, double side, EdgeMode edge = EdgeMode::Toroidal, double guard = 0.0);

    void validate() const;
    double volume() const;
    bool toroidal() const { return edge == EdgeMode::Toroidal; }
    bool contains(const Point& p) const;

    /// Displacement b - a, wrapped to the minimum image when toroidal.
    Point displacement(const Point& a, const Point& b) const;
    double distance2(const Point& a, const Point& b) const;

    /// Maps a coordinate into the box (toroidal wrap). Throws for guard-band windows.
    Point wrap(Point p) const;

    std::string describe() const;
};

inline double norm2(const Point& p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; }

/// Volume of the unit ball in d dimensions and surface area of the unit sphere.
double unit_ball_volume(int d);
double unit_sphere_area(int d);

}  // namespace outagekit
