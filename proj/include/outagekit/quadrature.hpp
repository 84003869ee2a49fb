#pragma once

#include <functional>
#include <span>

namespace outagekit {

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    unsigned max_depth = 18;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
/// Throws NumericalError when the error estimate misses both tolerances.
double integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});

/// Sum of integrals over consecutive nodes; nodes must be non-decreasing.
double integrate_pieces(const Integrand& f, std::span<const double> nodes, const QuadOptions& opts = {});

/// Integral of a radial function over R^d: |S^{d-1}| * int_0^inf f(r) r^{d-1} dr.
/// `breaks` are interior points where f is not smooth.
double radial_integral(int d, const Integrand& f, std::span<const double> breaks = {},
                       const QuadOptions& opts = {});

/// Fraction of the sphere of radius r lying inside the cube [-a, a]^d.
double sphere_fraction_in_cube(int d, double r, double a);

/// Integral of f(|x|) over R^d minus the cube [-a, a]^d.
double outside_cube_integral(int d, const Integrand& f, double a, const QuadOptions& opts = {});

}  // namespace outagekit
