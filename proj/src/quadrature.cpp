#include "outagekit/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "outagekit/error.hpp"
#include "outagekit/geometry.hpp"

namespace outagekit {

double integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "quadrature produced a non-finite value on [" << a << ", " << b << "]";
        throw NumericalError(os.str());
    }
    // Boost stops at max depth without signalling; accept anything within the
    // relative target on the L1 norm or the absolute floor.
    if (error > std::max(opts.rel_tol * l1 * 100.0, opts.abs_tol)) {
        std::ostringstream os;
        os.precision(3);
        os << "quadrature did not converge on [" << a << ", " << b << "]: value " << value
           << ", error estimate " << error << ", L1 " << l1;
        throw NumericalError(os.str());
    }
    return value;
}

double integrate_pieces(const Integrand& f, std::span<const double> nodes, const QuadOptions& opts) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (nodes[i + 1] < nodes[i]) {
            throw ParameterError("integration nodes must be non-decreasing");
        }
        total += integrate(f, nodes[i], nodes[i + 1], opts);
    }
    return total;
}

double radial_integral(int d, const Integrand& f, std::span<const double> breaks, const QuadOptions& opts) {
    std::vector<double> nodes{0.0};
    for (double b : breaks) {
        if (b > nodes.back()) {
            nodes.push_back(b);
        }
    }
    // A finite first stretch keeps the infinite map away from the bulk.
    if (nodes.size() == 1) {
        nodes.push_back(1.0);
    }
    nodes.push_back(std::numeric_limits<double>::infinity());
    auto g = [&](double r) {
        if (r == 0.0) {
            return d == 1 ? f(0.0) : 0.0;
        }
        return f(r) * std::pow(r, d - 1);
    };
    return unit_sphere_area(d) * integrate_pieces(g, nodes, opts);
}

double sphere_fraction_in_cube(int d, double r, double a) {
    if (r <= a) {
        return 1.0;
    }
    if (r >= a * std::sqrt(static_cast<double>(d))) {
        return 0.0;
    }
    if (d == 1) {
        return 0.0;
    }
    if (d == 2) {
        return 1.0 - (4.0 / M_PI) * std::acos(a / r);
    }
    // d = 3. Archimedes: the area element is r dz dphi, so a cap beyond one face
    // has area 2 pi r (r - a). Caps of adjacent faces overlap once r > a sqrt 2;
    // three caps never meet below a sqrt 3.
    const double caps = 6.0 * 2.0 * M_PI * r * (r - a);
    double overlaps = 0.0;
    const double z2 = r * r - 2.0 * a * a;
    if (z2 > 0.0) {
        // Area of {x > a, y > a}: r int (pi/2 - 2 asin(a / rho(z))) dz, rho^2 = r^2 - z^2,
        // with z = Z sin t to remove the square-root endpoint.
        const double z = std::sqrt(z2);
        auto arc = [&](double t) {
            const double c = std::cos(t);
            const double rho2 = 2.0 * a * a + z2 * c * c;
            const double u = a / std::sqrt(rho2);
            // pi/2 - 2 asin(u) = 2 asin((1 - 2u^2) / (sqrt 2 (sqrt(1 - u^2) + u))), without cancellation.
            const double num = z2 * c * c / rho2;
            return 2.0 * std::asin(num / (std::sqrt(2.0) * (std::sqrt(1.0 - u * u) + u))) * c;
        };
        QuadOptions q;
        q.rel_tol = 1e-12;
        overlaps = 12.0 * 2.0 * r * z * integrate(arc, 0.0, 0.5 * M_PI, q);
    }
    return std::clamp(1.0 - (caps - overlaps) / (4.0 * M_PI * r * r), 0.0, 1.0);
}

double outside_cube_integral(int d, const Integrand& f, double a, const QuadOptions& opts) {
    const double diag = a * std::sqrt(static_cast<double>(d));
    const double area = unit_sphere_area(d);
    auto partial = [&](double r) {
        return f(r) * std::pow(r, d - 1) * (1.0 - sphere_fraction_in_cube(d, r, a));
    };
    double inner = 0.0;
    if (d > 1) {
        // The fraction behaves like sqrt(r - r0) past a = r0 (and past a sqrt 2 in
        // three dimensions); r = r0 + s^2 makes each piece smooth.
        std::vector<double> nodes{a};
        if (d == 3) {
            nodes.push_back(a * std::sqrt(2.0));
        }
        nodes.push_back(diag);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double r0 = nodes[i];
            auto g = [&](double s) { return 2.0 * s * partial(r0 + s * s); };
            inner += integrate(g, 0.0, std::sqrt(nodes[i + 1] - r0), opts);
        }
    }
    auto full = [&](double r) { return f(r) * std::pow(r, d - 1); };
    const double outer = integrate(full, diag, std::numeric_limits<double>::infinity(), opts);
    return area * (inner + outer);
}

}  // namespace outagekit
