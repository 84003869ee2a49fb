#include "outagekit/geometry.hpp"

#include <cmath>
#include <sstream>

#include "outagekit/error.hpp"

namespace outagekit {

Window Window::cube(int dimension, double side, EdgeMode edge, double guard) {
    Window w;
    w.dimension = dimension;
    w.side = {1.0, 1.0, 1.0};
    for (int k = 0; k < dimension && k < 3; ++k) {
        w.side[k] = side;
    }
    w.edge = edge;
    w.guard = guard;
    w.validate();
    return w;
}

void Window::validate() const {
    if (dimension < 1 || dimension > 3) {
        throw ParameterError("window dimension must be 1, 2 or 3");
    }
    for (int k = 0; k < dimension; ++k) {
        if (!(side[k] > 0.0) || !std::isfinite(side[k])) {
            throw ParameterError("window side lengths must be positive and finite");
        }
    }
    if (!(guard >= 0.0)) {
        throw ParameterError("guard-band width must be non-negative");
    }
}

double Window::volume() const {
    double v = 1.0;
    for (int k = 0; k < dimension; ++k) {
        v *= side[k];
    }
    return v;
}

bool Window::contains(const Point& p) const {
    for (int k = 0; k < dimension; ++k) {
        const double h = 0.5 * side[k];
        if (!(p[k] >= -h && p[k] < h)) {
            return false;
        }
    }
    for (int k = dimension; k < 3; ++k) {
        if (p[k] != 0.0) {
            return false;
        }
    }
    return true;
}

Point Window::displacement(const Point& a, const Point& b) const {
    Point d{0.0, 0.0, 0.0};
    for (int k = 0; k < dimension; ++k) {
        double v = b[k] - a[k];
        if (edge == EdgeMode::Toroidal) {
            const double s = side[k];
            if (v >= 0.5 * s) {
                v -= s;
            } else if (v < -0.5 * s) {
                v += s;
            }
        }
        d[k] = v;
    }
    return d;
}

double Window::distance2(const Point& a, const Point& b) const {
    return norm2(displacement(a, b));
}

Point Window::wrap(Point p) const {
    if (edge != EdgeMode::Toroidal) {
        throw UsageError("wrap() requires a toroidal window");
    }
    for (int k = 0; k < dimension; ++k) {
        const double s = side[k];
        double v = p[k] - s * std::floor(p[k] / s + 0.5);
        if (v >= 0.5 * s) {
            v -= s;
        }
        if (v < -0.5 * s) {
            v = -0.5 * s;
        }
        p[k] = v;
    }
    for (int k = dimension; k < 3; ++k) {
        p[k] = 0.0;
    }
    return p;
}

std::string Window::describe() const {
    std::ostringstream os;
    os.precision(9);
    for (int k = 0; k < dimension; ++k) {
        os << (k ? "x" : "") << side[k];
    }
    os << (edge == EdgeMode::Toroidal ? " toroidal" : " guard-band");
    if (edge == EdgeMode::GuardBand) {
        os << " " << guard;
    }
    return os.str();
}

double unit_ball_volume(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    }
}

double unit_sphere_area(int d) {
    return d * unit_ball_volume(d);
}

}  // namespace outagekit
