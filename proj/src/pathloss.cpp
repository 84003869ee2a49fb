#include "outagekit/pathloss.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "outagekit/error.hpp"

namespace outagekit {

PathLoss::PathLoss(PathLossKind kind, double alpha) : kind_(kind), alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ParameterError("path-loss exponent must be positive and finite");
    }
    int_alpha_ = (alpha == 2.0 || alpha == 4.0 || alpha == 6.0 || alpha == 8.0) ? static_cast<int>(alpha) : 0;
}

double PathLoss::power(double r2) const {
    switch (int_alpha_) {
        case 2: return r2;
        case 4: return r2 * r2;
        case 6: return r2 * r2 * r2;
        case 8: {
            const double q = r2 * r2;
            return q * q;
        }
        default: return std::pow(r2, 0.5 * alpha_);
    }
}

double PathLoss::gain_sq(double r2) const {
    switch (kind_) {
        case PathLossKind::Singular:
            return r2 > 0.0 ? 1.0 / power(r2) : std::numeric_limits<double>::infinity();
        case PathLossKind::BoundedSum:
            return 1.0 / (1.0 + power(r2));
        case PathLossKind::BoundedMin:
            return r2 <= 1.0 ? 1.0 : 1.0 / power(r2);
    }
    return 0.0;
}

double PathLoss::gain(double r) const {
    if (r < 0.0) {
        throw ParameterError("distance must be non-negative");
    }
    return gain_sq(r * r);
}

double PathLoss::unit_gain_distance() const {
    return kind_ == PathLossKind::BoundedSum ? 0.0 : 1.0;
}

void PathLoss::check_dimension(int d) const {
    if (!(alpha_ > d)) {
        std::ostringstream os;
        os << "path-loss exponent " << alpha_ << " must exceed the dimension " << d;
        throw ParameterError(os.str());
    }
}

std::string PathLoss::name() const {
    return to_string(kind_);
}

PathLossKind parse_pathloss_kind(std::string_view text) {
    if (text == "singular") {
        return PathLossKind::Singular;
    }
    if (text == "bounded_sum" || text == "bounded-sum") {
        return PathLossKind::BoundedSum;
    }
    if (text == "bounded_min" || text == "bounded-min") {
        return PathLossKind::BoundedMin;
    }
    throw ParameterError("unknown path-loss model '" + std::string(text) + "'");
}

std::string to_string(PathLossKind kind) {
    switch (kind) {
        case PathLossKind::Singular: return "singular";
        case PathLossKind::BoundedSum: return "bounded_sum";
        case PathLossKind::BoundedMin: return "bounded_min";
    }
    return "unknown";
}

}  // namespace outagekit
