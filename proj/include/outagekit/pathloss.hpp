#pragma once

#include <string>
#include <string_view>

namespace outagekit {

enum class PathLossKind {
    Singular,    // r^-alpha
    BoundedSum,  // 1 / (1 + r^alpha)
    BoundedMin,  // min(1, r^-alpha)
};

class PathLoss {
public:
    PathLoss() = default;
    PathLoss(PathLossKind kind, double alpha);

    PathLossKind kind() const { return kind_; }
    double alpha() const { return alpha_; }

    double gain(double r) const;
    /// Gain from a squared distance; avoids the square root on hot paths.
    double gain_sq(double r2) const;

    /// Distance with unit gain: 1 for Singular and BoundedMin, 0 for BoundedSum.
    double unit_gain_distance() const;

    /// Interference is a.s. finite only for alpha > d.
    void check_dimension(int d) const;

    std::string name() const;

private:
    double power(double r2) const;  // r^alpha from r^2

    PathLossKind kind_ = PathLossKind::Singular;
    double alpha_ = 4.0;
    int int_alpha_ = 4;  // alpha when it is a small even integer, else 0
};

PathLossKind parse_pathloss_kind(std::string_view text);
std::string to_string(PathLossKind kind);

}  // namespace outagekit
