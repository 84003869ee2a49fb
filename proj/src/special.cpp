#include "outagekit/special.hpp"

#include <cmath>
#include <vector>

#include "outagekit/error.hpp"
#include "outagekit/geometry.hpp"

namespace outagekit {

namespace {

// Cohen, Rodriguez Villegas, Zagier, "Convergence acceleration of alternating
// series", Algorithm 1. Sums sum_{k>=0} (-1)^k a(k) for completely monotone a.
template <class F>
double alternating_sum(F&& a, int n = 48) {
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0;
    double c = -d;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * a(k);
        b = (static_cast<double>(k) + n) * (static_cast<double>(k) - n) * b /
            ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

// y - log(1 + y) without cancellation for small y.
double log1p_defect(double y) {
    if (y < 1e-3) {
        return y * y * (0.5 - y * (1.0 / 3.0 - y * (0.25 - y * 0.2)));
    }
    return y - std::log1p(y);
}

struct ShellSums {
    double main = 0.0;     // sum of |x|^-alpha
    double defect = 0.0;   // sum of g(c |x|^-alpha)
    long long count = 0;   // lattice points in the ball, origin included
    long long terms = 0;
};

// Direct sums over the integer ball |x| <= r using octant symmetry. Rows are
// accumulated from the outside in so small terms are added first.
ShellSums ball_sums(int d, double alpha, long long r, double c) {
    const long long r2 = r * r;
    const double ha = -0.5 * alpha;
    auto add = [&](ShellSums& acc, long long n2, long long mult) {
        const double t = std::pow(static_cast<double>(n2), ha);
        acc.main += static_cast<double>(mult) * t;
        if (c > 0.0) {
            acc.defect += static_cast<double>(mult) * log1p_defect(c * t);
        }
        acc.terms += mult;
    };
    auto merge = [](ShellSums& into, const ShellSums& row) {
        into.main += row.main;
        into.defect += row.defect;
        into.terms += row.terms;
    };
    auto isqrt = [](long long v) {
        long long q = static_cast<long long>(std::sqrt(static_cast<double>(v)));
        while (q * q > v) {
            --q;
        }
        while ((q + 1) * (q + 1) <= v) {
            ++q;
        }
        return q;
    };

    ShellSums out;
    if (d == 1) {
        for (long long x = r; x >= 1; --x) {
            add(out, x * x, 2);
        }
    } else if (d == 2) {
        for (long long x = r; x >= 0; --x) {
            ShellSums row;
            for (long long y = isqrt(r2 - x * x); y >= 0; --y) {
                if (x != 0 || y != 0) {
                    add(row, x * x + y * y, (x > 0 ? 2 : 1) * (y > 0 ? 2 : 1));
                }
            }
            merge(out, row);
        }
    } else {
        for (long long x = r; x >= 0; --x) {
            const long long rx = r2 - x * x;
            for (long long y = isqrt(rx); y >= 0; --y) {
                ShellSums row;
                for (long long z = isqrt(rx - y * y); z >= 0; --z) {
                    if (x != 0 || y != 0 || z != 0) {
                        add(row, x * x + y * y + z * z,
                            (x > 0 ? 2 : 1) * (y > 0 ? 2 : 1) * (z > 0 ? 2 : 1));
                    }
                }
                merge(out, row);
            }
        }
    }
    out.count = out.terms + 1;
    return out;
}

long long default_radius(int d) {
    switch (d) {
        case 1: return 20000;
        case 2: return 600;
        default: return 70;
    }
}

// Tail of the sum beyond the ball, replaced by the integral from the radius
// whose ball volume equals the number of enclosed lattice points; that choice
// removes the boundary term of the lattice-point discrepancy.
double tail_integral(int d, double alpha, const ShellSums& s, long long r) {
    double r_eff;
    if (d == 1) {
        r_eff = static_cast<double>(r) + 0.5;
    } else {
        r_eff = std::pow(static_cast<double>(s.count) / unit_ball_volume(d), 1.0 / d);
    }
    return unit_sphere_area(d) * std::pow(r_eff, d - alpha) / (alpha - d);
}

void check_epstein_args(int d, double alpha) {
    if (d < 1 || d > 3) {
        throw ParameterError("lattice dimension must be 1, 2 or 3");
    }
    if (!(alpha > d)) {
        throw ParameterError("lattice sum diverges unless alpha > d");
    }
}

}  // namespace

double riemann_zeta(double s) {
    if (!(s > 1.0)) {
        throw ParameterError("riemann_zeta requires s > 1");
    }
    const double eta = alternating_sum([s](int k) { return std::pow(k + 1.0, -s); });
    return eta / -std::expm1(std::log(2.0) * (1.0 - s));
}

double dirichlet_beta(double s) {
    if (!(s > 0.0)) {
        throw ParameterError("dirichlet_beta requires s > 0");
    }
    return alternating_sum([s](int k) { return std::pow(2.0 * k + 1.0, -s); });
}

LatticeSum epstein_zeta_sum(int d, double alpha) {
    check_epstein_args(d, alpha);
    const long long r = default_radius(d);
    const ShellSums s = ball_sums(d, alpha, r, 0.0);
    LatticeSum out;
    out.tail = tail_integral(d, alpha, s, r);
    out.value = s.main + out.tail;
    out.radius = static_cast<double>(r);
    out.terms = s.terms;
    return out;
}

double epstein_zeta(int d, double alpha) {
    return epstein_zeta_sum(d, alpha).value;
}

double epstein_zeta_closed(int d, double alpha) {
    check_epstein_args(d, alpha);
    if (d == 1) {
        return 2.0 * riemann_zeta(alpha);
    }
    if (d == 2) {
        return 4.0 * riemann_zeta(0.5 * alpha) * dirichlet_beta(0.5 * alpha);
    }
    throw NotImplementedError("no closed form for the cubic lattice sum in three dimensions");
}

double epstein_zeta3_approx(double alpha) {
    check_epstein_args(3, alpha);
    const double ups = std::sqrt(M_PI) * std::tgamma(0.5 * alpha - 0.5) / std::tgamma(0.5 * alpha);
    const double a = 0.5 * alpha - 0.5;
    return 4.0 * ups * riemann_zeta(a) * dirichlet_beta(a) - 4.0 * ups * riemann_zeta(alpha - 1.0) +
           8.0 * riemann_zeta(0.5 * alpha) * dirichlet_beta(0.5 * alpha) - 2.0 * riemann_zeta(alpha);
}

std::pair<double, double> lattice_log_product(int d, double alpha, double c) {
    check_epstein_args(d, alpha);
    if (!(c >= 0.0)) {
        throw ParameterError("lattice product coefficient must be non-negative");
    }
    const long long r = default_radius(d);
    const ShellSums s = ball_sums(d, alpha, r, c);
    const double z = s.main + tail_integral(d, alpha, s, r);
    return {c * z, s.defect};
}

double SpecialFunctionTable::zeta(double s) {
    std::lock_guard lock(mutex_);
    auto it = zeta_.find(s);
    if (it == zeta_.end()) {
        it = zeta_.emplace(s, riemann_zeta(s)).first;
    }
    return it->second;
}

double SpecialFunctionTable::beta(double s) {
    std::lock_guard lock(mutex_);
    auto it = beta_.find(s);
    if (it == beta_.end()) {
        it = beta_.emplace(s, dirichlet_beta(s)).first;
    }
    return it->second;
}

double SpecialFunctionTable::epstein(int d, double alpha) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(d, alpha);
    auto it = epstein_.find(key);
    if (it == epstein_.end()) {
        it = epstein_.emplace(key, epstein_zeta(d, alpha)).first;
    }
    return it->second;
}

SpecialFunctionTable& SpecialFunctionTable::global() {
    static SpecialFunctionTable table;
    return table;
}

}  // namespace outagekit
