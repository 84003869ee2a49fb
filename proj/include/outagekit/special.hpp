#pragma once

#include <map>
#include <mutex>
#include <utility>

namespace outagekit {

inline constexpr double kCatalan = 0.915965594177219015054603514932384110774;
inline constexpr double kApery = 1.202056903159594285399738161511449990765;

/// Riemann zeta for real s > 1, via the Dirichlet eta series with
/// Cohen-Rodriguez Villegas-Zagier acceleration (~1e-15 relative).
double riemann_zeta(double s);

/// Dirichlet beta for real s > 0.
double dirichlet_beta(double s);

/// Result of a lattice sum over Z^d \ {0}: direct part plus tail estimate.
struct LatticeSum {
    double value = 0.0;
    double tail = 0.0;
    double radius = 0.0;
    long long terms = 0;
};

/// Epstein zeta Z^(d)(alpha) = sum over nonzero x in Z^d of |x|^-alpha, alpha > d.
LatticeSum epstein_zeta_sum(int d, double alpha);
double epstein_zeta(int d, double alpha);

/// Closed forms: 2 zeta(alpha) for d=1, 4 zeta(alpha/2) beta(alpha/2) for d=2.
double epstein_zeta_closed(int d, double alpha);

/// Published approximation of Z^(3)(alpha) built from zeta and beta values.
double epstein_zeta3_approx(double alpha);

/// sum over nonzero x in Z^d of log(1 + c |x|^-alpha), evaluated as
/// c Z^(d)(alpha) - D with D >= 0 summed directly (it converges like |x|^-2alpha).
/// Returns {c Z, D}.
std::pair<double, double> lattice_log_product(int d, double alpha, double c);

/// Thread-safe memo of the special values used by the asymptotics code.
class SpecialFunctionTable {
public:
    double zeta(double s);
    double beta(double s);
    double epstein(int d, double alpha);
    double catalan() const { return kCatalan; }
    double apery() const { return kApery; }

    static SpecialFunctionTable& global();

private:
    std::mutex mutex_;
    std::map<double, double> zeta_;
    std::map<double, double> beta_;
    std::map<std::pair<int, double>, double> epstein_;
};

}  // namespace outagekit
