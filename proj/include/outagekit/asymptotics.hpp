#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "outagekit/mac.hpp"
#include "outagekit/outage.hpp"
#include "outagekit/pointprocess.hpp"
#include "outagekit/scenario.hpp"

namespace outagekit {

enum class Provenance {
    ProductDensityQuadrature,  // gamma = lambda^-1 int rho2 Delta
    CsmaClosedForm,   // CSMA on a PPP, closed first term plus one quadrature
    EpsteinZeta,         // lattice TDMA, gamma = Z^(d)(alpha) theta
    ClusterMacB,         // extrapolated from the cluster closed form
    Fitted,              // regression on simulated data
    Descriptor,          // qualitative class only, no gamma
};

std::string to_string(Provenance p);

struct AsymptoticResult {
    std::string scheme;
    double gamma = 0.0;
    double kappa = 1.0;
    Provenance provenance = Provenance::ProductDensityQuadrature;
    std::string validity;
    std::optional<double> p0;  // limit of P as eta -> 0 when below 1
};

/// lambda^-1 int rho2(|x|) Delta(|x|) dx in the plane, Delta using theta / l(R).
double gamma_aloha(const ProductDensity& rho2, double lambda, double theta, const PathLoss& pathloss,
                   double link_gain = 1.0, const QuadOptions& opts = {});

/// Swapped link: lambda^-1 int rho2(|x|) Delta(|x - y|) dx with |y| = R.
double gamma_aloha_swapped(const ProductDensity& rho2, double lambda, double theta, const PathLoss& pathloss,
                           double link_distance, const QuadOptions& opts = {});

/// PPP in d dimensions: lambda int Delta.
double gamma_ppp(int d, double lambda, double theta, const PathLoss& pathloss, double link_gain = 1.0,
                 const QuadOptions& opts = {});

/// CSMA on a planar PPP with singular loss: spatial contention for kappa = alpha/2.
double gamma_csma_matern(double lambda, double theta, double alpha);
/// The helper g(r) of the CSMA integral.
double csma_g(double r, double lambda);

struct TdmaBounds {
    double eta = 1.0;
    double lower = 0.0;
    double upper = 1.0;
    double exact = 1.0;
};

/// Bounds and exact success for m^d-phase TDMA on the unit cubic lattice.
TdmaBounds tdma_bounds(int d, int m, double theta, double alpha);

/// Coefficient gamma of 1 - P(eta) ~ gamma eta^kappa by Richardson extrapolation
/// on eta0, eta0 r, eta0 r^2, ... eliminating the given correction exponents.
double extrapolate_coefficient(const std::function<double(double)>& outage, double kappa,
                               std::span<const double> correction_exponents, double eta0 = 1e-3,
                               double ratio = 0.25);

/// Cluster MAC with exponent b on a Thomas process. For b = 0 the result
/// carries p0 < 1 and the linear coefficient of P0 - P.
AsymptoticResult gamma_cluster_mac(const ClusterSpec& spec, double b, double theta, const PathLoss& pathloss,
                                   const QuadOptions& opts = {});

/// Dispatch on model and MAC.
AsymptoticResult gamma_kappa_for(const NodeModel& model, const MacScheme& scheme, const LinkSpec& link,
                                 const PathLoss& pathloss);

struct EnvelopePoint {
    double eta;
    double lower;
    double upper;
};

/// 1 - gamma eta^kappa (clamped at 0) and 1 / (1 + gamma eta^kappa).
std::vector<EnvelopePoint> conjecture_envelope(double gamma, double kappa, std::span<const double> eta_grid);

/// (0.15 / gamma)^(1/kappa), capped at 1.
double eta_max(double gamma, double kappa);

}  // namespace outagekit
