#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "outagekit/geometry.hpp"
#include "outagekit/pathloss.hpp"
#include "outagekit/pointprocess.hpp"
#include "outagekit/quadrature.hpp"

namespace outagekit {

enum class Orientation {
    ReceiverTypical,     // the typical node receives from a virtual transmitter at distance R
    TransmitterTypical,  // the typical node transmits to a receiver at distance R
};

struct Noise {
    double power = 0.0;     // W
    double tx_power = 1.0;  // P
};

struct LinkSpec {
    double theta = 1.0;
    std::optional<double> distance;  // defaults to the unit-gain distance
    Orientation orientation = Orientation::ReceiverTypical;
    std::optional<Noise> noise;

    void validate(const PathLoss& pathloss) const;
    double resolved_distance(const PathLoss& pathloss) const;
    /// theta / l(R): the threshold seen by the interference after normalising the desired link.
    double effective_theta(const PathLoss& pathloss) const;
    /// exp(-theta W / (l(R) P)), or 1 without noise.
    double noise_factor(const PathLoss& pathloss) const;
};

/// Delta(x) = 1 / (1 + l(R) / (theta l(x))): probability that one unit-mean
/// exponential interferer at distance x alone causes an outage.
/// Under Singular loss Delta(0) = 1.
double delta(double x, const PathLoss& pathloss, double theta, double link_gain = 1.0);

/// Delta as a function of squared distance with the link normalisation folded in.
class DeltaKernel {
public:
    DeltaKernel(const PathLoss& pathloss, double effective_theta)
        : pathloss_(pathloss), theta_(effective_theta) {}
    double operator()(double r2) const {
        const double g = theta_ * pathloss_.gain_sq(r2);
        return std::isinf(g) ? 1.0 : g / (1.0 + g);
    }
    double of_distance(double r) const { return (*this)(r * r); }
    double theta() const { return theta_; }
    const PathLoss& pathloss() const { return pathloss_; }

private:
    PathLoss pathloss_;
    double theta_;
};

/// Sum of fading times path gain over transmitters, with window-aware distances.
/// `fading` may be empty (unit fading). A transmitter on top of the receiver
/// under Singular loss yields +infinity.
double interference(std::span<const Point> transmitters, const Point& receiver, const PathLoss& pathloss,
                    std::span<const double> fading = {}, const Window* window = nullptr);

/// Success probability given interferer positions with all fading averaged out:
/// prod 1/(1 + theta l(R)^-1 l(|x - y|)), times the noise factor.
double success_conditional(std::span<const Point> interferers, const Point& receiver, const LinkSpec& link,
                           const PathLoss& pathloss, const Window* window = nullptr);

/// exp(-eta lambda theta^(2/alpha) (2 pi / alpha) Gamma(2/alpha) Gamma(1 - 2/alpha)).
double success_ppp_aloha_closed(double lambda, double eta, double theta, double alpha);

struct ClusterSuccess {
    double p_success = 1.0;
    double outage = 0.0;  // 1 - p_success computed without cancellation
};

/// Success probability on a Thomas cluster process where each cluster is kept
/// with probability q and each daughter with probability p (ALOHA: q = 1, p = eta).
ClusterSuccess success_thomas_closed(const ClusterSpec& spec, double q, double p, double theta,
                                     const PathLoss& pathloss, double link_gain = 1.0,
                                     const QuadOptions& opts = {});

/// Daughter thinning by eta.
ClusterSuccess success_thomas_aloha_closed(const ClusterSpec& spec, double eta, double theta,
                                           const PathLoss& pathloss, const QuadOptions& opts = {});

/// Cluster MAC with exponent b: clusters kept w.p. eta^(1-b), daughters w.p. eta^b.
ClusterSuccess success_cluster_mac_closed(const ClusterSpec& spec, double b, double eta, double theta,
                                          const PathLoss& pathloss, const QuadOptions& opts = {});

/// beta(s) = int Delta(|x|) f(x - s) dx for the isotropic Gaussian scatter f.
double thomas_beta(double s, double sigma, const DeltaKernel& delta, const QuadOptions& opts = {});

/// e^-x I_0(x) for x >= 0.
double bessel_i0e(double x);

}  // namespace outagekit
