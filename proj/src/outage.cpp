#include "outagekit/outage.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "outagekit/error.hpp"

namespace outagekit {

void LinkSpec::validate(const PathLoss& pathloss) const {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw ParameterError("SIR threshold theta must be positive");
    }
    const double r = resolved_distance(pathloss);
    if (distance && !(r > 0.0 || (r == 0.0 && pathloss.kind() != PathLossKind::Singular))) {
        throw ParameterError("link distance must be positive");
    }
    if (noise) {
        if (!(noise->power >= 0.0) || !(noise->tx_power > 0.0)) {
            throw ParameterError("noise power must be >= 0 and transmit power > 0");
        }
    }
}

double LinkSpec::resolved_distance(const PathLoss& pathloss) const {
    return distance ? *distance : pathloss.unit_gain_distance();
}

double LinkSpec::effective_theta(const PathLoss& pathloss) const {
    return theta / pathloss.gain(resolved_distance(pathloss));
}

double LinkSpec::noise_factor(const PathLoss& pathloss) const {
    if (!noise || noise->power == 0.0) {
        return 1.0;
    }
    return std::exp(-effective_theta(pathloss) * noise->power / noise->tx_power);
}

double delta(double x, const PathLoss& pathloss, double theta, double link_gain) {
    if (!(x >= 0.0)) {
        throw ParameterError("delta requires a non-negative separation");
    }
    if (!(theta > 0.0) || !(link_gain > 0.0)) {
        throw ParameterError("delta requires theta > 0 and a positive link gain");
    }
    return DeltaKernel(pathloss, theta / link_gain).of_distance(x);
}

double interference(std::span<const Point> transmitters, const Point& receiver, const PathLoss& pathloss,
                    std::span<const double> fading, const Window* window) {
    if (!fading.empty() && fading.size() != transmitters.size()) {
        throw ParameterError("one fading value per transmitter required");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < transmitters.size(); ++i) {
        const double r2 = window ? window->distance2(receiver, transmitters[i])
                                 : norm2(Point{transmitters[i][0] - receiver[0], transmitters[i][1] - receiver[1],
                                               transmitters[i][2] - receiver[2]});
        const double h = fading.empty() ? 1.0 : fading[i];
        const double g = pathloss.gain_sq(r2);
        if (std::isinf(g)) {
            return std::numeric_limits<double>::infinity();
        }
        total += h * g;
    }
    return total;
}

double success_conditional(std::span<const Point> interferers, const Point& receiver, const LinkSpec& link,
                           const PathLoss& pathloss, const Window* window) {
    link.validate(pathloss);
    const DeltaKernel kernel(pathloss, link.effective_theta(pathloss));
    double p = link.noise_factor(pathloss);
    for (const auto& x : interferers) {
        const double r2 = window ? window->distance2(receiver, x)
                                 : norm2(Point{x[0] - receiver[0], x[1] - receiver[1], x[2] - receiver[2]});
        p *= 1.0 - kernel(r2);
    }
    return p;
}

double success_ppp_aloha_closed(double lambda, double eta, double theta, double alpha) {
    if (!(alpha > 2.0)) {
        throw ParameterError("the planar PPP closed form needs alpha > 2");
    }
    if (!(lambda > 0.0) || !(eta >= 0.0 && eta <= 1.0) || !(theta > 0.0)) {
        throw ParameterError("closed form needs lambda > 0, 0 <= eta <= 1, theta > 0");
    }
    const double d = 2.0 / alpha;
    const double c = std::pow(theta, d) * (2.0 * M_PI / alpha) * std::tgamma(d) * std::tgamma(1.0 - d);
    return std::exp(-eta * lambda * c);
}

double bessel_i0e(double x) {
    if (x < 0.0) {
        x = -x;
    }
    if (x <= 500.0) {
        return std::exp(-x) * boost::math::cyl_bessel_i(0, x);
    }
    // Asymptotic series; the first omitted term is below 1e-14 relative for x > 500.
    const double t = 1.0 / (8.0 * x);
    const double series = 1.0 + t * (1.0 + t * (4.5 + t * (37.5 + t * 459.375)));
    return series / std::sqrt(2.0 * M_PI * x);
}

namespace {

void add_pathloss_breaks(const PathLoss& pl, std::vector<double>& nodes) {
    if (pl.kind() == PathLossKind::BoundedMin) {
        nodes.push_back(1.0);
    }
}

std::vector<double> sorted_nodes(std::vector<double> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

}  // namespace

double thomas_beta(double s, double sigma, const DeltaKernel& kernel, const QuadOptions& opts) {
    const double s2 = sigma * sigma;
    auto f = [&](double r) {
        if (r == 0.0) {
            return 0.0;
        }
        const double z = r - s;
        return kernel.of_distance(r) * (r / s2) * std::exp(-0.5 * z * z / s2) * bessel_i0e(r * s / s2);
    };
    std::vector<double> nodes{0.0, std::max(0.0, s - 10.0 * sigma), std::max(0.0, s - 2.0 * sigma), s,
                              s + 2.0 * sigma, s + 10.0 * sigma};
    add_pathloss_breaks(kernel.pathloss(), nodes);
    nodes = sorted_nodes(nodes);
    // Beyond s + 10 sigma the Gaussian weight is below e^-50.
    return integrate_pieces(f, nodes, opts);
}

ClusterSuccess success_thomas_closed(const ClusterSpec& spec, double q, double p, double theta,
                                     const PathLoss& pathloss, double link_gain, const QuadOptions& opts) {
    spec.validate();
    if (!(q >= 0.0 && q <= 1.0) || !(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("cluster and daughter retention probabilities must lie in [0, 1]");
    }
    if (!(theta > 0.0) || !(link_gain > 0.0)) {
        throw ParameterError("theta and link gain must be positive");
    }
    pathloss.check_dimension(2);
    if (p == 0.0) {
        return {1.0, 0.0};
    }
    const DeltaKernel kernel(pathloss, theta / link_gain);
    const double sigma = spec.sigma;
    const double cp = spec.mean_daughters * p;
    QuadOptions inner = opts;
    inner.rel_tol = std::min(opts.rel_tol * 1e-2, 1e-11);
    auto miss = [&](double s) { return -std::expm1(-cp * thomas_beta(s, sigma, kernel, inner)); };

    // Other clusters: int (1 - exp(-c p beta(s))) ds over the plane.
    const double j1 =
        q > 0.0 ? radial_integral(2, miss, std::vector<double>{sigma, 3.0 * sigma, 10.0 * sigma}, opts) : 0.0;
    // Own cluster: the parent offset has density f.
    auto own = [&](double s) { return miss(s) * (s / (sigma * sigma)) * std::exp(-0.5 * s * s / (sigma * sigma)); };
    const double nodes[] = {0.0, sigma, 2.0 * sigma, 4.0 * sigma, 13.0 * sigma};
    const double j2 = integrate_pieces(own, nodes, opts);

    const double a = spec.parent_intensity * q * j1;
    ClusterSuccess out;
    out.outage = -std::expm1(-a) + std::exp(-a) * j2;
    out.p_success = std::exp(-a) * (1.0 - j2);
    return out;
}

ClusterSuccess success_thomas_aloha_closed(const ClusterSpec& spec, double eta, double theta,
                                           const PathLoss& pathloss, const QuadOptions& opts) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ParameterError("eta must lie in [0, 1]");
    }
    return success_thomas_closed(spec, 1.0, eta, theta, pathloss, 1.0, opts);
}

ClusterSuccess success_cluster_mac_closed(const ClusterSpec& spec, double b, double eta, double theta,
                                          const PathLoss& pathloss, const QuadOptions& opts) {
    if (!(b >= 0.0 && b <= 1.0) || !(eta >= 0.0 && eta <= 1.0)) {
        throw ParameterError("cluster MAC needs b and eta in [0, 1]");
    }
    if (eta == 0.0) {
        // Limit eta -> 0: for b = 0 the own cluster still transmits in full.
        if (b == 0.0) {
            return success_thomas_closed(spec, 0.0, 1.0, theta, pathloss, 1.0, opts);
        }
        return {1.0, 0.0};
    }
    return success_thomas_closed(spec, std::pow(eta, 1.0 - b), std::pow(eta, b), theta, pathloss, 1.0, opts);
}

}  // namespace outagekit
