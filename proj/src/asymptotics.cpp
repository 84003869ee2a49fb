#include "outagekit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "outagekit/error.hpp"
#include "outagekit/quadrature.hpp"
#include "outagekit/special.hpp"

namespace outagekit {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::ProductDensityQuadrature: return "theorem2-quadrature";
        case Provenance::CsmaClosedForm: return "corollary2-formula";
        case Provenance::EpsteinZeta: return "epstein-zeta";
        case Provenance::ClusterMacB: return "clustermac-b";
        case Provenance::Fitted: return "fitted";
        case Provenance::Descriptor: return "descriptor";
    }
    return "unknown";
}

namespace {

std::vector<double> kernel_breaks(const PathLoss& pl, std::vector<double> extra = {}) {
    if (pl.kind() == PathLossKind::BoundedMin) {
        extra.push_back(1.0);
    }
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    return extra;
}

void check_planar_alpha(const PathLoss& pl) {
    if (!(pl.alpha() > 2.0)) {
        throw ParameterError("spatial contention diverges unless alpha > 2");
    }
}

}  // namespace

double gamma_aloha(const ProductDensity& rho2, double lambda, double theta, const PathLoss& pathloss,
                   double link_gain, const QuadOptions& opts) {
    check_planar_alpha(pathloss);
    if (!(lambda > 0.0) || !(theta > 0.0) || !(link_gain > 0.0)) {
        throw ParameterError("gamma needs lambda, theta and link gain positive");
    }
    const DeltaKernel kernel(pathloss, theta / link_gain);
    auto f = [&](double r) { return rho2(r) * kernel.of_distance(r); };
    const auto breaks = kernel_breaks(pathloss, rho2.breakpoints());
    return radial_integral(2, f, breaks, opts) / lambda;
}

double gamma_aloha_swapped(const ProductDensity& rho2, double lambda, double theta, const PathLoss& pathloss,
                           double link_distance, const QuadOptions& opts) {
    check_planar_alpha(pathloss);
    if (!(link_distance >= 0.0)) {
        throw ParameterError("link distance must be non-negative");
    }
    const double link_gain = pathloss.gain(link_distance);
    if (link_distance == 0.0) {
        return gamma_aloha(rho2, lambda, theta, pathloss, link_gain, opts);
    }
    const DeltaKernel kernel(pathloss, theta / link_gain);
    const double big_r = link_distance;
    QuadOptions inner = opts;
    inner.rel_tol = std::min(1e-11, opts.rel_tol * 1e-2);
    // Angular average of Delta(|x - y|) over the direction of x.
    auto mean_delta = [&](double r) {
        auto g = [&](double phi) {
            const double d2 = std::max(0.0, r * r + big_r * big_r - 2.0 * r * big_r * std::cos(phi));
            return kernel(d2);
        };
        const double nodes[] = {0.0, 0.05, 0.5, M_PI};
        return integrate_pieces(g, nodes, inner) / M_PI;
    };
    auto f = [&](double r) { return rho2(r) * mean_delta(r); };
    auto breaks = rho2.breakpoints();
    breaks.push_back(big_r);
    breaks.push_back(0.5 * big_r);
    breaks.push_back(2.0 * big_r);
    return radial_integral(2, f, kernel_breaks(pathloss, breaks), opts) / lambda;
}

double gamma_ppp(int d, double lambda, double theta, const PathLoss& pathloss, double link_gain,
                 const QuadOptions& opts) {
    pathloss.check_dimension(d);
    if (!(lambda > 0.0) || !(theta > 0.0) || !(link_gain > 0.0)) {
        throw ParameterError("gamma needs lambda, theta and link gain positive");
    }
    const DeltaKernel kernel(pathloss, theta / link_gain);
    auto f = [&](double r) { return kernel.of_distance(r); };
    return lambda * radial_integral(d, f, kernel_breaks(pathloss), opts);
}

double csma_g(double r, double lambda) {
    const double k = std::sqrt(lambda * M_PI);
    const double u = std::min(1.0, k * r / 2.0);
    return 2.0 * M_PI - 2.0 * std::acos(u) + (r * k / 2.0) * std::sqrt(std::max(0.0, 4.0 - M_PI * lambda * r * r));
}

double gamma_csma_matern(double lambda, double theta, double alpha) {
    if (!(alpha > 2.0)) {
        throw ParameterError("CSMA contention needs alpha > 2");
    }
    if (!(lambda > 0.0) || !(theta > 0.0)) {
        throw ParameterError("CSMA contention needs lambda > 0 and theta > 0");
    }
    const double first =
        theta * std::pow(lambda, 0.5 * alpha) * std::pow(M_PI, 0.5 * alpha) * std::pow(2.0, 3.0 - alpha) / (alpha - 2.0);
    const double a = 1.0 / std::sqrt(lambda * M_PI);
    auto f = [&](double r) { return std::pow(r, 1.0 - alpha) / csma_g(r, lambda); };
    QuadOptions q;
    q.rel_tol = 1e-12;
    const double second = 4.0 * theta * lambda * M_PI * M_PI * integrate(f, a, 2.0 * a, q);
    return first + second;
}

TdmaBounds tdma_bounds(int d, int m, double theta, double alpha) {
    if (m < 1) {
        throw ParameterError("TDMA needs m >= 1");
    }
    if (!(theta > 0.0)) {
        throw ParameterError("theta must be positive");
    }
    const double z = SpecialFunctionTable::global().epstein(d, alpha);
    const double tp = theta * std::pow(static_cast<double>(m), -alpha);
    TdmaBounds b;
    b.eta = std::pow(static_cast<double>(m), -d);
    b.lower = std::exp(-z * tp);
    b.upper = 1.0 / (1.0 + z * tp);
    const auto [cz, defect] = lattice_log_product(d, alpha, tp);
    b.exact = std::exp(-cz + defect);
    const double slack = 1e-12;
    if (b.exact < b.lower * (1.0 - slack) || b.exact > b.upper * (1.0 + slack)) {
        std::ostringstream os;
        os.precision(12);
        os << "TDMA bound ordering violated: " << b.lower << " <= " << b.exact << " <= " << b.upper;
        throw NumericalError(os.str());
    }
    return b;
}

double extrapolate_coefficient(const std::function<double(double)>& outage, double kappa,
                               std::span<const double> correction_exponents, double eta0, double ratio) {
    if (!(eta0 > 0.0) || !(ratio > 0.0 && ratio < 1.0)) {
        throw ParameterError("extrapolation needs eta0 > 0 and 0 < ratio < 1");
    }
    const std::size_t levels = correction_exponents.size();
    std::vector<double> f(levels + 1);
    double eta = eta0;
    for (std::size_t k = 0; k <= levels; ++k) {
        f[k] = outage(eta) / std::pow(eta, kappa);
        eta *= ratio;
    }
    for (std::size_t j = 0; j < levels; ++j) {
        const double w = std::pow(ratio, correction_exponents[j]);
        for (std::size_t k = 0; k + 1 < f.size() - j; ++k) {
            f[k] = (f[k + 1] - w * f[k]) / (1.0 - w);
        }
    }
    return f[0];
}

AsymptoticResult gamma_cluster_mac(const ClusterSpec& spec, double b, double theta, const PathLoss& pathloss,
                                   const QuadOptions& opts) {
    validate(MacScheme{ClusterMac{b, 0.5}});
    AsymptoticResult out;
    out.scheme = "cluster";
    out.provenance = Provenance::ClusterMacB;
    if (b == 0.0) {
        const double p0 = success_cluster_mac_closed(spec, 0.0, 0.0, theta, pathloss, opts).p_success;
        auto drop = [&](double eta) {
            return p0 - success_cluster_mac_closed(spec, 0.0, eta, theta, pathloss, opts).p_success;
        };
        const double exps[] = {1.0, 2.0};
        out.p0 = p0;
        out.kappa = 1.0;
        out.gamma = extrapolate_coefficient(drop, 1.0, exps, 1e-2);
        out.validity = "parent thinning: P0 < 1 (class U2); gamma and kappa describe P0 - P";
        return out;
    }
    std::vector<double> cand{b, 1.0 - b, 1.0, 2.0 * b, 2.0 - 2.0 * b, 1.0 + b, 2.0 - b};
    std::sort(cand.begin(), cand.end());
    std::vector<double> exps;
    for (double e : cand) {
        if (e > 1e-9 && (exps.empty() || e - exps.back() > 1e-9)) {
            exps.push_back(e);
        }
        if (exps.size() == 3) {
            break;
        }
    }
    auto outage = [&](double eta) { return success_cluster_mac_closed(spec, b, eta, theta, pathloss, opts).outage; };
    out.kappa = b;
    out.gamma = extrapolate_coefficient(outage, b, exps, 1e-4);
    out.validity = b < 1.0 ? "small eta; class U1 (kappa < 1)" : "small eta; equals ALOHA";
    return out;
}

AsymptoticResult gamma_kappa_for(const NodeModel& model, const MacScheme& scheme, const LinkSpec& link,
                                 const PathLoss& pathloss) {
    validate(model);
    validate(scheme);
    link.validate(pathloss);
    const int d = model_dimension(model);
    pathloss.check_dimension(d);
    const double r = link.resolved_distance(pathloss);
    const double link_gain = pathloss.gain(r);
    const bool swapped = link.orientation == Orientation::TransmitterTypical;
    const std::string combo = model_name(model) + " + " + scheme_name(scheme);
    AsymptoticResult out;
    out.scheme = scheme_name(scheme);
    std::ostringstream note;

    if (std::holds_alternative<Aloha>(scheme)) {
        if (std::holds_alternative<LatticeModel>(model)) {
            throw NotImplementedError("no analytic spatial contention for " + combo);
        }
        out.kappa = 1.0;
        out.provenance = Provenance::ProductDensityQuadrature;
        const double lambda = model_intensity(model);
        if (d != 2) {
            out.gamma = gamma_ppp(d, lambda, link.theta, pathloss, link_gain);
        } else {
            const auto rho = *model_product_density(model);
            out.gamma = swapped ? gamma_aloha_swapped(rho, lambda, link.theta, pathloss, r)
                                : gamma_aloha(rho, lambda, link.theta, pathloss, link_gain);
        }
        note << "eta -> 0; class R1";
        out.validity = note.str();
        return out;
    }
    if (std::holds_alternative<CsmaMatern>(scheme)) {
        const auto* ppp = std::get_if<PppModel>(&model);
        if (!ppp || d != 2 || pathloss.kind() != PathLossKind::Singular) {
            throw NotImplementedError("CSMA contention is available for a planar PPP with singular loss, not " + combo +
                                      " with " + pathloss.name());
        }
        out.kappa = 0.5 * pathloss.alpha();
        out.gamma = gamma_csma_matern(ppp->intensity, link.theta, pathloss.alpha()) / link_gain;
        out.provenance = Provenance::CsmaClosedForm;
        note << "eta -> 0; class R3";
        if (swapped) {
            note << "; swapped link: hard-core MACs keep the same asymptote";
        }
        out.validity = note.str();
        return out;
    }
    if (const auto* t = std::get_if<TdmaLattice>(&scheme)) {
        const auto* lat = std::get_if<LatticeModel>(&model);
        if (!lat || lat->dimension != t->dimension) {
            throw NotImplementedError("TDMA contention needs a lattice of matching dimension, got " + combo);
        }
        const double alpha = pathloss.alpha();
        const double scale = link.theta * std::pow(lat->spacing, -alpha) / link_gain;
        const double z = SpecialFunctionTable::global().epstein(d, alpha);
        out.kappa = alpha / d;
        out.provenance = Provenance::EpsteinZeta;
        if (d == 3) {
            const double approx = epstein_zeta3_approx(alpha);
            out.gamma = approx * scale;
            note.precision(9);
            note << "eta -> 0; class R3; zeta/beta approximation of Z3=" << approx << ", lattice sum " << z
                 << ", gap " << approx - z;
        } else {
            out.gamma = z * scale;
            note << "eta -> 0; class R3";
        }
        if (swapped) {
            note << "; swapped link: lattice geometry keeps the same asymptote";
        }
        out.validity = note.str();
        return out;
    }
    if (const auto* c = std::get_if<ClusterMac>(&scheme)) {
        const auto* th = std::get_if<ThomasModel>(&model);
        if (!th) {
            throw NotImplementedError("cluster MAC needs a Thomas model, got " + combo);
        }
        if (swapped || r != pathloss.unit_gain_distance()) {
            throw NotImplementedError("cluster MAC contention is implemented for the unit-gain receiver-typical link");
        }
        out = gamma_cluster_mac(th->cluster, c->b, link.theta, pathloss);
        return out;
    }
    if (std::holds_alternative<UnreasonableTdma>(scheme)) {
        out.gamma = std::numeric_limits<double>::quiet_NaN();
        out.kappa = std::numeric_limits<double>::quiet_NaN();
        out.provenance = Provenance::Descriptor;
        out.validity = "class U3: P0 < 1 and success decreases as eta -> 0 (gamma < 0); no closed form";
        return out;
    }
    throw NotImplementedError("no asymptotics for " + combo);
}

std::vector<EnvelopePoint> conjecture_envelope(double gamma, double kappa, std::span<const double> eta_grid) {
    if (!(gamma > 0.0) || !(kappa >= 1.0)) {
        throw ParameterError("the envelope is defined for gamma > 0 and kappa >= 1");
    }
    std::vector<EnvelopePoint> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw ParameterError("envelope eta must lie in [0, 1]");
        }
        const double g = gamma * std::pow(eta, kappa);
        out.push_back({eta, std::max(0.0, 1.0 - g), 1.0 / (1.0 + g)});
    }
    return out;
}

double eta_max(double gamma, double kappa) {
    if (!(gamma > 0.0) || !(kappa > 0.0)) {
        throw ParameterError("eta_max needs gamma > 0 and kappa > 0");
    }
    return std::min(1.0, std::pow(0.15 / gamma, 1.0 / kappa));
}

}  // namespace outagekit
