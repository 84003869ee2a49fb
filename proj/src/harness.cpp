#include "outagekit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "outagekit/error.hpp"
#include "outagekit/special.hpp"

namespace outagekit {

std::vector<double> log_grid(double hi, double lo, std::size_t n) {
    if (!(hi > 0.0) || !(lo > 0.0) || !(lo < hi) || n < 2) {
        throw ParameterError("log_grid needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(n);
    const double step = std::log(lo / hi) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = hi * std::exp(step * static_cast<double>(i));
    }
    out.back() = lo;
    return out;
}

std::optional<double> exact_success(const NodeModel& model, const MacScheme& mac, const LinkSpec& link,
                                    const PathLoss& pathloss) {
    const double eta = scheme_eta(mac);
    const double r = link.resolved_distance(pathloss);
    const double link_gain = pathloss.gain(r);
    const double noise = link.noise_factor(pathloss);
    if (const auto* ppp = std::get_if<PppModel>(&model)) {
        if (!std::holds_alternative<Aloha>(mac)) {
            return std::nullopt;
        }
        // Slivnyak: the orientation does not matter on a PPP.
        return noise * std::exp(-eta * gamma_ppp(ppp->dimension, ppp->intensity, link.theta, pathloss, link_gain));
    }
    const bool receiver_typical = link.orientation == Orientation::ReceiverTypical;
    if (const auto* th = std::get_if<ThomasModel>(&model)) {
        if (!receiver_typical) {
            return std::nullopt;
        }
        if (std::holds_alternative<Aloha>(mac)) {
            return noise * success_thomas_closed(th->cluster, 1.0, eta, link.theta, pathloss, link_gain).p_success;
        }
        if (const auto* c = std::get_if<ClusterMac>(&mac)) {
            if (link_gain != 1.0) {
                return std::nullopt;
            }
            return noise * success_cluster_mac_closed(th->cluster, c->b, c->eta, link.theta, pathloss).p_success;
        }
        return std::nullopt;
    }
    if (const auto* lat = std::get_if<LatticeModel>(&model)) {
        const auto* t = std::get_if<TdmaLattice>(&mac);
        if (!t || !receiver_typical || pathloss.kind() != PathLossKind::Singular) {
            return std::nullopt;
        }
        const double c = link.theta / link_gain * std::pow(t->m * lat->spacing, -pathloss.alpha());
        const auto [cz, defect] = lattice_log_product(lat->dimension, pathloss.alpha(), c);
        return noise * std::exp(-cz + defect);
    }
    return std::nullopt;
}

TransmitterFamily transmitter_family(const NodeModel& model, const MacScheme& mac, double side) {
    validate(model);
    if (model_dimension(model) != 2) {
        throw ParameterError("transmitter families are built on planar windows");
    }
    const Window window = Window::cube(2, side);
    return [model, mac, window](double eta, std::uint64_t seed) {
        const auto nodes = generate(model, window, derive_seed(seed, 0));
        return apply_mac(nodes, with_eta(mac, eta), derive_seed(seed, 1));
    };
}

ConditionReport sweep_conditions(const SweepConfig& config, const ConditionOptions& options) {
    if (config.eta_grid.empty()) {
        throw ParameterError("condition check needs an eta grid");
    }
    const double eta_min = *std::min_element(config.eta_grid.begin(), config.eta_grid.end());
    const Scenario scenario(config.model, with_eta(config.mac, eta_min));
    const double reach = 2.2 * options.radius_factor / std::sqrt(eta_min);
    const double side =
        scenario.compatible_side(std::max(scenario.window_side(config.link.resolved_distance(config.pathloss)), reach));
    return check_conditions(transmitter_family(config.model, config.mac, side), config.eta_grid, options);
}

SweepResult sweep(const SweepConfig& config) {
    validate(config.model);
    validate(config.mac);
    config.link.validate(config.pathloss);
    config.pathloss.check_dimension(model_dimension(config.model));
    if (config.eta_grid.empty()) {
        throw ParameterError("sweep needs a non-empty eta grid");
    }
    std::vector<MacScheme> schemes;
    schemes.reserve(config.eta_grid.size());
    double previous = std::numeric_limits<double>::infinity();
    for (double eta : config.eta_grid) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw ParameterError("sweep eta values must lie in (0, 1]");
        }
        auto scheme = with_eta(config.mac, eta);
        const double snapped = scheme_eta(scheme);
        if (!(snapped < previous)) {
            throw ParameterError("sweep eta grid must be strictly decreasing (after lattice snapping)");
        }
        previous = snapped;
        schemes.push_back(std::move(scheme));
    }

    SweepResult out;
    out.scheme = scheme_name(config.mac);
    out.model = model_name(config.model);
    out.dimension = model_dimension(config.model);
    out.alpha = config.pathloss.alpha();
    out.theta = config.link.theta;
    out.seed = config.estimator.seed;
    try {
        out.analytic = gamma_kappa_for(config.model, config.mac, config.link, config.pathloss);
    } catch (const NotImplementedError&) {
        out.analytic.reset();
    }
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        Scenario scenario(config.model, schemes[i]);
        EstimatorOptions opts = config.estimator;
        opts.seed = derive_seed(config.estimator.seed, i);
        out.points.push_back(estimate_success(scenario, config.link, config.pathloss, opts));
        const auto exact = exact_success(config.model, schemes[i], config.link, config.pathloss);
        out.exact.push_back(exact.value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    return out;
}

}  // namespace outagekit
