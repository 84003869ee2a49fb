#include "outagekit/estimator.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "outagekit/error.hpp"
#include "parallel.hpp"

namespace outagekit {

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Auto: return "auto";
        case EstimatorKind::Conditional: return "conditional";
        case EstimatorKind::Raw: return "raw";
        case EstimatorKind::Marginal: return "marginal";
    }
    return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view text) {
    if (text == "auto") {
        return EstimatorKind::Auto;
    }
    if (text == "conditional") {
        return EstimatorKind::Conditional;
    }
    if (text == "raw") {
        return EstimatorKind::Raw;
    }
    if (text == "marginal") {
        return EstimatorKind::Marginal;
    }
    throw ParameterError("unknown estimator '" + std::string(text) + "'");
}

double far_field_integral(int d, const DeltaKernel& kernel, double side, const QuadOptions& opts) {
    auto f = [&](double r) { return kernel.of_distance(r); };
    return outside_cube_integral(d, f, 0.5 * side, opts);
}

namespace {

constexpr int kMaxRedraws = 64;

Point random_direction(Philox4x32& rng, int d, double length) {
    if (length == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    if (d == 1) {
        return {rng.uniform() < 0.5 ? -length : length, 0.0, 0.0};
    }
    if (d == 2) {
        const double phi = 2.0 * M_PI * rng.uniform();
        return {length * std::cos(phi), length * std::sin(phi), 0.0};
    }
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * M_PI * rng.uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {length * rho * std::cos(phi), length * rho * std::sin(phi), length * z};
}

struct Evaluator {
    DeltaKernel kernel;
    bool singular;
    double noise_term;  // theta_eff W / P
    double base_factor; // noise factor times far-field factor

    // Returns false when a point coincides with the receiver under singular loss.
    bool conditional(const PalmSample& s, const Point& y, double& out) const {
        const double p = s.point_keep;
        auto prod = [&](std::size_t a, std::size_t b, double& v) {
            for (std::size_t i = a; i < b; ++i) {
                const auto& x = s.points[i];
                const double dx = x[0] - y[0], dy = x[1] - y[1], dz = x[2] - y[2];
                const double r2 = dx * dx + dy * dy + dz * dz;
                if (singular && r2 == 0.0) {
                    return false;
                }
                v *= 1.0 - p * kernel(r2);
            }
            return true;
        };
        double v = base_factor;
        if (s.group_start.empty()) {
            if (!prod(0, s.points.size(), v)) {
                return false;
            }
            out = v;
            return true;
        }
        if (!prod(0, s.group_start[0], v)) {
            return false;
        }
        const double q = s.group_keep;
        for (std::size_t g = 0; g + 1 < s.group_start.size(); ++g) {
            double inner = 1.0;
            if (!prod(s.group_start[g], s.group_start[g + 1], inner)) {
                return false;
            }
            v *= 1.0 - q + q * inner;
        }
        out = v;
        return true;
    }

    bool raw(const PalmSample& s, const Point& y, Philox4x32& rng, double& out) const {
        const PathLoss& pl = kernel.pathloss();
        double interference = 0.0;
        for (const auto& x : s.points) {
            const double dx = x[0] - y[0], dy = x[1] - y[1], dz = x[2] - y[2];
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (singular && r2 == 0.0) {
                return false;
            }
            interference += exponential(rng) * pl.gain_sq(r2);
        }
        const double signal = exponential(rng);
        out = signal >= kernel.theta() * interference + noise_term ? base_factor : 0.0;
        return true;
    }
};

struct Summary {
    double mean = 0.0;
    double std_err = 0.0;
};

Summary summarize(const std::vector<double>& v) {
    detail::CompensatedSum s;
    for (double x : v) {
        s.add(x);
    }
    const double n = static_cast<double>(v.size());
    const double mean = s.value() / n;
    detail::CompensatedSum ss;
    for (double x : v) {
        ss.add((x - mean) * (x - mean));
    }
    Summary out;
    out.mean = mean;
    out.std_err = v.size() > 1 ? std::sqrt(ss.value() / (n - 1.0) / n) : 0.0;
    return out;
}

EstimatorKind resolve_kind(EstimatorKind kind, bool marginal_ok) {
    if (kind == EstimatorKind::Auto) {
        return marginal_ok ? EstimatorKind::Marginal : EstimatorKind::Conditional;
    }
    if (kind == EstimatorKind::Marginal && !marginal_ok) {
        throw ParameterError("marginal estimator requires an ALOHA-type scheme with independent coins");
    }
    return kind;
}

struct Prepared {
    EstimatorKind kind;
    double side;
    double far;
    Evaluator eval;
    double link_distance;
    bool swapped;
};

Prepared prepare(const Scenario& scenario, const LinkSpec& link, const PathLoss& pathloss,
                 const EstimatorOptions& options) {
    link.validate(pathloss);
    pathloss.check_dimension(scenario.dimension());
    if (options.replications < 1) {
        throw ParameterError("at least one replication is required");
    }
    const double r = link.resolved_distance(pathloss);
    Prepared p{resolve_kind(options.kind, scenario.supports_marginal()),
               options.window_side > 0.0 ? scenario.compatible_side(options.window_side) : scenario.window_side(r),
               1.0,
               Evaluator{DeltaKernel(pathloss, link.effective_theta(pathloss)),
                         pathloss.kind() == PathLossKind::Singular, 0.0, 1.0},
               r,
               link.orientation == Orientation::TransmitterTypical};
    if (link.noise) {
        p.eval.noise_term = link.effective_theta(pathloss) * link.noise->power / link.noise->tx_power;
    }
    if (options.far_field) {
        const double t = far_field_integral(scenario.dimension(), p.eval.kernel, p.side, options.quad);
        p.far = std::exp(-scenario.transmitter_intensity() * t);
    }
    // The raw estimator draws the noise explicitly.
    p.eval.base_factor = p.far * (p.kind == EstimatorKind::Raw ? 1.0 : link.noise_factor(pathloss));
    return p;
}

}  // namespace

std::vector<double> replicate_values(const Scenario& scenario, const LinkSpec& link, const PathLoss& pathloss,
                                     const EstimatorOptions& options) {
    const Prepared prep = prepare(scenario, link, pathloss, options);
    std::vector<double> values(options.replications);
    const bool marginal = prep.kind == EstimatorKind::Marginal;
    std::atomic<std::size_t> rejected{0};
    detail::parallel_for(options.replications, options.threads, [&](std::size_t rep) {
        thread_local PalmSample sample;
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            Philox4x32 rng(options.seed, static_cast<std::uint64_t>(rep) | (static_cast<std::uint64_t>(attempt) << 48));
            scenario.sample(rng, prep.side, marginal, sample);
            const Point y = prep.swapped ? random_direction(rng, scenario.dimension(), prep.link_distance)
                                         : Point{0.0, 0.0, 0.0};
            double v = 0.0;
            const bool ok = prep.kind == EstimatorKind::Raw ? prep.eval.raw(sample, y, rng, v)
                                                            : prep.eval.conditional(sample, y, v);
            if (ok) {
                values[rep] = v;
                return;
            }
            rejected.fetch_add(1);
        }
        throw EstimationError("replication kept producing coincident points");
    });
    if (rejected.load() > 0) {
        std::ostringstream os;
        os << rejected.load() << " replication(s) redrawn after a coincident point";
        warn(os.str());
    }
    return values;
}

OutageEstimate estimate_success(const Scenario& scenario, const LinkSpec& link, const PathLoss& pathloss,
                                const EstimatorOptions& options) {
    OutageEstimate est;
    est.eta = scenario.eta();
    if (est.eta == 0.0) {
        // Nobody else transmits.
        link.validate(pathloss);
        est.p_success = link.noise_factor(pathloss);
        est.n_reps = options.replications;
        est.estimator = resolve_kind(options.kind, scenario.supports_marginal());
        return est;
    }
    const Prepared prep = prepare(scenario, link, pathloss, options);
    est.estimator = prep.kind;
    est.window_side = prep.side;
    est.far_field_factor = prep.far;
    const bool marginal = prep.kind == EstimatorKind::Marginal;
    if (prep.kind != EstimatorKind::Raw && scenario.deterministic(marginal) && !prep.swapped) {
        const std::size_t cases = scenario.deterministic_cases();
        detail::CompensatedSum total;
        PalmSample sample;
        for (std::size_t k = 0; k < cases; ++k) {
            scenario.sample_case(k, prep.side, sample);
            double v = 0.0;
            if (!prep.eval.conditional(sample, Point{0.0, 0.0, 0.0}, v)) {
                throw EstimationError("lattice configuration places a transmitter on the receiver");
            }
            total.add(v);
        }
        est.p_success = total.value() / static_cast<double>(cases);
        est.std_err = 0.0;
        est.n_reps = cases;
        return est;
    }
    const auto values = replicate_values(scenario, link, pathloss, options);
    const Summary s = summarize(values);
    est.p_success = s.mean;
    est.std_err = s.std_err;
    est.n_reps = values.size();
    return est;
}

OutageEstimate estimate_success(const TransmitterGenerator& generator, const LinkSpec& link,
                                const PathLoss& pathloss, const EstimatorOptions& options) {
    link.validate(pathloss);
    if (options.replications < 1) {
        throw ParameterError("at least one replication is required");
    }
    const EstimatorKind kind = resolve_kind(options.kind, false);
    const DeltaKernel kernel(pathloss, link.effective_theta(pathloss));
    const bool singular = pathloss.kind() == PathLossKind::Singular;
    const double noise_term =
        link.noise ? link.effective_theta(pathloss) * link.noise->power / link.noise->tx_power : 0.0;
    const double r = link.resolved_distance(pathloss);

    std::vector<double> weight(options.replications, 0.0), value(options.replications, 0.0);
    std::vector<double> window_sides(options.replications, 0.0), etas(options.replications, 0.0);
    std::vector<double> intensities(options.replications, 0.0);
    std::vector<int> dims(options.replications, 0);
    detail::parallel_for(options.replications, options.threads, [&](std::size_t rep) {
        const TransmitterSet ts = generator(derive_seed(options.seed, rep));
        const PointPattern& pat = ts.pattern;
        const Window& w = pat.window;
        if (!w.toroidal()) {
            throw ParameterError("whole-window estimation needs a toroidal window");
        }
        etas[rep] = ts.eta;
        window_sides[rep] = w.side[0];
        intensities[rep] = pat.intensity;
        dims[rep] = w.dimension;
        pathloss.check_dimension(w.dimension);
        const std::size_t n = pat.size();
        if (n == 0) {
            return;
        }
        Philox4x32 rng(options.seed ^ 0x5bd1e995ull, rep);
        const auto typical = std::min<std::size_t>(n - 1, static_cast<std::size_t>(rng.uniform() * n));
        const Point y = w.wrap(
            [&] {
                Point o = pat.points[typical];
                if (link.orientation == Orientation::TransmitterTypical) {
                    const Point u = random_direction(rng, w.dimension, r);
                    for (int k = 0; k < 3; ++k) {
                        o[k] += u[k];
                    }
                }
                return o;
            }());
        double v = kind == EstimatorKind::Raw ? 0.0 : 1.0;
        double interference = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == typical) {
                continue;
            }
            const double r2 = w.distance2(y, pat.points[j]);
            if (singular && r2 == 0.0) {
                throw EstimationError("transmitter coincides with the receiver");
            }
            if (kind == EstimatorKind::Raw) {
                interference += exponential(rng) * pathloss.gain_sq(r2);
            } else {
                v *= 1.0 - kernel(r2);
            }
        }
        if (kind == EstimatorKind::Raw) {
            v = exponential(rng) >= kernel.theta() * interference + noise_term ? 1.0 : 0.0;
        } else {
            v *= link.noise_factor(pathloss);
        }
        weight[rep] = static_cast<double>(n);
        value[rep] = v;
    });
    // Ratio estimator sum(n v) / sum(n) with a delta-method standard error.
    detail::CompensatedSum sw, swv;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        sw.add(weight[i]);
        swv.add(weight[i] * value[i]);
    }
    if (!(sw.value() > 0.0)) {
        throw EstimationError("no replication produced a transmitter");
    }
    const double ratio = swv.value() / sw.value();
    const double n = static_cast<double>(weight.size());
    const double mean_w = sw.value() / n;
    detail::CompensatedSum dev;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        const double e = weight[i] * (value[i] - ratio);
        dev.add(e * e);
    }
    OutageEstimate est;
    est.eta = etas[0];
    est.estimator = kind;
    est.n_reps = weight.size();
    est.window_side = window_sides[0];
    double far = 1.0;
    if (options.far_field) {
        far = std::exp(-intensities[0] * far_field_integral(dims[0], kernel, window_sides[0], options.quad));
    }
    est.far_field_factor = far;
    est.p_success = ratio * far;
    est.std_err = n > 1 ? far * std::sqrt(dev.value() / (n - 1.0) / n) / mean_w : 0.0;
    return est;
}

}  // namespace outagekit
