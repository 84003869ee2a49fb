#include "outagekit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "outagekit/error.hpp"

namespace outagekit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Point uniform_in_cube(Philox4x32& rng, double side, int d) {
    Point p{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) {
        p[k] = (rng.uniform() - 0.5) * side;
    }
    return p;
}

void add_ppp(Philox4x32& rng, double intensity, double side, int d, std::vector<Point>& out) {
    const std::uint64_t n = poisson(rng, intensity * std::pow(side, d));
    for (std::uint64_t i = 0; i < n; ++i) {
        out.push_back(uniform_in_cube(rng, side, d));
    }
}

// Palm configuration of a Matern II process seen from a retained point at the
// origin. The origin's mark has density proportional to its retention
// probability exp(-lambda_p pi h^2 m); given that mark, parents inside B(o, h)
// with smaller marks are excluded and the rest follow the usual rule.
void matern_palm(Philox4x32& rng, double parent_intensity, double h, double side, std::vector<Point>& out) {
    const double a = parent_intensity * M_PI * h * h;
    const double u = rng.uniform();
    const double mark_o = a < 1e-12 ? u : -std::log1p(u * std::expm1(-a)) / a;
    std::vector<Point> pts{Point{0.0, 0.0, 0.0}};
    std::vector<double> marks{mark_o};
    const std::uint64_t n = poisson(rng, parent_intensity * side * side);
    pts.reserve(n + 1);
    marks.reserve(n + 1);
    const double h2 = h * h;
    for (std::uint64_t i = 0; i < n; ++i) {
        const Point p = uniform_in_cube(rng, side, 2);
        const double m = rng.uniform();
        if (m < mark_o && norm2(p) < h2) {
            continue;
        }
        pts.push_back(p);
        marks.push_back(m);
    }
    const Window torus = Window::cube(2, side);
    const auto keep = matern_retain(pts, marks, h, torus);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (keep[i]) {
            out.push_back(pts[i]);
        }
    }
}

Point gaussian2(Philox4x32& rng, double sigma) {
    const double x = normal(rng);
    const double y = normal(rng);
    return {sigma * x, sigma * y, 0.0};
}

std::int64_t odd_at_least(double x) {
    auto n = static_cast<std::int64_t>(std::ceil(x - 1e-9));
    n = std::max<std::int64_t>(n, 1);
    return n % 2 == 0 ? n + 1 : n;
}

// Sites k * period for integer k in the centred odd box of n sites per axis, origin excluded.
void add_sublattice(double period, std::int64_t n, int d, std::vector<Point>& out) {
    const std::int64_t h = (n - 1) / 2;
    const std::int64_t ny = d > 1 ? h : 0;
    const std::int64_t nz = d > 2 ? h : 0;
    for (std::int64_t c = -nz; c <= nz; ++c) {
        for (std::int64_t b = -ny; b <= ny; ++b) {
            for (std::int64_t a = -h; a <= h; ++a) {
                if (a == 0 && b == 0 && c == 0) {
                    continue;
                }
                out.push_back({a * period, b * period, c * period});
            }
        }
    }
}

}  // namespace

std::string model_name(const NodeModel& model) {
    return std::visit(overloaded{
                          [](const PppModel&) { return std::string("ppp"); },
                          [](const MaternModel&) { return std::string("matern"); },
                          [](const ThomasModel&) { return std::string("thomas"); },
                          [](const LatticeModel&) { return std::string("lattice"); },
                      },
                      model);
}

int model_dimension(const NodeModel& model) {
    return std::visit(overloaded{
                          [](const PppModel& m) { return m.dimension; },
                          [](const MaternModel&) { return 2; },
                          [](const ThomasModel&) { return 2; },
                          [](const LatticeModel& m) { return m.dimension; },
                      },
                      model);
}

double model_intensity(const NodeModel& model) {
    return std::visit(overloaded{
                          [](const PppModel& m) { return m.intensity; },
                          [](const MaternModel& m) { return matern_intensity(m.parent_intensity, m.hardcore_radius); },
                          [](const ThomasModel& m) { return m.cluster.intensity(); },
                          [](const LatticeModel& m) { return std::pow(m.spacing, -m.dimension); },
                      },
                      model);
}

void validate(const NodeModel& model) {
    std::visit(overloaded{
                   [](const PppModel& m) {
                       if (!(m.intensity > 0.0) || !std::isfinite(m.intensity)) {
                           throw ParameterError("PPP intensity must be positive");
                       }
                       if (m.dimension < 1 || m.dimension > 3) {
                           throw ParameterError("dimension must be 1, 2 or 3");
                       }
                   },
                   [](const MaternModel& m) { matern_intensity(m.parent_intensity, m.hardcore_radius); },
                   [](const ThomasModel& m) { m.cluster.validate(); },
                   [](const LatticeModel& m) {
                       if (!(m.spacing > 0.0)) {
                           throw ParameterError("lattice spacing must be positive");
                       }
                       if (m.dimension < 1 || m.dimension > 3) {
                           throw ParameterError("dimension must be 1, 2 or 3");
                       }
                   },
               },
               model);
}

std::optional<ProductDensity> model_product_density(const NodeModel& model) {
    return std::visit(overloaded{
                          [](const PppModel& m) -> std::optional<ProductDensity> {
                              if (m.dimension != 2) {
                                  return std::nullopt;
                              }
                              return ProductDensity::poisson(m.intensity);
                          },
                          [](const MaternModel& m) -> std::optional<ProductDensity> {
                              return ProductDensity::matern(m.parent_intensity, m.hardcore_radius);
                          },
                          [](const ThomasModel& m) -> std::optional<ProductDensity> {
                              return ProductDensity::thomas(m.cluster);
                          },
                          [](const LatticeModel&) -> std::optional<ProductDensity> { return std::nullopt; },
                      },
                      model);
}

PointPattern generate(const NodeModel& model, const Window& window, std::uint64_t seed) {
    if (window.dimension != model_dimension(model)) {
        throw ParameterError("window dimension does not match the node model");
    }
    return std::visit(overloaded{
                          [&](const PppModel& m) { return gen_ppp(m.intensity, window, seed); },
                          [&](const MaternModel& m) {
                              return gen_matern2(m.parent_intensity, m.hardcore_radius, window, seed);
                          },
                          [&](const ThomasModel& m) { return gen_thomas(m.cluster, window, seed); },
                          [&](const LatticeModel& m) { return gen_lattice(m.dimension, m.spacing, window, seed); },
                      },
                      model);
}

Scenario::Scenario(NodeModel model, MacScheme mac) : model_(std::move(model)), mac_(std::move(mac)) {
    validate(model_);
    validate(mac_);
    const std::string combo = model_name(model_) + " + " + scheme_name(mac_);
    const bool ok = std::visit(
        overloaded{
            [](const PppModel&, const Aloha&) { return true; },
            [](const PppModel& m, const CsmaMatern&) { return m.dimension == 2; },
            [](const MaternModel&, const Aloha&) { return true; },
            [](const ThomasModel&, const Aloha&) { return true; },
            [](const ThomasModel&, const ClusterMac&) { return true; },
            [](const LatticeModel&, const Aloha&) { return true; },
            [](const LatticeModel& m, const TdmaLattice& t) { return m.dimension == t.dimension; },
            [](const LatticeModel& m, const UnreasonableTdma&) { return m.dimension == 2; },
            [](const auto&, const auto&) { return false; },
        },
        model_, mac_);
    if (!ok) {
        throw NotImplementedError("no sampler for the combination " + combo);
    }
    if (auto* c = std::get_if<CsmaMatern>(&mac_); c && c->target_eta > 0.0) {
        hardcore_radius_ = solve_hardcore_radius(model_intensity(model_), c->target_eta);
    }
}

double Scenario::transmitter_intensity() const {
    return eta() * model_intensity(model_);
}

bool Scenario::supports_marginal() const {
    return std::holds_alternative<Aloha>(mac_) || std::holds_alternative<ClusterMac>(mac_);
}

bool Scenario::deterministic(bool marginal) const {
    if (!std::holds_alternative<LatticeModel>(model_)) {
        return false;
    }
    if (std::holds_alternative<Aloha>(mac_)) {
        return marginal;
    }
    return true;
}

std::size_t Scenario::deterministic_cases() const {
    if (auto* u = std::get_if<UnreasonableTdma>(&mac_)) {
        return static_cast<std::size_t>(u->m);
    }
    return 1;
}

double Scenario::window_side(double link_distance) const {
    double scale = std::visit(overloaded{
                                  [](const PppModel& m) { return std::pow(m.intensity, -1.0 / m.dimension); },
                                  [](const MaternModel& m) {
                                      return std::max(m.hardcore_radius,
                                                      1.0 / std::sqrt(matern_intensity(m.parent_intensity,
                                                                                       m.hardcore_radius)));
                                  },
                                  [](const ThomasModel& m) {
                                      return std::max({m.cluster.sigma, 1.0 / std::sqrt(m.cluster.parent_intensity)});
                                  },
                                  [](const LatticeModel& m) { return m.spacing; },
                              },
                              model_);
    double side = 20.0 * std::max(scale, link_distance);
    if (std::holds_alternative<CsmaMatern>(mac_)) {
        side = std::max(side, 8.0 * hardcore_radius_);
    }
    return compatible_side(side);
}

double Scenario::compatible_side(double side) const {
    const auto* lat = std::get_if<LatticeModel>(&model_);
    if (!lat) {
        return side;
    }
    const double s = lat->spacing;
    if (auto* t = std::get_if<TdmaLattice>(&mac_)) {
        const double period = t->m * s;
        return static_cast<double>(std::max<std::int64_t>(odd_at_least(side / period), 21)) * period;
    }
    if (auto* u = std::get_if<UnreasonableTdma>(&mac_)) {
        const double period = static_cast<double>(u->m) * u->m * s;
        return static_cast<double>(odd_at_least(side / period)) * period;
    }
    return static_cast<double>(std::max<std::int64_t>(odd_at_least(side / s), 21)) * s;
}

void Scenario::sample(Philox4x32& rng, double side, bool marginal, PalmSample& out) const {
    out.clear();
    if (marginal && !supports_marginal()) {
        throw ParameterError("marginal estimator is only available for ALOHA-type schemes");
    }
    const int d = dimension();
    auto thin = [&](std::size_t from, double keep) {
        if (keep >= 1.0) {
            return;
        }
        std::size_t w = from;
        for (std::size_t i = from; i < out.points.size(); ++i) {
            if (rng.uniform() < keep) {
                out.points[w++] = out.points[i];
            }
        }
        out.points.resize(w);
    };
    std::visit(
        overloaded{
            [&](const PppModel& m, const Aloha& a) {
                if (marginal) {
                    add_ppp(rng, m.intensity, side, d, out.points);
                    out.point_keep = a.p;
                } else {
                    add_ppp(rng, a.p * m.intensity, side, d, out.points);
                }
            },
            [&](const PppModel& m, const CsmaMatern& c) {
                if (c.target_eta > 0.0) {
                    matern_palm(rng, m.intensity, hardcore_radius_, side, out.points);
                }
            },
            [&](const MaternModel& m, const Aloha& a) {
                matern_palm(rng, m.parent_intensity, m.hardcore_radius, side, out.points);
                if (marginal) {
                    out.point_keep = a.p;
                } else {
                    thin(0, a.p);
                }
            },
            [&](const ThomasModel& m, const auto& mac) {
                using Mac = std::decay_t<decltype(mac)>;
                const Window torus = Window::cube(2, side);
                const ClusterSpec& cs = m.cluster;
                double q = 1.0, p = 1.0;
                if constexpr (std::is_same_v<Mac, Aloha>) {
                    p = mac.p;
                } else if constexpr (std::is_same_v<Mac, ClusterMac>) {
                    q = std::pow(mac.eta, 1.0 - mac.b);
                    p = std::pow(mac.eta, mac.b);
                } else {
                    throw NotImplementedError("unsupported cluster scheme");
                }
                const double daughter_mean = marginal ? cs.mean_daughters : cs.mean_daughters * p;
                const double parent_rate = marginal ? cs.parent_intensity : cs.parent_intensity * q;
                // Own cluster: parent displaced by a Gaussian from the typical daughter.
                const Point parent = gaussian2(rng, cs.sigma);
                const std::uint64_t siblings = poisson(rng, daughter_mean);
                for (std::uint64_t j = 0; j < siblings; ++j) {
                    const Point z = gaussian2(rng, cs.sigma);
                    out.points.push_back(torus.wrap({z[0] - parent[0], z[1] - parent[1], 0.0}));
                }
                const bool grouped = marginal && q < 1.0;
                const std::uint64_t parents = poisson(rng, parent_rate * side * side);
                for (std::uint64_t k = 0; k < parents; ++k) {
                    const Point c = uniform_in_cube(rng, side, 2);
                    const std::uint64_t kids = poisson(rng, daughter_mean);
                    if (grouped) {
                        if (kids == 0) {
                            continue;
                        }
                        out.group_start.push_back(static_cast<std::uint32_t>(out.points.size()));
                    }
                    for (std::uint64_t j = 0; j < kids; ++j) {
                        const Point z = gaussian2(rng, cs.sigma);
                        out.points.push_back(torus.wrap({c[0] + z[0], c[1] + z[1], 0.0}));
                    }
                }
                if (grouped) {
                    out.group_start.insert(out.group_start.begin(), static_cast<std::uint32_t>(siblings));
                    out.group_start.push_back(static_cast<std::uint32_t>(out.points.size()));
                    out.group_keep = q;
                }
                if (marginal) {
                    out.point_keep = p;
                }
            },
            [&](const LatticeModel& m, const Aloha& a) {
                add_sublattice(m.spacing, static_cast<std::int64_t>(std::lround(side / m.spacing)), d, out.points);
                if (marginal) {
                    out.point_keep = a.p;
                } else {
                    thin(0, a.p);
                }
            },
            [&](const LatticeModel& m, const TdmaLattice& t) {
                const double period = t.m * m.spacing;
                add_sublattice(period, static_cast<std::int64_t>(std::lround(side / period)), d, out.points);
            },
            [&](const LatticeModel&, const UnreasonableTdma& u) {
                sample_case(static_cast<std::size_t>(rng.uniform() * u.m), side, out);
            },
            [&](const auto&, const auto&) { throw NotImplementedError("unsupported scenario"); },
        },
        model_, mac_);
}

void Scenario::sample_case(std::size_t k, double side, PalmSample& out) const {
    const auto* lat = std::get_if<LatticeModel>(&model_);
    if (const auto* u = lat ? std::get_if<UnreasonableTdma>(&mac_) : nullptr) {
        out.clear();
        // Active sites: rows y = 0 mod m, columns x mod m^2 in [0, m). The
        // typical transmitter sits at column k of its run.
        const double s = lat->spacing;
        const std::int64_t m = u->m;
        const std::int64_t cols = std::lround(side / s);
        const std::int64_t lo = -(cols / 2);
        const std::int64_t hi = lo + cols - 1;
        const auto pos = static_cast<std::int64_t>(k);
        for (std::int64_t b = lo; b <= hi; ++b) {
            if (((b % m) + m) % m != 0) {
                continue;
            }
            for (std::int64_t a = lo; a <= hi; ++a) {
                const std::int64_t col = a + pos;
                if ((((col % (m * m)) + m * m) % (m * m)) >= m || (a == 0 && b == 0)) {
                    continue;
                }
                out.points.push_back({a * s, b * s, 0.0});
            }
        }
        return;
    }
    Philox4x32 unused(0, 0);
    sample(unused, side, supports_marginal(), out);
}

std::string Scenario::describe() const {
    std::ostringstream os;
    os.precision(9);
    os << model_name(model_) << "+" << scheme_name(mac_) << " eta=" << eta();
    if (hardcore_radius_ > 0.0) {
        os << " h=" << hardcore_radius_;
    }
    return os.str();
}

}  // namespace outagekit
