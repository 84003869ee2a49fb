#include "outagekit/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cell_grid.hpp"
#include "outagekit/error.hpp"
#include "outagekit/quadrature.hpp"
#include "outagekit/rng.hpp"

namespace outagekit {

std::string to_string(ModelTag tag) {
    switch (tag) {
        case ModelTag::Ppp: return "ppp";
        case ModelTag::MaternII: return "matern";
        case ModelTag::Thomas: return "thomas";
        case ModelTag::Lattice: return "lattice";
        case ModelTag::DerivedByMac: return "mac";
    }
    return "unknown";
}

void ClusterSpec::validate() const {
    if (!(parent_intensity > 0.0) || !(mean_daughters > 0.0) || !(sigma > 0.0) ||
        !std::isfinite(parent_intensity * mean_daughters * sigma)) {
        throw ParameterError("cluster parameters mu, c and sigma must be positive and finite");
    }
}

double PointPattern::param(const std::string& key, double fallback) const {
    for (const auto& [k, v] : params) {
        if (k == key) {
            return v;
        }
    }
    return fallback;
}

namespace {

Point uniform_in_box(Philox4x32& rng, const std::array<double, 3>& side, int d) {
    Point p{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) {
        p[k] = (rng.uniform() - 0.5) * side[k];
    }
    return p;
}

void require_planar(const Window& w, const char* what) {
    if (w.dimension != 2) {
        throw ParameterError(std::string(what) + " is defined in the plane only (dimension 2)");
    }
}

bool inner_point(const Window& w, const Point& p) {
    for (int k = 0; k < w.dimension; ++k) {
        const double h = 0.5 * w.side[k] - w.guard;
        if (!(p[k] >= -h && p[k] < h)) {
            return false;
        }
    }
    return true;
}

double inner_volume(const Window& w) {
    double v = 1.0;
    for (int k = 0; k < w.dimension; ++k) {
        v *= std::max(0.0, w.side[k] - 2.0 * w.guard);
    }
    return v;
}

}  // namespace

PointPattern gen_ppp(double intensity, const Window& window, std::uint64_t seed) {
    if (!(intensity > 0.0) || !std::isfinite(intensity)) {
        throw ParameterError("PPP intensity must be positive and finite");
    }
    window.validate();
    Philox4x32 rng(seed, 0);
    PointPattern out;
    out.window = window;
    out.intensity = intensity;
    out.model = ModelTag::Ppp;
    out.seed = seed;
    out.params = {{"intensity", intensity}};
    const std::uint64_t n = poisson(rng, intensity * window.volume());
    out.points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        out.points.push_back(uniform_in_box(rng, window.side, window.dimension));
    }
    return out;
}

double matern_intensity(double parent_intensity, double h) {
    if (!(parent_intensity > 0.0) || !(h >= 0.0)) {
        throw ParameterError("Matern parameters require lambda_p > 0 and h >= 0");
    }
    if (h == 0.0) {
        return parent_intensity;
    }
    const double c = M_PI * h * h;
    return -std::expm1(-parent_intensity * c) / c;
}

double matern_parent_intensity(double target, double h) {
    if (!(target > 0.0) || !(h >= 0.0)) {
        throw ParameterError("Matern inversion requires target > 0 and h >= 0");
    }
    if (h == 0.0) {
        return target;
    }
    const double c = M_PI * h * h;
    if (!(target * c < 1.0)) {
        std::ostringstream os;
        os << "retained intensity " << target << " unreachable with h = " << h << " (supremum " << 1.0 / c
           << ")";
        throw ParameterError(os.str());
    }
    return -std::log1p(-target * c) / c;
}

double solve_hardcore_radius(double lambda, double eta) {
    if (!(lambda > 0.0)) {
        throw ParameterError("hard-core solve requires lambda > 0");
    }
    if (!(eta > 0.0) || !(eta < 1.0)) {
        throw ParameterError("Matern thinning reaches only 0 < eta < 1");
    }
    // (1 - exp(-x)) / x = eta with x = lambda pi h^2; the left side decreases from 1.
    auto f = [](double x) { return x < 1e-8 ? 1.0 - 0.5 * x : -std::expm1(-x) / x; };
    double lo = 0.0;
    double hi = 1.0 / eta;
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > eta ? lo : hi) = mid;
    }
    return std::sqrt(0.5 * (lo + hi) / (lambda * M_PI));
}

std::vector<char> matern_retain(std::span<const Point> points, std::span<const double> marks, double h,
                                const Window& window) {
    if (marks.size() != points.size()) {
        throw ParameterError("one mark per point required");
    }
    std::vector<char> keep(points.size(), 1);
    if (!(h > 0.0) || points.size() < 2) {
        return keep;
    }
    require_planar(window, "Matern thinning");
    const double h2 = h * h;
    double x0, y0, wx, wy;
    const bool periodic = window.toroidal();
    if (periodic) {
        x0 = -0.5 * window.side[0];
        y0 = -0.5 * window.side[1];
        wx = window.side[0];
        wy = window.side[1];
    } else {
        double xmin = points[0][0], xmax = xmin, ymin = points[0][1], ymax = ymin;
        for (const auto& p : points) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
        x0 = xmin;
        y0 = ymin;
        wx = std::max(xmax - xmin, h) * (1.0 + 1e-12) + 1e-300;
        wy = std::max(ymax - ymin, h) * (1.0 + 1e-12) + 1e-300;
    }
    // Cells hold about one point on average but are never narrower than h.
    const double density_cell = std::sqrt(wx * wy / static_cast<double>(points.size()));
    detail::CellGrid grid(points, x0, y0, wx, wy, std::max(h, density_cell), periodic);
    auto before = [&](std::uint32_t a, std::uint32_t b) {
        return marks[a] < marks[b] || (marks[a] == marks[b] && a < b);
    };
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        auto items = grid.cell(c);
        std::sort(items.begin(), items.end(), before);
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        bool dominated = false;
        grid.for_each_adjacent(grid.ix(p[0]), grid.iy(p[1]), [&](std::size_t c) {
            if (dominated) {
                return;
            }
            for (std::uint32_t j : grid.cell(c)) {
                if (!before(j, static_cast<std::uint32_t>(i))) {
                    break;
                }
                if (window.distance2(p, points[j]) < h2) {
                    dominated = true;
                    return;
                }
            }
        });
        keep[i] = dominated ? 0 : 1;
    }
    return keep;
}

PointPattern gen_matern2(double parent_intensity, double h, const Window& window, std::uint64_t seed) {
    const double lambda_t = matern_intensity(parent_intensity, h);
    window.validate();
    require_planar(window, "Matern II");
    if (lambda_t * window.volume() < 10.0) {
        warn("Matern pattern expects fewer than 10 retained points in the window");
    }
    Philox4x32 rng(seed, 0);
    Window sim = window;
    if (!window.toroidal()) {
        sim.side[0] += 2.0 * h;
        sim.side[1] += 2.0 * h;
    }
    const std::uint64_t n = poisson(rng, parent_intensity * sim.volume());
    std::vector<Point> parents(n);
    std::vector<double> marks(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        parents[i] = uniform_in_box(rng, sim.side, 2);
        marks[i] = rng.uniform();
    }
    const auto keep = matern_retain(parents, marks, h, sim);
    PointPattern out;
    out.window = window;
    out.intensity = lambda_t;
    out.model = ModelTag::MaternII;
    out.seed = seed;
    out.params = {{"parent_intensity", parent_intensity}, {"hardcore_radius", h}};
    for (std::uint64_t i = 0; i < n; ++i) {
        if (keep[i] && window.contains(parents[i])) {
            out.points.push_back(parents[i]);
        }
    }
    return out;
}

PointPattern gen_thomas(const ClusterSpec& spec, const Window& window, std::uint64_t seed) {
    spec.validate();
    window.validate();
    require_planar(window, "Thomas cluster process");
    Philox4x32 rng(seed, 0);
    Window sim = window;
    if (!window.toroidal()) {
        sim.side[0] += 10.0 * spec.sigma;
        sim.side[1] += 10.0 * spec.sigma;
    }
    PointPattern out;
    out.window = window;
    out.intensity = spec.intensity();
    out.model = ModelTag::Thomas;
    out.seed = seed;
    out.params = {{"parent_intensity", spec.parent_intensity},
                  {"mean_daughters", spec.mean_daughters},
                  {"sigma", spec.sigma}};
    const std::uint64_t parents = poisson(rng, spec.parent_intensity * sim.volume());
    for (std::uint64_t k = 0; k < parents; ++k) {
        const Point centre = uniform_in_box(rng, sim.side, 2);
        const std::uint64_t kids = poisson(rng, spec.mean_daughters);
        for (std::uint64_t j = 0; j < kids; ++j) {
            Point p{centre[0] + spec.sigma * normal(rng), centre[1] + spec.sigma * normal(rng), 0.0};
            if (window.toroidal()) {
                p = window.wrap(p);
            } else if (!window.contains(p)) {
                continue;
            }
            out.points.push_back(p);
            out.parent.push_back(static_cast<std::int64_t>(k));
        }
    }
    return out;
}

PointPattern gen_lattice(int d, double spacing, const Window& window, std::uint64_t seed, bool rotate) {
    window.validate();
    if (window.dimension != d) {
        throw ParameterError("lattice dimension does not match the window");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw ParameterError("lattice spacing must be positive");
    }
    if (rotate && d != 2) {
        throw ParameterError("lattice rotation is only defined for d = 2");
    }
    if (rotate && window.toroidal()) {
        throw ParameterError("a rotated lattice does not tile a torus; use a guard-band window");
    }
    Philox4x32 rng(seed, 0);
    PointPattern out;
    out.window = window;
    out.intensity = std::pow(spacing, -d);
    out.model = ModelTag::Lattice;
    out.seed = seed;
    out.params = {{"spacing", spacing}, {"dimension", static_cast<double>(d)}};
    out.lattice_spacing = spacing;
    std::array<double, 3> offset{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) {
        offset[k] = rng.uniform();
    }
    if (!rotate) {
        std::array<std::int32_t, 3> n{1, 1, 1};
        for (int k = 0; k < d; ++k) {
            const double cells = window.side[k] / spacing;
            const double rounded = std::round(cells);
            if (rounded < 1.0 || std::abs(cells - rounded) > 1e-9 * rounded) {
                throw ParameterError("window side must be an integer multiple of the lattice spacing");
            }
            n[k] = static_cast<std::int32_t>(rounded);
        }
        out.lattice_extent = {n[0], d > 1 ? n[1] : 0, d > 2 ? n[2] : 0};
        const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
        out.points.reserve(total);
        out.lattice_index.reserve(total);
        for (std::int32_t c = 0; c < n[2]; ++c) {
            for (std::int32_t b = 0; b < n[1]; ++b) {
                for (std::int32_t a = 0; a < n[0]; ++a) {
                    const std::array<std::int32_t, 3> idx{a, b, c};
                    Point p{0.0, 0.0, 0.0};
                    for (int k = 0; k < d; ++k) {
                        p[k] = (idx[k] + offset[k]) * spacing - 0.5 * window.side[k];
                    }
                    out.points.push_back(p);
                    out.lattice_index.push_back(idx);
                }
            }
        }
        return out;
    }
    const double phi = 0.5 * M_PI * rng.uniform();
    const double cs = std::cos(phi), sn = std::sin(phi);
    const double reach = 0.5 * std::hypot(window.side[0], window.side[1]) / spacing + 2.0;
    const std::int32_t m = static_cast<std::int32_t>(std::ceil(reach));
    for (std::int32_t b = -m; b <= m; ++b) {
        for (std::int32_t a = -m; a <= m; ++a) {
            const double u = (a + offset[0]) * spacing;
            const double v = (b + offset[1]) * spacing;
            const Point p{cs * u - sn * v, sn * u + cs * v, 0.0};
            if (window.contains(p)) {
                out.points.push_back(p);
                out.lattice_index.push_back({a, b, 0});
            }
        }
    }
    out.params.emplace_back("rotation", phi);
    return out;
}

ProductDensity ProductDensity::poisson(double intensity) {
    if (!(intensity > 0.0)) {
        throw ParameterError("intensity must be positive");
    }
    return ProductDensity(Poisson{intensity});
}

ProductDensity ProductDensity::matern(double parent_intensity, double h) {
    matern_intensity(parent_intensity, h);
    return ProductDensity(Matern{parent_intensity, h});
}

ProductDensity ProductDensity::thomas(const ClusterSpec& spec) {
    spec.validate();
    return ProductDensity(Cluster{spec});
}

double ProductDensity::intensity() const {
    if (auto* p = std::get_if<Poisson>(&params_)) {
        return p->intensity;
    }
    if (auto* m = std::get_if<Matern>(&params_)) {
        return matern_intensity(m->parent_intensity, m->hardcore_radius);
    }
    return std::get<Cluster>(params_).spec.intensity();
}

ModelTag ProductDensity::model() const {
    if (std::holds_alternative<Poisson>(params_)) {
        return ModelTag::Ppp;
    }
    if (std::holds_alternative<Matern>(params_)) {
        return ModelTag::MaternII;
    }
    return ModelTag::Thomas;
}

double ProductDensity::operator()(double r) const {
    if (!(r >= 0.0)) {
        throw ParameterError("rho2 requires r >= 0");
    }
    if (auto* p = std::get_if<Poisson>(&params_)) {
        return p->intensity * p->intensity;
    }
    if (auto* m = std::get_if<Matern>(&params_)) {
        const double h = m->hardcore_radius;
        const double lp = m->parent_intensity;
        if (h == 0.0) {
            return lp * lp;
        }
        if (r < h) {
            return 0.0;
        }
        if (r > 2.0 * h) {
            const double l = matern_intensity(lp, h);
            return l * l;
        }
        const double c = M_PI * h * h;
        const double g = 2.0 * c - 2.0 * h * h * std::acos(r / (2.0 * h)) +
                         0.5 * r * std::sqrt(std::max(0.0, 4.0 * h * h - r * r));
        const double num = 2.0 * g * -std::expm1(-lp * c) - 2.0 * c * -std::expm1(-lp * g);
        return num / (c * g * (g - c));
    }
    const auto& s = std::get<Cluster>(params_).spec;
    const double l = s.intensity();
    const double s2 = s.sigma * s.sigma;
    return l * l * (1.0 + std::exp(-r * r / (4.0 * s2)) / (4.0 * M_PI * s2 * s.parent_intensity));
}

std::vector<double> ProductDensity::breakpoints() const {
    if (auto* m = std::get_if<Matern>(&params_)) {
        if (m->hardcore_radius > 0.0) {
            return {m->hardcore_radius, 2.0 * m->hardcore_radius};
        }
    }
    if (auto* c = std::get_if<Cluster>(&params_)) {
        return {2.0 * c->spec.sigma, 8.0 * c->spec.sigma};
    }
    return {};
}

double ProductDensity::annulus_average(double r0, double r1) const {
    if (!(r1 > r0) || !(r0 >= 0.0)) {
        throw ParameterError("annulus requires 0 <= r0 < r1");
    }
    std::vector<double> nodes{r0};
    for (double b : breakpoints()) {
        if (b > r0 && b < r1) {
            nodes.push_back(b);
        }
    }
    nodes.push_back(r1);
    auto f = [this](double r) { return (*this)(r) * 2.0 * M_PI * r; };
    return integrate_pieces(f, nodes) / (M_PI * (r1 * r1 - r0 * r0));
}

double rho2(const ProductDensity& model, double r) {
    return model(r);
}

void for_each_close_pair(const PointPattern& pattern, double rmax,
                         const std::function<void(std::size_t, std::size_t, const Point&)>& visit) {
    const Window& w = pattern.window;
    const auto& pts = pattern.points;
    const double r2 = rmax * rmax;
    if (w.toroidal()) {
        for (int k = 0; k < w.dimension; ++k) {
            if (rmax > 0.5 * w.side[k]) {
                throw ParameterError("pair radius exceeds half the torus side");
            }
        }
    }
    if (w.dimension != 2) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const Point d = w.displacement(pts[i], pts[j]);
                if (norm2(d) < r2) {
                    visit(i, j, d);
                }
            }
        }
        return;
    }
    const double x0 = -0.5 * w.side[0], y0 = -0.5 * w.side[1];
    detail::CellGrid grid(pts, x0, y0, w.side[0], w.side[1], rmax, w.toroidal());
    for (int cy = 0; cy < grid.ny(); ++cy) {
        for (int cx = 0; cx < grid.nx(); ++cx) {
            const auto here = grid.cell(grid.index(cx, cy));
            grid.for_each_adjacent(cx, cy, [&](std::size_t c) {
                for (std::uint32_t i : here) {
                    for (std::uint32_t j : grid.cell(c)) {
                        if (j <= i) {
                            continue;
                        }
                        const Point d = w.displacement(pts[i], pts[j]);
                        if (norm2(d) < r2) {
                            visit(i, j, d);
                        }
                    }
                }
            });
        }
    }
}

namespace {

struct PatternMoments {
    std::vector<double> sum, sum2;
    std::size_t n = 0;
    void add(const std::vector<double>& v) {
        if (sum.empty()) {
            sum.assign(v.size(), 0.0);
            sum2.assign(v.size(), 0.0);
        }
        for (std::size_t k = 0; k < v.size(); ++k) {
            sum[k] += v[k];
            sum2[k] += v[k] * v[k];
        }
        ++n;
    }
    void finish(SecondOrderEstimate& out) const {
        out.patterns = n;
        out.value.resize(sum.size());
        out.std_err.resize(sum.size());
        for (std::size_t k = 0; k < sum.size(); ++k) {
            const double m = sum[k] / n;
            out.value[k] = m;
            const double var = n > 1 ? std::max(0.0, (sum2[k] - n * m * m) / (n - 1)) : 0.0;
            out.std_err[k] = std::sqrt(var / n);
        }
    }
};

void check_reach(const Window& w, double rmax) {
    if (!w.toroidal() && rmax > w.guard) {
        throw ParameterError("guard-band width must cover the largest radius");
    }
}

}  // namespace

SecondOrderEstimate estimate_k_function(std::span<const PointPattern> patterns, std::span<const double> radii) {
    if (patterns.empty() || radii.empty()) {
        throw EstimationError("K-function estimation needs at least one pattern and one radius");
    }
    std::vector<double> sorted(radii.begin(), radii.end());
    if (!std::is_sorted(sorted.begin(), sorted.end()) || sorted.front() < 0.0) {
        throw ParameterError("radii must be non-negative and increasing");
    }
    const double rmax = sorted.back();
    PatternMoments acc;
    for (const auto& pat : patterns) {
        const Window& w = pat.window;
        check_reach(w, rmax);
        const std::size_t n = pat.size();
        if (n < 2) {
            continue;
        }
        std::vector<double> counts(sorted.size(), 0.0);
        std::vector<char> inner(n, 1);
        std::size_t n_inner = n;
        if (!w.toroidal()) {
            n_inner = 0;
            for (std::size_t i = 0; i < n; ++i) {
                inner[i] = inner_point(w, pat.points[i]);
                n_inner += inner[i];
            }
            if (n_inner == 0) {
                continue;
            }
        }
        // Radii are inclusive: count pairs at distance <= r.
        const double reach = std::nextafter(rmax, INFINITY);
        for_each_close_pair(pat, reach, [&](std::size_t i, std::size_t j, const Point& d) {
            const double r = std::sqrt(norm2(d));
            const double weight = static_cast<double>(inner[i]) + static_cast<double>(inner[j]);
            const auto first = std::lower_bound(sorted.begin(), sorted.end(), r);
            if (first != sorted.end()) {
                counts[first - sorted.begin()] += weight;
            }
        });
        std::partial_sum(counts.begin(), counts.end(), counts.begin());
        const double scale = w.volume() / (static_cast<double>(n_inner) * static_cast<double>(n - 1));
        for (auto& c : counts) {
            c *= scale;
        }
        acc.add(counts);
    }
    if (acc.n == 0) {
        throw EstimationError("all patterns have fewer than two usable points");
    }
    SecondOrderEstimate out;
    out.radii = sorted;
    acc.finish(out);
    return out;
}

SecondOrderEstimate estimate_rho2(std::span<const PointPattern> patterns, std::span<const double> edges) {
    if (patterns.empty() || edges.size() < 2) {
        throw EstimationError("pair-correlation estimation needs a pattern and at least one bin");
    }
    if (!std::is_sorted(edges.begin(), edges.end()) || edges.front() < 0.0 ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw ParameterError("bin edges must be strictly increasing and non-negative");
    }
    const double rmax = edges.back();
    const std::size_t bins = edges.size() - 1;
    PatternMoments acc;
    int dim = 0;
    for (const auto& pat : patterns) {
        const Window& w = pat.window;
        check_reach(w, rmax);
        dim = w.dimension;
        std::vector<double> counts(bins, 0.0);
        std::vector<char> inner(pat.size(), 1);
        double area = w.volume();
        if (!w.toroidal()) {
            for (std::size_t i = 0; i < pat.size(); ++i) {
                inner[i] = inner_point(w, pat.points[i]);
            }
            area = inner_volume(w);
        }
        for_each_close_pair(pat, rmax, [&](std::size_t i, std::size_t j, const Point& d) {
            const double r = std::sqrt(norm2(d));
            const auto it = std::upper_bound(edges.begin(), edges.end(), r);
            if (it == edges.begin() || it == edges.end()) {
                return;
            }
            counts[(it - edges.begin()) - 1] += static_cast<double>(inner[i]) + static_cast<double>(inner[j]);
        });
        for (std::size_t b = 0; b < bins; ++b) {
            const double shell =
                unit_ball_volume(dim) * (std::pow(edges[b + 1], dim) - std::pow(edges[b], dim));
            counts[b] /= area * shell;
        }
        acc.add(counts);
    }
    SecondOrderEstimate out;
    for (std::size_t b = 0; b < bins; ++b) {
        out.lower.push_back(edges[b]);
        out.upper.push_back(edges[b + 1]);
        out.radii.push_back(0.5 * (edges[b] + edges[b + 1]));
    }
    acc.finish(out);
    return out;
}

}  // namespace outagekit
