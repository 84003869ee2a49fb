#include "outagekit/mac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "outagekit/error.hpp"
#include "outagekit/rng.hpp"

namespace outagekit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int lattice_m_for(double eta, int d) {
    if (!(eta > 0.0) || !(eta <= 1.0)) {
        throw ParameterError("lattice schedules need 0 < eta <= 1");
    }
    return std::max(1, static_cast<int>(std::lround(std::pow(eta, -1.0 / d))));
}

PointPattern derived_pattern(const PointPattern& in, double intensity, std::uint64_t seed) {
    PointPattern out;
    out.window = in.window;
    out.intensity = intensity;
    out.model = ModelTag::DerivedByMac;
    out.seed = seed;
    out.params = in.params;
    out.params.emplace_back("base_model", static_cast<double>(static_cast<int>(in.model)));
    out.lattice_extent = in.lattice_extent;
    out.lattice_spacing = in.lattice_spacing;
    return out;
}

void keep_point(const PointPattern& in, std::size_t i, TransmitterSet& ts) {
    ts.pattern.points.push_back(in.points[i]);
    if (in.has_parentage()) {
        ts.pattern.parent.push_back(in.parent[i]);
    }
    if (in.has_lattice_index()) {
        ts.pattern.lattice_index.push_back(in.lattice_index[i]);
    }
    ts.source_index.push_back(i);
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

void require_lattice(const PointPattern& pattern, const char* what) {
    if (!pattern.has_lattice_index()) {
        throw ParameterError(std::string(what) + " requires a lattice pattern with index metadata");
    }
}

void require_divisible(const PointPattern& pattern, int axis, int period, const char* what) {
    if (pattern.window.toroidal() && pattern.lattice_extent[axis] % period != 0) {
        std::ostringstream os;
        os << what << ": lattice extent " << pattern.lattice_extent[axis] << " along axis " << axis
           << " is not a multiple of " << period;
        throw ParameterError(os.str());
    }
}

}  // namespace

std::string scheme_name(const MacScheme& scheme) {
    return std::visit(overloaded{
                          [](const Aloha&) { return std::string("aloha"); },
                          [](const CsmaMatern&) { return std::string("csma"); },
                          [](const TdmaLattice&) { return std::string("tdma"); },
                          [](const ClusterMac&) { return std::string("cluster"); },
                          [](const UnreasonableTdma&) { return std::string("unreasonable_tdma"); },
                      },
                      scheme);
}

void validate(const MacScheme& scheme) {
    std::visit(overloaded{
                   [](const Aloha& a) {
                       if (!(a.p >= 0.0 && a.p <= 1.0)) {
                           throw ParameterError("ALOHA probability must lie in [0, 1]");
                       }
                   },
                   [](const CsmaMatern& c) {
                       if (!(c.target_eta >= 0.0 && c.target_eta < 1.0)) {
                           throw ParameterError("CSMA target eta must lie in [0, 1)");
                       }
                   },
                   [](const TdmaLattice& t) {
                       if (t.m < 1) {
                           throw ParameterError("TDMA phases per axis must be at least 1");
                       }
                       if (t.dimension < 1 || t.dimension > 3) {
                           throw ParameterError("TDMA dimension must be 1, 2 or 3");
                       }
                   },
                   [](const ClusterMac& c) {
                       if (!(c.b >= 0.0 && c.b <= 1.0)) {
                           throw ParameterError("cluster MAC exponent b must lie in [0, 1]");
                       }
                       if (!(c.eta >= 0.0 && c.eta <= 1.0)) {
                           throw ParameterError("cluster MAC eta must lie in [0, 1]");
                       }
                   },
                   [](const UnreasonableTdma& u) {
                       if (u.m < 1) {
                           throw ParameterError("unreasonable TDMA needs m >= 1");
                       }
                   },
               },
               scheme);
}

double scheme_eta(const MacScheme& scheme) {
    return std::visit(overloaded{
                          [](const Aloha& a) { return a.p; },
                          [](const CsmaMatern& c) { return c.target_eta; },
                          [](const TdmaLattice& t) { return std::pow(static_cast<double>(t.m), -t.dimension); },
                          [](const ClusterMac& c) { return c.eta; },
                          [](const UnreasonableTdma& u) { return 1.0 / (static_cast<double>(u.m) * u.m); },
                      },
                      scheme);
}

MacScheme with_eta(const MacScheme& scheme, double eta) {
    MacScheme out = std::visit(overloaded{
                                   [&](const Aloha&) -> MacScheme { return Aloha{eta}; },
                                   [&](const CsmaMatern&) -> MacScheme { return CsmaMatern{eta}; },
                                   [&](const TdmaLattice& t) -> MacScheme {
                                       return TdmaLattice{lattice_m_for(eta, t.dimension), t.dimension};
                                   },
                                   [&](const ClusterMac& c) -> MacScheme { return ClusterMac{c.b, eta}; },
                                   [&](const UnreasonableTdma&) -> MacScheme {
                                       return UnreasonableTdma{lattice_m_for(eta, 2)};
                                   },
                               },
                               scheme);
    validate(out);
    return out;
}

TransmitterSet aloha(const PointPattern& pattern, double p, std::uint64_t seed) {
    validate(Aloha{p});
    TransmitterSet ts;
    ts.scheme = Aloha{p};
    ts.eta = p;
    ts.pattern = derived_pattern(pattern, p * pattern.intensity, seed);
    ts.pattern.params.emplace_back("p", p);
    Philox4x32 rng(seed, 1);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (rng.uniform() < p) {
            keep_point(pattern, i, ts);
        }
    }
    return ts;
}

TransmitterSet csma_matern(const PointPattern& pattern, double target_eta, std::uint64_t seed) {
    if (pattern.model != ModelTag::Ppp) {
        throw ParameterError("CSMA thinning expects a PPP realization");
    }
    if (!(target_eta > 0.0) || !(target_eta < 1.0)) {
        throw ParameterError("CSMA target eta must satisfy 0 < eta < 1");
    }
    const double h = solve_hardcore_radius(pattern.intensity, target_eta);
    TransmitterSet ts;
    ts.scheme = CsmaMatern{target_eta};
    ts.eta = target_eta;
    ts.hardcore_radius = h;
    ts.pattern = derived_pattern(pattern, target_eta * pattern.intensity, seed);
    ts.pattern.params.emplace_back("hardcore_radius", h);
    Philox4x32 rng(seed, 2);
    std::vector<double> marks(pattern.size());
    for (auto& m : marks) {
        m = rng.uniform();
    }
    const auto keep = matern_retain(pattern.points, marks, h, pattern.window);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (keep[i]) {
            keep_point(pattern, i, ts);
        }
    }
    return ts;
}

TransmitterSet tdma_lattice(const PointPattern& pattern, int m, std::uint64_t seed) {
    require_lattice(pattern, "TDMA");
    const int d = pattern.window.dimension;
    validate(TdmaLattice{m, d});
    for (int k = 0; k < d; ++k) {
        require_divisible(pattern, k, m, "TDMA");
    }
    Philox4x32 rng(seed, 3);
    std::array<std::int64_t, 3> phase{0, 0, 0};
    for (int k = 0; k < d; ++k) {
        phase[k] = static_cast<std::int64_t>(rng.uniform() * m);
    }
    const double eta = std::pow(static_cast<double>(m), -d);
    TransmitterSet ts;
    ts.scheme = TdmaLattice{m, d};
    ts.eta = eta;
    ts.pattern = derived_pattern(pattern, eta * pattern.intensity, seed);
    ts.pattern.params.emplace_back("m", m);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        bool on = true;
        for (int k = 0; k < d && on; ++k) {
            on = mod(pattern.lattice_index[i][k] - phase[k], m) == 0;
        }
        if (on) {
            keep_point(pattern, i, ts);
        }
    }
    return ts;
}

TransmitterSet cluster_mac(const PointPattern& pattern, double b, double eta, std::uint64_t seed) {
    if (!pattern.has_parentage()) {
        throw UsageError("cluster MAC requires daughter-to-parent metadata");
    }
    validate(ClusterMac{b, eta});
    if (!(eta > 0.0)) {
        throw ParameterError("cluster MAC needs eta > 0");
    }
    const double q = std::pow(eta, 1.0 - b);
    const double p = std::pow(eta, b);
    TransmitterSet ts;
    ts.scheme = ClusterMac{b, eta};
    ts.eta = eta;
    ts.pattern = derived_pattern(pattern, eta * pattern.intensity, seed);
    ts.pattern.params.emplace_back("b", b);
    ts.pattern.params.emplace_back("eta", eta);
    // Cluster decisions are keyed by parent id so every daughter sees the same coin.
    const Philox4x32::key_type key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    auto cluster_on = [&](std::int64_t id) {
        const auto u = static_cast<std::uint64_t>(id);
        const auto blk = Philox4x32::block({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(u >> 32), 4u, 0u}, key);
        const std::uint64_t bits = (static_cast<std::uint64_t>(blk[0]) << 32) | blk[1];
        return static_cast<double>(bits >> 11) * 0x1.0p-53 < q;
    };
    Philox4x32 rng(seed, 5);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const bool daughter_on = rng.uniform() < p;
        if (daughter_on && cluster_on(pattern.parent[i])) {
            keep_point(pattern, i, ts);
        }
    }
    return ts;
}

TransmitterSet unreasonable_tdma(const PointPattern& pattern, int m, std::uint64_t seed) {
    require_lattice(pattern, "unreasonable TDMA");
    if (pattern.window.dimension != 2) {
        throw ParameterError("unreasonable TDMA is defined on the planar lattice");
    }
    validate(UnreasonableTdma{m});
    const std::int64_t run = m;
    const std::int64_t period = static_cast<std::int64_t>(m) * m;
    require_divisible(pattern, 0, static_cast<int>(period), "unreasonable TDMA");
    require_divisible(pattern, 1, m, "unreasonable TDMA");
    Philox4x32 rng(seed, 6);
    const auto phase_x = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(period));
    const auto phase_y = static_cast<std::int64_t>(rng.uniform() * m);
    const double eta = 1.0 / static_cast<double>(period);
    TransmitterSet ts;
    ts.scheme = UnreasonableTdma{m};
    ts.eta = eta;
    ts.pattern = derived_pattern(pattern, eta * pattern.intensity, seed);
    ts.pattern.params.emplace_back("m", m);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const auto& idx = pattern.lattice_index[i];
        if (mod(idx[1] - phase_y, m) == 0 && mod(idx[0] - phase_x, period) < run) {
            keep_point(pattern, i, ts);
        }
    }
    return ts;
}

TransmitterSet apply_mac(const PointPattern& pattern, const MacScheme& scheme, std::uint64_t seed) {
    return std::visit(overloaded{
                          [&](const Aloha& a) { return aloha(pattern, a.p, seed); },
                          [&](const CsmaMatern& c) { return csma_matern(pattern, c.target_eta, seed); },
                          [&](const TdmaLattice& t) { return tdma_lattice(pattern, t.m, seed); },
                          [&](const ClusterMac& c) { return cluster_mac(pattern, c.b, c.eta, seed); },
                          [&](const UnreasonableTdma& u) { return unreasonable_tdma(pattern, u.m, seed); },
                      },
                      scheme);
}

namespace {

// Pooled ratio sum(a)/sum(b) over independent patterns with a delta-method SE.
struct Ratio {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    std::size_t n = 0;
    void add(double a, double b) {
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
        ++n;
    }
    double value() const { return sb > 0.0 ? sa / sb : 0.0; }
    double std_err() const {
        if (n < 2 || !(sb > 0.0)) {
            return 0.0;
        }
        const double r = value();
        const double mb = sb / n;
        // variance of a - r b across patterns
        const double v = (saa - 2.0 * r * sab + r * r * sbb) / n - std::pow((sa - r * sb) / n, 2);
        return std::sqrt(std::max(0.0, v) / (n - 1)) / mb;
    }
};

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

ConditionReport check_conditions(const TransmitterFamily& family, std::span<const double> eta_grid,
                                 const ConditionOptions& options) {
    if (eta_grid.size() < 4) {
        throw ParameterError("condition check needs at least four eta values");
    }
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (!(eta_grid[i] > 0.0 && eta_grid[i] <= 1.0) || (i > 0 && !(eta_grid[i] < eta_grid[i - 1]))) {
            throw ParameterError("eta grid must be strictly decreasing within (0, 1]");
        }
    }
    if (options.patterns_per_eta < 2) {
        throw ParameterError("condition check needs at least two patterns per eta");
    }
    ConditionReport report;
    report.radius_factor = options.radius_factor;
    std::ostringstream notes;
    for (std::size_t g = 0; g < eta_grid.size(); ++g) {
        const double eta = eta_grid[g];
        const double radius = options.radius_factor / std::sqrt(eta);
        Ratio square, disk;
        double points = 0.0;
        for (std::size_t k = 0; k < options.patterns_per_eta; ++k) {
            const TransmitterSet ts =
                family(eta, derive_seed(options.seed, g * options.patterns_per_eta + k));
            const PointPattern& pat = ts.pattern;
            if (pat.window.dimension != 2 || !pat.window.toroidal()) {
                throw ParameterError("condition check expects planar toroidal patterns");
            }
            const double n = static_cast<double>(pat.size());
            points += n;
            const double norm = n * (n - 1.0) / pat.window.volume();
            double in_square = 0.0, in_disk = 0.0;
            const double reach = std::max(radius, std::sqrt(2.0) * 1.0000001);
            const double r2 = radius * radius;
            for_each_close_pair(pat, reach, [&](std::size_t, std::size_t, const Point& d) {
                // ordered pairs: d from i to j and -d from j to i
                if (d[0] >= 0.0 && d[0] <= 1.0 && d[1] >= 0.0 && d[1] <= 1.0) {
                    in_square += 1.0;
                }
                if (-d[0] >= 0.0 && -d[0] <= 1.0 && -d[1] >= 0.0 && -d[1] <= 1.0) {
                    in_square += 1.0;
                }
                if (norm2(d) <= r2) {
                    in_disk += 2.0;
                }
            });
            square.add(in_square, norm);
            disk.add(in_disk, norm);
        }
        ConditionRow row;
        row.eta = eta;
        row.k_unit_square = square.value();
        row.k_unit_square_se = square.std_err();
        row.scaled_k = eta * disk.value();
        row.scaled_k_se = eta * disk.std_err();
        row.mean_points = points / static_cast<double>(options.patterns_per_eta);
        row.flagged = row.mean_points < 50.0;
        if (row.flagged) {
            notes << "eta=" << eta << ": few points per pattern (" << row.mean_points << "); ";
        }
        report.rows.push_back(row);
    }
    // Trends over the small-eta half of the grid.
    const std::size_t first = report.rows.size() / 2;
    std::vector<double> lx, lk, ls;
    for (std::size_t i = first; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        if (r.k_unit_square > 0.0) {
            lx.push_back(-std::log(r.eta));
            lk.push_back(std::log(r.k_unit_square));
        }
    }
    report.k_growth_exponent = lx.size() >= 2 ? log_slope(lx, lk) : 0.0;
    report.c1_bounded = report.k_growth_exponent < 0.5;
    std::vector<double> sx, sy;
    bool all_positive = true;
    for (std::size_t i = first; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        if (!(r.scaled_k > 3.0 * r.scaled_k_se) || !(r.scaled_k > 0.0)) {
            all_positive = false;
        } else {
            sx.push_back(-std::log(r.eta));
            sy.push_back(std::log(r.scaled_k));
        }
    }
    const double decay = sx.size() >= 2 ? log_slope(sx, sy) : 0.0;
    report.c2_positive = all_positive && decay > -0.5;
    report.reasonable = report.c1_bounded && report.c2_positive;
    if (!report.c1_bounded) {
        notes << "K([0,1]^2) grows like eta^-" << report.k_growth_exponent << "; ";
    }
    if (!report.c2_positive) {
        notes << "eta K(R eta^-1/2) tends to zero; ";
    }
    report.notes = notes.str();
    return report;
}

}  // namespace outagekit
