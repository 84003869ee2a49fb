// Statistical and structural invariants across modules.

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "outagekit/asymptotics.hpp"
#include "outagekit/estimator.hpp"
#include "outagekit/harness.hpp"
#include "outagekit/mac.hpp"
#include "outagekit/pointprocess.hpp"
#include "outagekit/scenario.hpp"
#include "outagekit/special.hpp"

using namespace outagekit;

namespace {

const PathLoss kSingular4(PathLossKind::Singular, 4.0);

struct MeanSe {
    double mean = 0, se = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1) / n)};
}

double variance(const std::vector<double>& v) {
    const auto ms = mean_se(v);
    return ms.se * ms.se * static_cast<double>(v.size());
}

// K estimates of two pattern families agree radius by radius.
void check_same_k(const std::vector<PointPattern>& a, const std::vector<PointPattern>& b,
                  const std::vector<double>& radii) {
    const auto ka = estimate_k_function(a, radii), kb = estimate_k_function(b, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        CAPTURE(radii[i]);
        CHECK(std::abs(ka.value[i] - kb.value[i]) <= 3.5 * std::hypot(ka.std_err[i], kb.std_err[i]));
    }
}

}  // namespace

TEST_CASE("empirical intensity matches the nominal one over 500 realizations") {
    const int n = 500;
    struct Case {
        const char* name;
        NodeModel model;
        double side;
    };
    const double lp = matern_parent_intensity(0.25, 0.8);
    const Case cases[] = {
        {"ppp", PppModel{0.5, 2}, 10.0},
        {"ppp 3d", PppModel{0.5, 3}, 5.0},
        {"matern", MaternModel{lp, 0.8}, 12.0},
        {"thomas", ThomasModel{ClusterSpec{0.1, 4.0, 1.0}}, 20.0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const Window w = Window::cube(model_dimension(c.model), c.side);
        std::vector<double> dens;
        for (int k = 0; k < n; ++k) dens.push_back(generate(c.model, w, derive_seed(21, k)).size() / w.volume());
        const auto ms = mean_se(dens);
        CHECK(std::abs(ms.mean - model_intensity(c.model)) <= 3 * ms.se);
    }
    const auto lat = generate(LatticeModel{2, 1.0}, Window::cube(2, 10.0), 1);
    CHECK(lat.size() == 100);
}

TEST_CASE("every generator is deterministic in its seed") {
    const Window w = Window::cube(2, 15.0);
    for (const NodeModel& m : {NodeModel{MaternModel{1.0, 0.7}}, NodeModel{ThomasModel{ClusterSpec{0.1, 4.0, 1.0}}}}) {
        CHECK(generate(m, w, 5).points == generate(m, w, 5).points);
        CHECK(generate(m, w, 5).points != generate(m, w, 6).points);
    }
}

TEST_CASE("Thomas K exceeds pi r^2 and follows the analytic K") {
    const ClusterSpec spec{0.1, 4.0, 1.0};
    std::vector<PointPattern> pats;
    for (int k = 0; k < 60; ++k) pats.push_back(gen_thomas(spec, Window::cube(2, 30.0), derive_seed(4, k)));
    const std::vector<double> radii{0.5, 1.0, 2.0, 3.0};
    const auto est = estimate_k_function(pats, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double k = M_PI * r * r + (1 - std::exp(-r * r / (4 * spec.sigma * spec.sigma))) / spec.parent_intensity;
        CAPTURE(r);
        CHECK(est.value[i] > M_PI * r * r);
        CHECK(std::abs(est.value[i] - k) <= 3.5 * est.std_err[i]);
    }
}

TEST_CASE("achieved eta matches the requested one") {
    const int n = 500;
    const ClusterSpec spec{0.1, 4.0, 1.0};
    const Window w = Window::cube(2, 20.0);
    struct Case {
        const char* name;
        NodeModel model;
        MacScheme mac;
    };
    const Case cases[] = {
        {"aloha", PppModel{0.5, 2}, Aloha{0.3}},
        {"csma", PppModel{0.5, 2}, CsmaMatern{0.2}},
        {"cluster b=0", ThomasModel{spec}, ClusterMac{0.0, 0.3}},
        {"cluster b=0.5", ThomasModel{spec}, ClusterMac{0.5, 0.3}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        std::vector<double> frac;
        for (int k = 0; k < n; ++k) {
            const auto nodes = generate(c.model, w, derive_seed(31, k));
            const auto tx = apply_mac(nodes, c.mac, derive_seed(32, k));
            frac.push_back(tx.pattern.size() / (model_intensity(c.model) * w.volume()));
        }
        const auto ms = mean_se(frac);
        CHECK(std::abs(ms.mean - scheme_eta(c.mac)) <= 3 * ms.se);
    }
    const auto lat = generate(LatticeModel{2, 1.0}, Window::cube(2, 12.0), 1);
    CHECK(apply_mac(lat, TdmaLattice{3, 2}, 1).pattern.size() * 9 == lat.size());
}

TEST_CASE("ALOHA composes multiplicatively") {
    std::vector<PointPattern> twice, once;
    for (int k = 0; k < 200; ++k) {
        const auto p = gen_ppp(2.0, Window::cube(2, 15.0), derive_seed(41, k));
        twice.push_back(aloha(aloha(p, 0.5, derive_seed(42, k)).pattern, 0.4, derive_seed(43, k)).pattern);
        once.push_back(aloha(gen_ppp(2.0, Window::cube(2, 15.0), derive_seed(44, k)), 0.2, derive_seed(45, k)).pattern);
    }
    check_same_k(twice, once, {0.5, 1.0, 2.0});
}

TEST_CASE("cluster MAC with b = 1 matches ALOHA on the same process") {
    const ClusterSpec spec{0.1, 4.0, 1.0};
    std::vector<PointPattern> cl, al;
    for (int k = 0; k < 200; ++k) {
        cl.push_back(cluster_mac(gen_thomas(spec, Window::cube(2, 25.0), derive_seed(51, k)), 1.0, 0.3,
                                 derive_seed(52, k)).pattern);
        al.push_back(aloha(gen_thomas(spec, Window::cube(2, 25.0), derive_seed(53, k)), 0.3, derive_seed(54, k)).pattern);
    }
    check_same_k(cl, al, {0.5, 1.0, 2.0, 3.0});
}

TEST_CASE("conditional success is pointwise non-increasing in theta") {
    const Scenario sc(MaternModel{1.0, 0.7}, Aloha{0.3});
    EstimatorOptions o;
    o.replications = 2000;
    o.kind = EstimatorKind::Conditional;
    LinkSpec lo, hi;
    lo.theta = 1.0;
    hi.theta = 3.0;
    const auto a = replicate_values(sc, lo, kSingular4, o);
    const auto b = replicate_values(sc, hi, kSingular4, o);
    REQUIRE(a.size() == b.size());
    int violations = 0;
    for (std::size_t i = 0; i < a.size(); ++i) violations += b[i] > a[i];
    CHECK(violations == 0);
}

TEST_CASE("success is non-increasing in eta within the confidence band") {
    SweepConfig c;
    c.model = MaternModel{1.0, 0.7};
    c.mac = Aloha{};
    c.link.theta = 2.0;
    c.eta_grid = {0.5, 0.3, 0.2, 0.1, 0.05, 0.02};
    c.estimator.replications = 4000;
    const auto r = sweep(c);
    for (std::size_t i = 0; i + 1 < r.points.size(); ++i) {
        const auto &big = r.points[i], &small = r.points[i + 1];
        CHECK(small.p_success >= big.p_success - 3 * std::hypot(small.std_err, big.std_err));
    }
}

TEST_CASE("conditional variance does not exceed raw variance") {
    LinkSpec l;
    l.theta = 2.0;
    for (const auto& sc : {Scenario(PppModel{1.0, 2}, Aloha{0.1}), Scenario(MaternModel{1.0, 0.7}, Aloha{0.3}),
                           Scenario(PppModel{0.3, 2}, CsmaMatern{0.1})}) {
        CAPTURE(sc.describe());
        EstimatorOptions o;
        o.replications = 10000;
        o.kind = EstimatorKind::Conditional;
        const double vc = variance(replicate_values(sc, l, kSingular4, o));
        o.kind = EstimatorKind::Raw;
        const double vr = variance(replicate_values(sc, l, kSingular4, o));
        CHECK(vc <= vr);
    }
}

TEST_CASE("noise factors out exactly in conditional mode") {
    const Scenario sc(MaternModel{1.0, 0.7}, Aloha{0.3});
    EstimatorOptions o;
    o.replications = 2000;
    o.kind = EstimatorKind::Conditional;
    LinkSpec quiet, noisy;
    quiet.theta = noisy.theta = 2.0;
    noisy.noise = Noise{0.05, 2.0};
    const auto a = estimate_success(sc, quiet, kSingular4, o);
    const auto b = estimate_success(sc, noisy, kSingular4, o);
    CHECK(b.p_success == doctest::Approx(a.p_success * std::exp(-2.0 * 0.05 / 2.0)).epsilon(1e-12));
}

TEST_CASE("lattice sum of Delta against the first-order Epstein linearization") {
    // sum_{x != 0} Delta(x) = sum t|x|^-4 / (1 + t|x|^-4) lies in [t Z - t^2 Z(8), t Z].
    for (double t : {0.01, 0.1, 0.5}) {
        double s = 0;
        const int n = 600;
        for (int x = -n; x <= n; ++x)
            for (int y = -n; y <= n; ++y) {
                const double r2 = double(x) * x + double(y) * y;
                if (r2 == 0) continue;
                const double g = t / (r2 * r2);
                s += g / (1 + g);
            }
        s += t * M_PI / ((n + 0.5) * (n + 0.5));  // integral of t r^-4 beyond the square
        const double z = epstein_zeta(2, 4.0), z8 = epstein_zeta(2, 8.0);
        CAPTURE(t);
        CHECK(s <= t * z + 1e-7);
        CHECK(s >= t * z - t * t * z8 - 1e-7);
    }
}
