#include <cmath>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "outagekit/error.hpp"
#include "outagekit/outage.hpp"

using namespace outagekit;

namespace {

// int_R2 theta / (theta + |x|^4) dx = pi^2 sqrt(theta) / 2.
double ppp_contention(double lambda, double theta) { return lambda * M_PI * M_PI * std::sqrt(theta) / 2.0; }

}  // namespace

TEST_CASE("path-loss models") {
    const PathLoss s(PathLossKind::Singular, 4.0), b(PathLossKind::BoundedSum, 4.0), m(PathLossKind::BoundedMin, 3.0);
    CHECK(s.gain(2.0) == doctest::Approx(1.0 / 16));
    CHECK(std::isinf(s.gain(0.0)));
    CHECK(b.gain(2.0) == doctest::Approx(1.0 / 17));
    CHECK(b.gain(0.0) == 1.0);
    CHECK(m.gain(0.5) == 1.0);
    CHECK(m.gain(2.0) == doctest::Approx(1.0 / 8));
    CHECK(s.gain_sq(4.0) == doctest::Approx(s.gain(2.0)));
    CHECK(s.unit_gain_distance() == 1.0);
    CHECK(b.unit_gain_distance() == 0.0);
    CHECK_THROWS_AS(PathLoss(PathLossKind::Singular, 2.0).check_dimension(2), ParameterError);
    CHECK_NOTHROW(PathLoss(PathLossKind::Singular, 2.0).check_dimension(1));
    CHECK(parse_pathloss_kind("bounded_min") == PathLossKind::BoundedMin);
    CHECK(to_string(PathLossKind::BoundedSum) == "bounded_sum");
    CHECK_THROWS_AS(parse_pathloss_kind("cosine"), ParameterError);
}

TEST_CASE("delta kernel") {
    const PathLoss s(PathLossKind::Singular, 4.0);
    CHECK(delta(1.0, s, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(delta(0.0, s, 2.0) == 1.0);
    CHECK(delta(2.0, s, 2.0, 1.0 / 16) == doctest::Approx(2.0 / 3.0));
    const DeltaKernel k(s, 2.0);
    CHECK(k.of_distance(1.5) == doctest::Approx(delta(1.5, s, 2.0)));
    CHECK_THROWS_AS(delta(-1.0, s, 2.0), ParameterError);
}

TEST_CASE("link specification") {
    const PathLoss s(PathLossKind::Singular, 4.0);
    LinkSpec l;
    l.theta = 2.0;
    CHECK(l.resolved_distance(s) == 1.0);
    CHECK(l.effective_theta(s) == doctest::Approx(2.0));
    l.distance = 2.0;
    CHECK(l.effective_theta(s) == doctest::Approx(32.0));
    CHECK(l.noise_factor(s) == 1.0);
    l.noise = Noise{0.01, 1.0};
    CHECK(l.noise_factor(s) == doctest::Approx(std::exp(-0.32)));
    l.theta = -1.0;
    CHECK_THROWS_AS(l.validate(s), ParameterError);
}

TEST_CASE("conditional success with fixed interferers") {
    const PathLoss s(PathLossKind::Singular, 4.0);
    LinkSpec l;
    l.theta = 2.0;
    const std::vector<Point> one{{2.0, 0.0, 0.0}};
    CHECK(success_conditional(one, Point{0, 0, 0}, l, s) == doctest::Approx(1.0 / (1.0 + 2.0 / 16)));
    const std::vector<Point> two{{2.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    CHECK(success_conditional(two, Point{0, 0, 0}, l, s) == doctest::Approx(1.0 / (1.0 + 2.0 / 16) / 3.0));
    CHECK(interference(two, Point{0, 0, 0}, s) == doctest::Approx(1.0 + 1.0 / 16));
    const std::vector<Point> hit{{0.0, 0.0, 0.0}};
    CHECK(std::isinf(interference(hit, Point{0, 0, 0}, s)));
    CHECK(success_conditional(hit, Point{0, 0, 0}, l, s) == 0.0);
}

TEST_CASE("PPP ALOHA closed form") {
    CHECK(success_ppp_aloha_closed(1.0, 0.05, 2.0, 4.0) == doctest::Approx(0.70544).epsilon(1e-5));
    for (double eta : {0.01, 0.1, 0.5}) {
        CHECK(success_ppp_aloha_closed(1.0, eta, 2.0, 4.0) ==
              doctest::Approx(std::exp(-eta * ppp_contention(1.0, 2.0))).epsilon(1e-12));
    }
    CHECK(success_ppp_aloha_closed(1.0, 0.0, 2.0, 4.0) == 1.0);
    CHECK_THROWS_AS(success_ppp_aloha_closed(1.0, 0.1, 2.0, 2.0), ParameterError);
}

TEST_CASE("scaled Bessel I0") {
    for (double x : {0.0, 0.5, 3.0, 40.0, 300.0}) {
        CHECK(bessel_i0e(x) == doctest::Approx(std::exp(-x) * boost::math::cyl_bessel_i(0, x)).epsilon(1e-12));
    }
    const double x = 2000.0;
    const double series = (1 + 1 / (8 * x) + 9 / (128 * x * x)) / std::sqrt(2 * M_PI * x);
    CHECK(bessel_i0e(x) == doctest::Approx(series).epsilon(1e-10));
}

TEST_CASE("Thomas closed form tends to the PPP for diffuse clusters") {
    const PathLoss s(PathLossKind::Singular, 4.0);
    const ClusterSpec diffuse{0.1, 4.0, 100.0};
    const auto t = success_thomas_closed(diffuse, 1.0, 0.1, 2.0, s);
    const double ppp = success_ppp_aloha_closed(0.4, 0.1, 2.0, 4.0);
    CHECK(t.p_success == doctest::Approx(ppp).epsilon(1e-3));
    CHECK(t.outage == doctest::Approx(1.0 - t.p_success).epsilon(1e-12));
    CHECK(t.p_success < ppp);  // clustering only adds contention
}

TEST_CASE("cluster MAC special cases") {
    const PathLoss s(PathLossKind::Singular, 4.0);
    const ClusterSpec spec{0.1, 4.0, 3.6};
    const auto aloha = success_thomas_aloha_closed(spec, 0.2, 2.0, s);
    const auto b1 = success_cluster_mac_closed(spec, 1.0, 0.2, 2.0, s);
    CHECK(b1.p_success == doctest::Approx(aloha.p_success).epsilon(1e-12));
    const auto p0 = success_cluster_mac_closed(spec, 0.0, 0.0, 2.0, s);
    const auto direct = success_thomas_closed(spec, 0.0, 1.0, 2.0, s);
    CHECK(p0.p_success == doctest::Approx(direct.p_success));
    CHECK(p0.p_success < 1.0);
    // Parent thinning: success decreases from P0 as eta grows.
    CHECK(success_cluster_mac_closed(spec, 0.0, 0.1, 2.0, s).p_success < p0.p_success);
    CHECK_THROWS_AS(success_cluster_mac_closed(spec, 1.5, 0.1, 2.0, s), ParameterError);
}
