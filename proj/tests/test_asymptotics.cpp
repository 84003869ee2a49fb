#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "outagekit/asymptotics.hpp"
#include "outagekit/error.hpp"
#include "outagekit/quadrature.hpp"
#include "outagekit/special.hpp"

using namespace outagekit;

namespace {

const PathLoss kSingular4(PathLossKind::Singular, 4.0);

// Composite Simpson on [a, b] with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

// Planar integral of a radial function, tail beyond rmax approximated by theta r^-4.
double planar(const std::function<double(double)>& f, double rmax, double theta) {
    return simpson([&](double r) { return 2 * M_PI * r * f(r); }, 0.0, rmax, 200000) +
           2 * M_PI * theta / (2 * rmax * rmax);
}

double delta4(double r, double theta) { return theta / (theta + std::pow(r, 4)); }

// Direct truncated product over Z^d \ {0} of 1 / (1 + c |x|^-alpha).
double direct_product(int d, double alpha, double c, int n) {
    double log_sum = 0;
    const int ny = d >= 2 ? n : 0, nz = d >= 3 ? n : 0;
    for (int x = -n; x <= n; ++x)
        for (int y = -ny; y <= ny; ++y)
            for (int z = -nz; z <= nz; ++z) {
                const double r2 = double(x) * x + double(y) * y + double(z) * z;
                if (r2 > 0) log_sum += std::log1p(c * std::pow(r2, -alpha / 2));
            }
    return std::exp(-log_sum);
}

}  // namespace

TEST_CASE("PPP contention has the closed form pi^2 sqrt(theta) / 2") {
    const double expect = M_PI * M_PI * std::sqrt(2.0) / 2.0;
    CHECK(gamma_ppp(2, 1.0, 2.0, kSingular4) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(gamma_aloha(ProductDensity::poisson(1.0), 1.0, 2.0, kSingular4) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(gamma_ppp(2, 1.0, 2.0, kSingular4) == doctest::Approx(6.979).epsilon(1e-4));
    // One dimension: int_R theta / (theta + x^4) dx = pi theta^(1/4) / sqrt(2).
    CHECK(gamma_ppp(1, 1.0, 2.0, kSingular4) == doctest::Approx(M_PI * std::pow(2.0, 0.25) / std::sqrt(2.0)));
}

TEST_CASE("Thomas ALOHA contention against an independent quadrature") {
    const ClusterSpec spec{0.1, 4.0, 3.6};
    const double lambda = spec.intensity(), s2 = spec.sigma * spec.sigma;
    const double oracle =
        lambda * planar([](double r) { return delta4(r, 2.0); }, 400.0, 2.0) +
        lambda / (4 * M_PI * s2 * spec.parent_intensity) *
            planar([&](double r) { return std::exp(-r * r / (4 * s2)) * delta4(r, 2.0); }, 400.0, 0.0);
    CHECK(gamma_aloha(ProductDensity::thomas(spec), lambda, 2.0, kSingular4) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("Matern ALOHA contention is below the PPP one and increasing in theta") {
    const double lp = matern_parent_intensity(0.194, 1.0);
    const auto rho = ProductDensity::matern(lp, 1.0);
    double prev = 0;
    for (double theta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double g = gamma_aloha(rho, 0.194, theta, kSingular4);
        CHECK(g > prev);
        CHECK(g < gamma_ppp(2, 0.194, theta, kSingular4));
        prev = g;
    }
}

TEST_CASE("CSMA contention") {
    const double g = gamma_csma_matern(0.3, 2.0, 4.0);
    CHECK(g == doctest::Approx(1.956494).epsilon(1e-6));
    CHECK(std::abs(g - 1.95) / 1.95 < 0.05);
    // Linear in theta and lambda^(alpha/2) in lambda.
    CHECK(gamma_csma_matern(0.3, 4.0, 4.0) == doctest::Approx(2 * g).epsilon(1e-10));
    CHECK(gamma_csma_matern(1.2, 2.0, 4.0) == doctest::Approx(16 * g).epsilon(1e-9));
    CHECK(csma_g(0.0, 1.0) == doctest::Approx(M_PI));
    CHECK_THROWS_AS(gamma_csma_matern(0.3, 2.0, 2.0), ParameterError);
}

TEST_CASE("TDMA bounds against a direct product") {
    const auto b = tdma_bounds(1, 2, 2.0, 4.0);
    CHECK(b.exact == doctest::Approx(0.774077).epsilon(1e-6));
    CHECK(b.lower == doctest::Approx(0.762936).epsilon(1e-6));
    CHECK(b.upper == doctest::Approx(0.787042).epsilon(1e-6));
    CHECK(b.exact == doctest::Approx(direct_product(1, 4.0, 2.0 / 16, 100000)).epsilon(1e-10));
    const auto b2 = tdma_bounds(2, 3, 2.0, 4.0);
    CHECK(b2.exact == doctest::Approx(direct_product(2, 4.0, 2.0 / 81, 400)).epsilon(1e-6));
    const auto b3 = tdma_bounds(3, 2, 2.0, 4.0);
    // Cube |k| <= 60 plus the integral of the remaining lattice sum beyond the cube.
    const double tail = outside_cube_integral(3, [](double r) { return std::pow(r, -4.0); }, 60.5);
    CHECK(b3.exact == doctest::Approx(direct_product(3, 4.0, 2.0 / 16, 60) * std::exp(-2.0 / 16 * tail)).epsilon(1e-5));
}

TEST_CASE("TDMA bound ordering holds on the full grid") {
    for (int d = 1; d <= 3; ++d)
        for (int m = 2; m <= 8; ++m)
            for (double alpha : {3.0, 4.0, 6.0})
                for (double theta : {0.5, 2.0, 10.0}) {
                    if (alpha <= d) continue;
                    const auto b = tdma_bounds(d, m, theta, alpha);
                    CHECK(b.lower <= b.exact);
                    CHECK(b.exact <= b.upper);
                    CHECK(b.eta == doctest::Approx(std::pow(m, -d)));
                }
}

TEST_CASE("small-eta slope of the PPP closed form") {
    const double g = gamma_ppp(2, 1.0, 2.0, kSingular4);
    const double eta = 1e-4;
    const double slope = -std::expm1(-eta * g) / eta;
    CHECK(std::abs(slope / g - 1) < 1e-3);
    const double exps[] = {1.0, 2.0};
    const double rich = extrapolate_coefficient([&](double e) { return -std::expm1(-e * g); }, 1.0, exps);
    CHECK(rich == doctest::Approx(g).epsilon(1e-9));
}

TEST_CASE("Richardson extrapolation removes the listed corrections") {
    const double exps[] = {0.5, 1.0, 1.5};
    auto f = [](double e) { return 2.0 * std::sqrt(e) + 3.0 * e + 4.0 * std::pow(e, 1.5) - std::pow(e, 2.0); };
    CHECK(extrapolate_coefficient(f, 0.5, exps, 1e-2) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK_THROWS_AS(extrapolate_coefficient(f, 0.5, exps, 1e-2, 1.5), ParameterError);
}

TEST_CASE("cluster MAC contention") {
    const ClusterSpec spec{0.1, 4.0, 3.6};
    const double s2 = spec.sigma * spec.sigma;
    // Own-cluster term c int Delta (f*f), with f*f the N(0, 2 sigma^2 I) density.
    const double oracle = spec.mean_daughters *
                          planar([&](double r) { return std::exp(-r * r / (4 * s2)) / (4 * M_PI * s2) * delta4(r, 2.0); },
                                 400.0, 0.0);
    const auto half = gamma_cluster_mac(spec, 0.5, 2.0, kSingular4);
    CHECK(half.kappa == 0.5);
    CHECK(half.gamma == doctest::Approx(oracle).epsilon(1e-3));
    const auto one = gamma_cluster_mac(spec, 1.0, 2.0, kSingular4);
    CHECK(one.gamma == doctest::Approx(gamma_aloha(ProductDensity::thomas(spec), 0.4, 2.0, kSingular4)).epsilon(1e-6));
    const auto zero = gamma_cluster_mac(spec, 0.0, 2.0, kSingular4);
    REQUIRE(zero.p0.has_value());
    CHECK(*zero.p0 < 1.0);
    CHECK(zero.gamma > 0.0);
    const double p0 = success_cluster_mac_closed(spec, 0.0, 0.0, 2.0, kSingular4).p_success;
    const double drop = p0 - success_cluster_mac_closed(spec, 0.0, 1e-6, 2.0, kSingular4).p_success;
    CHECK(drop / 1e-6 == doctest::Approx(zero.gamma).epsilon(1e-4));
}

TEST_CASE("dispatch examples") {
    LinkSpec link;
    link.theta = 2.0;
    const auto ppp = gamma_kappa_for(PppModel{1.0, 2}, Aloha{0.1}, link, kSingular4);
    CHECK(ppp.gamma == doctest::Approx(6.979).epsilon(1e-4));
    CHECK(ppp.kappa == 1.0);
    CHECK(ppp.provenance == Provenance::ProductDensityQuadrature);
    const auto tdma = gamma_kappa_for(LatticeModel{2, 1.0}, TdmaLattice{2, 2}, link, kSingular4);
    CHECK(tdma.gamma == doctest::Approx(12.054).epsilon(1e-4));
    CHECK(tdma.kappa == 2.0);
    const auto tdma3 = gamma_kappa_for(LatticeModel{3, 1.0}, TdmaLattice{2, 3}, link, kSingular4);
    CHECK(tdma3.gamma == doctest::Approx(2.0 * epstein_zeta3_approx(4.0)));
    CHECK(tdma3.validity.find("gap") != std::string::npos);
    const auto cl = gamma_kappa_for(ThomasModel{ClusterSpec{0.1, 4.0, 3.6}}, ClusterMac{0.5, 0.1}, link, kSingular4);
    CHECK(cl.kappa == 0.5);
    const auto un = gamma_kappa_for(LatticeModel{2, 1.0}, UnreasonableTdma{2}, link, kSingular4);
    CHECK(un.provenance == Provenance::Descriptor);
    CHECK(std::isnan(un.gamma));
    CHECK_THROWS_AS(gamma_kappa_for(LatticeModel{2, 1.0}, Aloha{0.1}, link, kSingular4), NotImplementedError);
    CHECK_THROWS_AS(gamma_kappa_for(PppModel{0.3, 2}, CsmaMatern{0.1}, link, PathLoss(PathLossKind::BoundedSum, 4.0)),
                    NotImplementedError);
    CHECK_THROWS_AS(gamma_kappa_for(PppModel{0.3, 2}, ClusterMac{0.5, 0.1}, link, kSingular4), NotImplementedError);
}

TEST_CASE("link distance scaling and orientation") {
    LinkSpec link;
    link.theta = 2.0;
    const double c1 = gamma_kappa_for(PppModel{0.3, 2}, CsmaMatern{0.1}, link, kSingular4).gamma;
    const double a1 = gamma_kappa_for(PppModel{0.3, 2}, Aloha{0.1}, link, kSingular4).gamma;
    for (double r : {1.5, 2.0, 3.0}) {
        link.distance = r;
        CHECK(gamma_kappa_for(PppModel{0.3, 2}, CsmaMatern{0.1}, link, kSingular4).gamma / c1 ==
              doctest::Approx(std::pow(r, 4)).epsilon(1e-10));
        CHECK(gamma_kappa_for(PppModel{0.3, 2}, Aloha{0.1}, link, kSingular4).gamma / a1 ==
              doctest::Approx(r * r).epsilon(1e-7));
    }
    link.distance = 1.0;
    link.orientation = Orientation::TransmitterTypical;
    // On a PPP swapping the roles leaves the contention unchanged.
    CHECK(gamma_kappa_for(PppModel{0.3, 2}, Aloha{0.1}, link, kSingular4).gamma == doctest::Approx(a1).epsilon(1e-7));
    CHECK(gamma_kappa_for(PppModel{0.3, 2}, CsmaMatern{0.1}, link, kSingular4).gamma == doctest::Approx(c1));
}

TEST_CASE("conjecture envelope and eta_max") {
    const double grid0[] = {0.0};
    auto e = conjecture_envelope(6.979, 1.0, grid0);
    CHECK(e[0].lower == 1.0);
    CHECK(e[0].upper == 1.0);
    const double grid1[] = {0.05};
    e = conjecture_envelope(6.979, 1.0, grid1);
    CHECK(e[0].lower == doctest::Approx(0.651).epsilon(1e-3));
    CHECK(e[0].upper == doctest::Approx(0.741).epsilon(1e-3));
    const double p = success_ppp_aloha_closed(1.0, 0.05, 2.0, 4.0);
    CHECK(e[0].lower <= p);
    CHECK(p <= e[0].upper);
    const double grid2[] = {0.5};
    e = conjecture_envelope(2.0, 1.0, grid2);
    CHECK(e[0].lower == 0.0);
    CHECK(e[0].upper == doctest::Approx(0.5));
    CHECK_THROWS_AS(conjecture_envelope(-1.0, 1.0, grid0), ParameterError);
    CHECK(eta_max(1.95, 2.0) == doctest::Approx(0.2774).epsilon(1e-3));
    CHECK(eta_max(0.15, 1.0) == 1.0);
    CHECK(eta_max(6.979, 1.0) == doctest::Approx(0.0215).epsilon(1e-2));
}
