#include <cmath>
#include <random>

#include "doctest.h"
#include "outagekit/error.hpp"
#include "outagekit/fit.hpp"

using namespace outagekit;

namespace {

// Sweep whose success follows f(eta) with a relative-to-outage standard error.
template <class F>
SweepResult synthetic(F f, const std::vector<double>& grid, double se, std::uint64_t noise_seed = 0) {
    SweepResult s;
    s.scheme = "synthetic";
    s.alpha = 4.0;
    s.dimension = 2;
    std::mt19937_64 gen(noise_seed);
    std::normal_distribution<double> z;
    for (double eta : grid) {
        OutageEstimate e;
        e.eta = eta;
        e.p_success = f(eta) + (noise_seed ? se * z(gen) : 0.0);
        e.std_err = se;
        e.n_reps = 1000;
        s.points.push_back(e);
        s.exact.push_back(std::nan(""));
    }
    return s;
}

std::vector<double> grid(double hi, double lo, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(hi * std::pow(lo / hi, double(i) / (n - 1)));
    return g;
}

}  // namespace

TEST_CASE("exact power law is recovered") {
    const auto s = synthetic([](double e) { return 1 - 2 * std::pow(e, 1.5); }, grid(0.1, 0.001, 8), 1e-7);
    const auto f = fit_kappa_gamma(s);
    CHECK(f.kappa == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(f.gamma == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(f.kappa_lo <= 1.5);
    CHECK(f.kappa_hi >= 1.5);
    CHECK(f.used.size() == 8);
}

TEST_CASE("window and p0 are honoured") {
    const auto s = synthetic([](double e) { return 0.7 - 3 * e; }, grid(0.1, 0.0001, 12), 1e-8);
    const auto f = fit_kappa_gamma(s, FitWindow{0.0, 0.01}, 0.7);
    CHECK(f.kappa == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f.gamma == doctest::Approx(3.0).epsilon(1e-5));
    for (auto i : f.used) CHECK(s.points[i].eta <= 0.01);
    const auto g = fit_gamma_fixed_kappa(s, 1.0, FitWindow{0.0, 0.01}, 0.7);
    CHECK(g.gamma == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("noisy data give intervals that contain the truth") {
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto s = synthetic([](double e) { return 1 - 5 * e * e; }, grid(0.2, 0.02, 8), 1e-4, seed);
        const auto f = fit_kappa_gamma(s);
        covered += (f.kappa_lo <= 2.0 && 2.0 <= f.kappa_hi);
    }
    CHECK(covered >= 34);
}

TEST_CASE("too few usable points raise EstimationError") {
    const auto s = synthetic([](double e) { return 1 - 1e-6 * e; }, grid(0.1, 0.001, 8), 1e-3);
    CHECK_THROWS_AS(fit_kappa_gamma(s), EstimationError);
    const auto few = synthetic([](double e) { return 1 - e; }, grid(0.1, 0.05, 3), 1e-6);
    CHECK_THROWS_AS(fit_kappa_gamma(few), EstimationError);
}

TEST_CASE("taxonomy on synthetic curves") {
    const auto g = grid(0.1, 0.001, 10);
    auto cls = [&](auto f) { return classify(synthetic(f, g, 1e-6)).cls; };
    CHECK(cls([](double e) { return 1 - 6 * e; }) == TaxonomyClass::R1);
    CHECK(cls([](double e) { return 1 - 6 * e * e; }) == TaxonomyClass::R3);
    CHECK(cls([](double e) { return 1 - 6 * std::pow(e, 1.5); }) == TaxonomyClass::R2);
    CHECK(cls([](double e) { return 1 - 0.5 * std::sqrt(e); }) == TaxonomyClass::U1);
    CHECK(cls([](double e) { return 0.8 - 0.5 * e; }) == TaxonomyClass::U2);
    CHECK(cls([](double e) { return 0.5 + 2 * e; }) == TaxonomyClass::U3);
    CHECK(to_string(TaxonomyClass::Unclassified) == "unclassified");
}

TEST_CASE("an unreasonable condition report demotes R classes") {
    const auto s = synthetic([](double e) { return 1 - 6 * e; }, grid(0.1, 0.001, 10), 1e-6);
    ConditionReport bad;
    bad.reasonable = false;
    CHECK(classify(s, bad).cls == TaxonomyClass::Unclassified);
    ConditionReport good;
    good.reasonable = true;
    CHECK(classify(s, good).cls == TaxonomyClass::R1);
}

TEST_CASE("default fit window") {
    CHECK(default_fit_window(6.979, 1.0).eta_max == doctest::Approx(0.15 / 6.979));
    CHECK(default_fit_window(0.15, 1.0).eta_max == 0.1);
}
