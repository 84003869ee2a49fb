#include <cmath>

#include "doctest.h"
#include "outagekit/error.hpp"
#include "outagekit/geometry.hpp"

using namespace outagekit;

TEST_CASE("unit ball volumes and sphere areas") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
}

TEST_CASE("toroidal minimum image") {
    const auto w = Window::cube(2, 10.0);
    const Point a{0.5, 9.5, 0}, b{9.5, 0.5, 0};
    const auto d = w.displacement(a, b);
    CHECK(d[0] == doctest::Approx(-1.0));
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(w.distance2(a, b) == doctest::Approx(2.0));
    const auto p = w.wrap(Point{5.5, -5.25, 0});
    CHECK(p[0] == doctest::Approx(-4.5));
    CHECK(p[1] == doctest::Approx(4.75));
    CHECK(w.volume() == doctest::Approx(100.0));
}

TEST_CASE("guard band windows do not wrap") {
    const auto w = Window::cube(2, 10.0, EdgeMode::GuardBand, 1.0);
    const Point a{0.5, 9.5, 0}, b{9.5, 0.5, 0};
    CHECK(w.distance2(a, b) == doctest::Approx(162.0));
    CHECK_THROWS_AS(w.wrap(a), UsageError);
}

TEST_CASE("window validation") {
    Window w;
    w.dimension = 4;
    CHECK_THROWS_AS(w.validate(), ParameterError);
    w = Window::cube(2, 10.0);
    w.side[1] = -1;
    CHECK_THROWS_AS(w.validate(), ParameterError);
}
