#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "outagekit/error.hpp"
#include "outagekit/io.hpp"

using namespace outagekit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "outagekit_test_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3) == "0.333333333");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(1e-7) == "1e-07");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(std::stod(format_number(M_PI)) == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("sweep CSV layout") {
    SweepResult s;
    s.scheme = "aloha";
    s.alpha = 4;
    s.theta = 2;
    s.seed = 3;
    OutageEstimate e;
    e.eta = 0.1;
    e.p_success = 0.5;
    e.std_err = 0.01;
    e.n_reps = 100;
    e.estimator = EstimatorKind::Marginal;
    s.points.push_back(e);
    s.exact.push_back(0.49);
    std::ostringstream os;
    write_sweep_csv(os, s);
    CHECK(os.str() == "eta,p_success,std_err,n_reps,estimator,scheme,alpha,theta,seed\n"
                      "0.1,0.5,0.01,100,marginal,aloha,4,2,3\n");
    const auto ex = exact_curve(s);
    REQUIRE(ex.has_value());
    CHECK(ex->rows[0].estimator == "closed_form");
    CHECK(ex->rows[0].p_success == 0.49);
    s.exact[0] = std::nan("");
    CHECK_FALSE(exact_curve(s).has_value());
}

TEST_CASE("asymptotic and envelope CSV") {
    AsymptoticRow row;
    row.result.scheme = "tdma";
    row.result.gamma = 12.5;
    row.result.kappa = 2;
    row.result.provenance = Provenance::EpsteinZeta;
    std::ostringstream os;
    write_asymptotic_csv(os, {row});
    CHECK(os.str() == "scheme,gamma,kappa,provenance,alpha,theta\ntdma,12.5,2,epstein-zeta,4,1\n");
    std::ostringstream env;
    write_envelope_csv(env, {{0.5, 0.25, 0.75}});
    CHECK(env.str() == "eta,lower,upper\n0.5,0.25,0.75\n");
}

TEST_CASE("pattern round trip") {
    PointPattern p;
    p.window = Window::cube(2, 10.0);
    p.points = {{1.25, -3.5, 0.0}, {4.0, 4.0, 0.0}};
    p.intensity = 0.02;
    p.model = ModelTag::MaternII;
    p.seed = 77;
    p.params = {{"hardcore_radius", 1.5}};
    const auto path = scratch("pattern.csv");
    const std::vector<bool> active{true, false};
    write_pattern_csv(path, p, &active);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,active");
    const auto q = read_pattern_csv(path);
    REQUIRE(q.size() == 2);
    CHECK(q.points[0][0] == 1.25);
    CHECK(q.points[0][1] == -3.5);
    CHECK(q.window.side[0] == 10.0);
    CHECK(q.model == ModelTag::MaternII);
    CHECK(q.seed == 77);
    CHECK(q.param("hardcore_radius") == 1.5);
    CHECK(q.intensity == 0.02);
}

TEST_CASE("key-value files") {
    const auto path = scratch("kv/manifest.txt");
    write_key_values(path, {{"a", "1"}, {"b.c", "two words"}});
    const auto kv = read_key_values(path);
    REQUIRE(kv.size() == 2);
    CHECK(kv[1].first == "b.c");
    CHECK(kv[1].second == "two words");
    std::ofstream(scratch("bad.txt")) << "no separator here\n";
    CHECK_THROWS_AS(read_key_values(scratch("bad.txt")), ConfigParseError);
}
