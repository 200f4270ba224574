#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"

#include "vtg/errors.hpp"
#include "vtg/walk.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace vtg;

namespace {

Eigen::MatrixXd lazy_matrix(const Graph& g) {
  const auto n = Eigen::Index(g.num_vertices());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n) * 0.5;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    for (auto u : g.neighbors(v)) p(Eigen::Index(v), Eigen::Index(u)) += 0.5 / double(g.degree(v));
  return p;
}

double dense_lambda2(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lazy_matrix(g));
  const auto& ev = solver.eigenvalues();  // ascending
  return ev(ev.size() - 2);
}

}  // namespace

TEST_SUITE("walk") {

TEST_CASE("complete graphs mix almost at once") {
  for (std::size_t n = 4; n <= 10; ++n) {
    auto r = mixing_time_tv(complete_graph(n));
    CHECK(r.t_mix <= 3);
    CHECK(r.exact);
    CHECK(r.diameter == 1);
  }
}

TEST_CASE("exact TV curve agrees with dense rational powering") {
  std::vector<std::pair<std::string, Graph>> graphs{{"C8", cycle_graph(8)},
                                                    {"C9", cycle_graph(9)},
                                                    {"Petersen", petersen_graph()},
                                                    {"Q3", hypercube_graph(3)},
                                                    {"T3x4", torus_graph(3, 4)},
                                                    {"K4", complete_graph(4)}};
  for (const auto& [name, g] : graphs) {
    CAPTURE(name);
    auto r = mixing_time_tv(g);
    auto ref = oracle::lazy_tv_curve(g, 0, r.t_mix);
    REQUIRE(r.tv.size() == r.t_mix + 1);
    for (std::size_t t = 0; t <= r.t_mix; ++t) CHECK(r.tv[t] == doctest::Approx(to_double(ref[t])).epsilon(1e-12));
    CHECK(ref[r.t_mix] <= Rational(1, 4));
    if (r.t_mix > 0) CHECK(ref[r.t_mix - 1] > Rational(1, 4));
  }
}

TEST_CASE("TV is nonincreasing") {
  for (const auto& g : {cycle_graph(31), torus_graph(5, 7), hypercube_graph(6)}) {
    auto r = mixing_time_tv(g, Rational(1, 100));
    for (std::size_t t = 1; t < r.tv.size(); ++t) CHECK(r.tv[t] <= r.tv[t - 1] + 1e-15);
    CHECK(r.tv.back() <= 0.01);
  }
}

TEST_CASE("cycles mix in order diam squared") {
  std::vector<double> ratios;
  for (std::size_t n : {16, 32, 64}) {
    auto r = mixing_time_tv(cycle_graph(n));
    CHECK(r.diameter == n / 2);
    CHECK(r.ratio == doctest::Approx(double(r.t_mix) / double(r.diameter * r.diameter)));
    ratios.push_back(r.ratio);
  }
  for (auto x : ratios) {
    CHECK(x > 0.2);
    CHECK(x < 0.6);
  }
  CHECK(std::abs(ratios[2] - ratios[1]) < 0.1 * ratios[2]);
}

TEST_CASE("float walk above the exact threshold") {
  auto g = torus_graph(24, 24);
  auto r = mixing_time_tv(g);
  CHECK_FALSE(r.exact);
  auto p = lazy_matrix(g);
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(576);
  mu(0) = 1;
  for (std::size_t t = 0; t <= r.t_mix; ++t) {
    double tv = 0.5 * (mu.array() - 1.0 / 576).abs().sum();
    CHECK(r.tv[t] == doctest::Approx(tv).epsilon(1e-9));
    mu = mu * p;
  }
}

TEST_CASE("walk inputs") {
  CHECK_THROWS_AS(mixing_time_tv(path_graph(5)), InputError);
  CHECK_THROWS_AS(mixing_time_tv(Graph::from_edges(4, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 3}})),
                  InputError);
  // Regular and connected but not vertex-transitive: the second basepoint
  // sees a different curve.
  CHECK_THROWS_AS(mixing_time_tv(fixtures::frucht_graph()), InputError);
  CHECK_THROWS_AS(mixing_time_tv(cycle_graph(5000)), ResourceError);
}

TEST_CASE("spectral gap against a dense eigensolver") {
  std::vector<std::pair<std::string, Graph>> graphs{{"K6", complete_graph(6)},
                                                    {"Petersen", petersen_graph()},
                                                    {"Q4", hypercube_graph(4)},
                                                    {"T6x8", torus_graph(6, 8)},
                                                    {"prism9", prism_graph(9)}};
  for (const auto& [name, g] : graphs) {
    CAPTURE(name);
    auto s = spectral_gap(g);
    CHECK(s.lambda2 == doctest::Approx(dense_lambda2(g)).epsilon(1e-8));
    CHECK(s.gap == doctest::Approx(1 - s.lambda2));
    CHECK(s.residual < 1e-9);
  }
  CHECK(spectral_gap(complete_graph(6)).gap == doctest::Approx(6.0 / 10.0));
  // Product form on the torus: 1/2 + (1 + cos(2 pi/8))/4.
  CHECK(spectral_gap(torus_graph(6, 8)).lambda2 ==
        doctest::Approx(0.5 + (1 + std::cos(2 * std::numbers::pi / 8)) / 4).epsilon(1e-8));
}

TEST_CASE("spectral gap of cycles has the closed form") {
  for (std::size_t n : {16, 64, 101}) {
    auto s = spectral_gap(cycle_graph(n));
    double expect = 0.5 + 0.5 * std::cos(2 * std::numbers::pi / double(n));
    CHECK(s.lambda2 == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("mixing time sits inside the spectral band") {
  // (t_rel - 1) log(1/(2 eps)) <= t_mix(eps) <= t_rel log(1/(eps pi_min)),
  // eps = 1/4.
  for (const auto& g : {cycle_graph(40), torus_graph(8, 8), hypercube_graph(7)}) {
    auto r = mixing_time_tv(g);
    auto s = spectral_gap(g);
    double lower = (s.relaxation - 1) * std::log(2.0);
    double upper = s.relaxation * std::log(4.0 * double(g.num_vertices()));
    CHECK(double(r.t_mix) >= lower);
    CHECK(double(r.t_mix) <= upper);
  }
}

TEST_CASE("TV CSV") {
  auto r = mixing_time_tv(complete_graph(4));
  auto csv = format_tv_csv(r);
  CHECK(csv.rfind("t,tv\n0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == long(r.t_mix + 2));
}

}  // TEST_SUITE
