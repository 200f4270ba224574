#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"

#include "vtg/errors.hpp"
#include "vtg/growth.hpp"

#include <cmath>
#include <random>

using namespace vtg;

namespace {

GrowthTable lattice_oracle_table(std::size_t d, std::size_t radius) {
  GrowthTable t;
  for (std::size_t r = 0; r <= radius; ++r) t.beta.push_back(oracle::lattice_ball(d, std::int64_t(r)));
  return t;
}

// Minimal A with beta(n) >= (1/A)(n/diam)^d |V| for integer d, by
// direct enumeration of the ratio.
Rational oracle_min_a(const Graph& g, unsigned d) {
  auto dist = oracle::distances(g);
  auto diam = oracle::diameter(dist);
  Rational best = 0;
  for (std::uint64_t n = 1; n <= diam; ++n) {
    Rational need = pow(Rational(n, diam), d) * Rational(g.num_vertices()) / Rational(oracle::ball_size(dist, 0, n));
    best = std::max(best, need);
  }
  return best;
}

}  // namespace

TEST_SUITE("growth") {

TEST_CASE("lattice balls") {
  for (std::size_t d = 1; d <= 4; ++d) {
    auto t = lattice_ball_table(d, 8);
    CHECK(t.beta == lattice_oracle_table(d, 8).beta);
  }
  CHECK_THROWS_AS(lattice_ball_table(0, 3), InputError);
  CHECK_THROWS_AS(lattice_ball_table(40, 1'000'000), ResourceError);
}

TEST_CASE("table lookup") {
  GrowthTable done{{1, 3, 5, 6}, true};
  CHECK(table_value(done, 2) == 5);
  CHECK(table_value(done, 100) == 6);
  GrowthTable open{{1, 3, 5}, false};
  CHECK(table_value(open, 2) == 5);
  CHECK_THROWS_AS(table_value(open, 3), InputError);
}

TEST_CASE("doubling scale on the integers") {
  auto t = lattice_ball_table(1, 6561);
  auto r = find_doubling_scale(t, 6561, 1, 3, Rational(1, 4), Rational(1, 2));
  CHECK(r.scan.front() == 9);
  CHECK(r.m == 9);
  CHECK(r.ratio == Rational(55, 19));
  CHECK(r.k == BigInt(6561));
  CHECK(r.k_exponent == 8);
}

TEST_CASE("doubling scale on an adversarial table") {
  GrowthTable t;
  for (std::uint64_t r = 0; r <= 128; ++r) {
    std::uint64_t b = 1;
    if (r >= 32) b = 300;
    if (r >= 64) b = 300 * 257;
    if (r >= 128) b = 300ull * 257 * 257;
    t.beta.push_back(b);
  }
  t.exhausted = true;
  auto r = find_doubling_scale(t, 65536, 2, 2, Rational(1, 4), Rational(3, 4));
  CHECK(r.scan == std::vector<std::uint64_t>{16, 32, 64, 128});
  CHECK(r.m == 128);
  CHECK(r.k == BigInt(256));
  CHECK(r.ratio == 1);
  // Each earlier point fails the doubling test.
  for (auto m : {16, 32, 64}) CHECK(table_value(t, 2 * m) > 256 * table_value(t, m));
}

TEST_CASE("doubling scale scan matches its definition") {
  auto t = lattice_ball_table(2, 10000);
  for (std::uint64_t n : {256u, 1000u, 4096u, 10000u}) {
    auto r = find_doubling_scale(t, n, 2, 2, Rational(1, 4), Rational(3, 4));
    auto m0 = std::uint64_t(std::floor(std::pow(double(n), 0.25) + 1e-9));
    CHECK(r.scan.front() == m0);
    for (auto m : r.scan) CHECK(double(m) < std::sqrt(double(n)));
    CHECK(double(r.scan.back() * 2) >= std::sqrt(double(n)));
    CHECK(Rational(table_value(t, 2 * r.m), table_value(t, r.m)) == r.ratio);
    CHECK(r.ratio <= Rational(*r.k));
  }
}

TEST_CASE("doubling scale preconditions") {
  auto t = lattice_ball_table(2, 7000);
  CHECK_THROWS_AS(find_doubling_scale(t, 6561, 2, 3, Rational(1, 2), Rational(1, 4)), InputError);
  CHECK_THROWS_AS(find_doubling_scale(t, 6561, 2, 1, Rational(1, 4), Rational(1, 2)), InputError);
  CHECK_THROWS_AS(find_doubling_scale(t, 8, 2, 3, Rational(1, 4), Rational(1, 2)), InputError);
  CHECK_THROWS_AS(find_doubling_scale(t, 6561, Rational(1, 10), 3, Rational(1, 4), Rational(1, 2)), InputError);
  auto small = lattice_ball_table(2, 20);
  CHECK_THROWS_AS(find_doubling_scale(small, 6561, 2, 3, Rational(1, 4), Rational(1, 2)), InputError);
}

TEST_CASE("moderate growth fit agrees with direct enumeration") {
  std::vector<std::pair<std::string, Graph>> graphs{{"C20", cycle_graph(20)},     {"C21", cycle_graph(21)},
                                                    {"T6x6", torus_graph(6, 6)},  {"Petersen", petersen_graph()},
                                                    {"Q4", hypercube_graph(4)},   {"prism7", prism_graph(7)}};
  for (const auto& [name, g] : graphs) {
    CAPTURE(name);
    for (unsigned d = 1; d <= 3; ++d) {
      auto fit = moderate_growth_fit(g, d);
      CHECK(fit.exact);
      CHECK(fit.a == oracle_min_a(g, d));
      CHECK(satisfies_moderate_growth(fit.table, fit.order, fit.diam, fit.a, d));
      if (fit.a > Rational(1, 1000))
        CHECK_FALSE(satisfies_moderate_growth(fit.table, fit.order, fit.diam, fit.a - Rational(1, 1000), d));
      auto rep = check_mod_growth_diam(g, fit.a, d);
      CHECK(Rational(pow(BigInt(rep.diam), d)) >= rep.bound_power);
    }
  }
  CHECK(moderate_growth_fit(cycle_graph(20), 1).a == 1);
}

TEST_CASE("moderate growth with a fractional exponent") {
  auto fit = moderate_growth_fit(torus_graph(8, 8), Rational(3, 2));
  CHECK(satisfies_moderate_growth(fit.table, fit.order, fit.diam, fit.a, Rational(3, 2)));
  auto exact1 = oracle_min_a(torus_graph(8, 8), 1);
  auto exact2 = oracle_min_a(torus_graph(8, 8), 2);
  CHECK(fit.a <= std::max(exact1, exact2) + Rational(1, 1000));
}

TEST_CASE("moderate growth inputs") {
  CHECK_THROWS_AS(moderate_growth_fit(path_graph(5), 1), InputError);
  CHECK_THROWS_AS(moderate_growth_fit(Graph(3), 1), InputError);
  CHECK_THROWS_AS(moderate_growth_fit(cycle_graph(5), 0), InputError);
  // A too small for the hypothesis.
  CHECK_THROWS_AS(check_mod_growth_diam(cycle_graph(20), Rational(1, 2), 1), InputError);
}

TEST_CASE("diameter bound is tight on complete graphs") {
  auto rep = check_mod_growth_diam(complete_graph(5), 1, 1);
  CHECK(rep.diam == 1);
  CHECK(rep.bound_power == 1);
  CHECK(rep.bound == doctest::Approx(1.0));
}

TEST_CASE("piecewise monomials") {
  auto f = PiecewiseMonomial::continuous({2}, {1, 2});
  CHECK(f.coefficients == std::vector<Rational>{1, Rational(1, 2)});
  CHECK(f.eval(Rational(3)) == Rational(9, 2));
  CHECK(f.eval(Rational(3, 2)) == Rational(3, 2));
  CHECK(f.eval(3.0) == doctest::Approx(4.5));
  CHECK(f.max_degree() == 2);
  CHECK_NOTHROW(f.validate());
  CHECK_THROWS_AS(f.eval(Rational(1, 2)), InputError);
  PiecewiseMonomial broken{{2}, {1, 1}, {1, 2}};
  CHECK_THROWS_AS(broken.validate(), InputError);
  PiecewiseMonomial early{{1}, {1, 1}, {1, 2}};
  CHECK_THROWS_AS(early.validate(), InputError);
  CHECK_THROWS_AS(PiecewiseMonomial::continuous({2}, {1}), InputError);

  auto rep = pw_scaling_check(f, 2, 2);
  CHECK(rep.worst <= 1);
  CHECK(rep.points > 0);
  CHECK_THROWS_AS(pw_scaling_check(f, 2, 1), InputError);
  CHECK_THROWS_AS(pw_scaling_check(f, 1, 2), InputError);
}

TEST_CASE("scaling inequality on random piecewise monomials") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t pieces = 1 + rng() % 4;
    std::vector<Rational> bps;
    Rational x = 1;
    for (std::size_t i = 1; i < pieces; ++i) {
      x += Rational(1 + rng() % 12, 1 + rng() % 3);
      bps.push_back(x);
    }
    std::vector<unsigned> degs;
    for (std::size_t i = 0; i < pieces; ++i) degs.push_back(rng() % 5);
    auto f = PiecewiseMonomial::continuous(bps, degs, Rational(1 + rng() % 5));
    Rational c(2 + rng() % 7, 1 + rng() % 2);
    if (c <= 1) c = 2;
    auto dmax = f.max_degree() + unsigned(rng() % 2);
    CHECK_NOTHROW(pw_scaling_check(f, c, dmax));
    // Independent exact spot checks.
    for (int k = 0; k < 10; ++k) {
      Rational y = 1 + Rational(rng() % 200, 1 + rng() % 7);
      CHECK(f.eval(c * y) <= pow(c, dmax) * f.eval(y));
    }
  }
}

TEST_CASE("profile fit recovers an exact profile") {
  // With n = 1 the ratios are the table itself: m^2 up to 5, then 5m.
  GrowthTable t;
  t.beta.push_back(1);
  auto f = PiecewiseMonomial::continuous({5}, {2, 1});
  for (std::uint64_t m = 1; m <= 16; ++m) t.beta.push_back(std::uint64_t(f.eval(double(m)) + 0.5));
  auto fit = fit_growth_profile(t, 1, 3, 16);
  CHECK(fit.f.breakpoints == std::vector<Rational>{5});
  CHECK(fit.f.degrees == std::vector<unsigned>{2, 1});
  CHECK(fit.sse == doctest::Approx(0.0));
  CHECK(fit.max_deviation == doctest::Approx(1.0));
}

TEST_CASE("profile fit on the integer lattice") {
  auto t = lattice_ball_table(2, 40);
  auto fit = fit_growth_profile(t, 4, 3, 8);
  CHECK(fit.f.pieces() == 1);
  CHECK(fit.f.degrees[0] == 2);
  auto csv = format_profile_csv(fit);
  CHECK(csv.rfind("m,beta_ratio,f_fit\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("profile fit on a torus sees the wraparound") {
  auto t = growth_table(torus_graph(24, 24), 0, 48);
  auto fit = fit_growth_profile(t, 4, 3, 12);
  REQUIRE(fit.f.pieces() >= 2);
  CHECK(abs(fit.f.breakpoints[0] - 3) <= 1);
  CHECK(fit.f.degrees[0] == 2);
  CHECK(fit.f.degrees.back() == 0);
  // Between L/2 and L the ball is L^2 - 2(L - r)^2, so a third piece buys
  // a degree-1 bridge.
  CHECK(fit.f.degrees == std::vector<unsigned>{2, 1, 0});
  auto two = fit_growth_profile(t, 4, 2, 12);
  CHECK(two.f.degrees == std::vector<unsigned>{2, 0});
  CHECK(two.f.breakpoints[0] == 4);
  CHECK(two.max_deviation < 1.5);
}

TEST_CASE("profile fit inputs") {
  auto t = lattice_ball_table(2, 40);
  CHECK_THROWS_AS(fit_growth_profile(t, 4, 2, 1), InputError);
  CHECK_THROWS_AS(fit_growth_profile(t, 0, 2, 4), InputError);
  CHECK_THROWS_AS(fit_growth_profile(t, 4, 0, 4), InputError);
  CHECK_THROWS_AS(fit_growth_profile(t, 4, 2, 20), InputError);
}

TEST_CASE("log-log slope") {
  auto t = lattice_ball_table(2, 400);
  CHECK(loglog_slope(t, 200, 400) == doctest::Approx(2.0).epsilon(0.02));
  auto t3 = lattice_ball_table(3, 400);
  CHECK(loglog_slope(t3, 200, 400) == doctest::Approx(3.0).epsilon(0.02));
  CHECK_THROWS_AS(loglog_slope(t, 0, 4), InputError);
}

TEST_CASE("persistence") {
  auto g = cycle_graph(100);
  auto t = growth_table(g, 0, 60);
  auto rep = persistence_check(t, 5, 1, 5, 40, Rational(2));
  Rational emp = 0;
  for (std::uint64_t m = 5; m <= 40; ++m)
    emp = std::max(emp, Rational(t[m]) / (Rational(m, 5) * Rational(t[5])));
  CHECK(rep.c_emp == emp);
  CHECK(rep.holds == true);
  CHECK_FALSE(rep.trivial_clause_applies);
  auto rep2 = persistence_check(t, 5, 1, 5, 40, Rational(1, 2));
  CHECK(rep2.holds == false);

  auto k5 = growth_table(complete_graph(5), 0, 10);
  auto triv = persistence_check(k5, 5, 1, 5, 10);
  CHECK(triv.trivial_clause_applies);
  CHECK_FALSE(triv.holds.has_value());
  CHECK_THROWS_AS(persistence_check(t, 0, 1, 1, 4), InputError);
  CHECK_THROWS_AS(persistence_check(t, 5, 1, 6, 4), InputError);
}

TEST_CASE("persistence clause is checked on the table") {
  // beta(3) = 3 <= 3 yet the table keeps growing: not a graph table.
  GrowthTable bad{{1, 2, 3, 3, 4}, false};
  CHECK_THROWS_AS(persistence_check(bad, 3, 1, 1, 4), FalsificationError);
}

TEST_CASE("growth transfer on the golden quotients") {
  for (const auto& c : fixtures::golden_quotients()) {
    CAPTURE(c.name);
    auto q = build_quotient(c.inst.graph, c.inst.action, c.h);
    auto rep = growth_transfer_check(q);
    auto d = oracle::distances(c.inst.graph);
    auto qd = oracle::distances(q.quotient());
    auto s = ball_gen_set(q.quotient(), q.quotient_action(), q.fibre_of(0));
    auto sizes = oracle::power_sizes(s.elems().items(), q.quotient_group().identity(), rep.rows.size());
    CHECK(rep.fibre == q.fibres()[q.fibre_of(0)].size());
    CHECK(rep.gen_set_size == s.size());
    for (const auto& row : rep.rows) {
      CHECK(row.beta_base == oracle::ball_size(d, 0, row.m));
      CHECK(row.beta_base_shift == oracle::ball_size(d, 0, row.m + rep.k));
      CHECK(row.beta_quot == oracle::ball_size(qd, q.fibre_of(0), row.m));
      CHECK(row.s_m == sizes[row.m]);
      if (row.m >= 1) CHECK(row.s_m == rep.stabilizer * row.beta_quot);
    }
  }
}

}  // TEST_SUITE
