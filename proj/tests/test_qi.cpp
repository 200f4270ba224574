#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"

#include "vtg/errors.hpp"
#include "vtg/qi.hpp"

#include <random>

using namespace vtg;

namespace {

Graph random_connected(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 1; v < n; ++v) e.emplace_back(rng() % v, v);
  for (int extra = 0; extra < int(n / 2); ++extra) {
    Vertex u = rng() % n, v = rng() % n;
    if (u != v) e.emplace_back(u, v);
  }
  return Graph::from_edges(n, e, true);
}

std::shared_ptr<const MetricSpace> space(const Graph& g) {
  return std::make_shared<const MetricSpace>(MetricSpace::of_graph(g));
}

// Least K for the map at multiplicative constant c, straight from the
// definition in exact arithmetic.
Rational brute_min_k(const std::vector<std::size_t>& map, const MetricSpace& s, const MetricSpace& t,
                     const Rational& c) {
  Rational k = 0;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y) {
      Rational d = s(x, y), dd = t(map[x], map[y]);
      k = std::max(k, Rational(d / c - dd));
      k = std::max(k, Rational(dd - c * d));
    }
  for (std::size_t y = 0; y < t.size(); ++y) {
    std::uint64_t nearest = ~std::uint64_t{0};
    for (auto z : map) nearest = std::min(nearest, t(y, z));
    k = std::max(k, Rational(nearest));
  }
  return k;
}

const Rational kCs[] = {Rational(1), Rational(3, 2), Rational(2), Rational(7, 3)};

}  // namespace

TEST_SUITE("qi") {

TEST_CASE("graph metric matches Floyd-Warshall") {
  auto g = petersen_graph();
  auto m = MetricSpace::of_graph(g);
  auto d = oracle::distances(g);
  for (std::size_t x = 0; x < 10; ++x)
    for (std::size_t y = 0; y < 10; ++y) CHECK(m(x, y) == d[x][y]);
  CHECK_THROWS_AS(MetricSpace::of_graph(Graph(2)), InputError);
}

TEST_CASE("compose_params") {
  CHECK(compose_params({2, 3}, {Rational(3, 2), 1}) == QiParams{3, Rational(13, 2)});
  CHECK(compose_params({1, 0}, {1, 0}) == QiParams{1, 0});
}

TEST_CASE("min_k agrees with the definition") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = space(random_connected(3 + rng() % 8, rng));
    auto b = space(random_connected(3 + rng() % 8, rng));
    std::vector<std::size_t> map(a->size());
    for (auto& y : map) y = rng() % b->size();
    const auto& c = kCs[rng() % 4];
    auto w = verify_qi(map, a, b, {c, 0});
    CHECK(w.min_k == brute_min_k(map, *a, *b, c));
    CHECK(w.verified == (w.min_k == 0));
    CHECK(verify_qi(map, a, b, {c, w.min_k}).verified);
    if (w.min_k > 0) CHECK_FALSE(verify_qi(map, a, b, {c, w.min_k - Rational(1, 7)}).verified);
  }
}

TEST_CASE("bad parameters and maps") {
  auto a = space(cycle_graph(4));
  CHECK_THROWS_AS(verify_qi({0, 1, 2, 3}, a, a, {Rational(1, 2), 0}), InputError);
  CHECK_THROWS_AS(verify_qi({0, 1, 2, 3}, a, a, {1, -1}), InputError);
  CHECK_THROWS_AS(verify_qi({0, 1, 2}, a, a, {1, 0}), InputError);
  CHECK_THROWS_AS(verify_qi({0, 1, 2, 9}, a, a, {1, 0}), InputError);
  auto w = verify_qi({0, 0, 0, 0}, a, a, {1, 0});
  CHECK_THROWS_AS(invert_qi(w), InputError);
}

TEST_CASE("random compositions and inverses") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = space(random_connected(3 + rng() % 7, rng));
    auto b = space(random_connected(3 + rng() % 7, rng));
    auto c = space(random_connected(3 + rng() % 7, rng));
    std::vector<std::size_t> f_map(a->size()), g_map(b->size());
    for (auto& y : f_map) y = rng() % b->size();
    for (auto& y : g_map) y = rng() % c->size();
    const auto& cf = kCs[rng() % 4];
    const auto& cg = kCs[rng() % 4];
    auto f = verify_qi(f_map, a, b, {cf, brute_min_k(f_map, *a, *b, cf)});
    auto g = verify_qi(g_map, b, c, {cg, brute_min_k(g_map, *b, *c, cg)});
    REQUIRE(f.verified);
    REQUIRE(g.verified);
    auto gf = compose_qi(f, g);
    CHECK(gf.params == compose_params(f.params, g.params));
    CHECK(gf.verified);
    auto fi = invert_qi(f);
    CHECK(fi.params == QiParams{cf, 3 * cf * f.params.k});
    CHECK(fi.verified);
    // Nearest-image rule: each target point goes to a preimage of a
    // nearest image point.
    for (std::size_t y = 0; y < b->size(); ++y) {
      std::uint64_t nearest = ~std::uint64_t{0};
      for (auto z : f_map) nearest = std::min(nearest, (*b)(y, z));
      CHECK((*b)(y, f_map[fi.map[y]]) == nearest);
    }
  }
}

TEST_CASE("canonical chains on the golden quotients") {
  std::vector<std::size_t> expected_k{3, 2, 4};
  auto cases = fixtures::golden_quotients();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    CAPTURE(c.name);
    auto q = build_quotient(c.inst.graph, c.inst.action, c.h);
    auto r = canonical_chain(q, 0);
    CHECK(r.k == expected_k[i]);
    CHECK(r.projection.verified);
    CHECK(r.projection.params == QiParams{1, r.k});
    CHECK(r.orbit_map.verified);
    CHECK(r.orbit_map.params == QiParams{1, 1});
    CHECK(r.orbit_inverse.verified);
    CHECK(r.orbit_inverse.params == QiParams{1, 3});
    CHECK(r.certified == QiParams{1, 3 + 2 * Rational(r.k)});
    CHECK(r.chain.verified);
    CHECK(r.composed == QiParams{1, r.k + 6});
    CHECK(r.composed_verified);
    CHECK(r.chain.min_k == brute_min_k(r.chain.map, *r.chain.source, *r.chain.target, 1));
    CHECK(r.projection.min_k == brute_min_k(r.projection.map, *r.projection.source, *r.projection.target, 1));
  }
}

TEST_CASE("projection constant is the fibre diameter bound") {
  // d_{Γ/H}(ψx, ψy) <= d(x, y) always, and d(x, y) <= d_{Γ/H} + fibre diameter.
  auto c = fixtures::torus4_shift();
  auto q = build_quotient(c.inst.graph, c.inst.action, c.h);
  auto r = canonical_chain(q, 0);
  CHECK(r.projection.min_k <= Rational(fibre_diameters(q)[0]));
}

}  // TEST_SUITE
