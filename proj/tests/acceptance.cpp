// Acceptance checks: one line per criterion, exit status 1 if any fails.

#include "instances.hpp"
#include "oracles.hpp"

#include "vtg/approx.hpp"
#include "vtg/errors.hpp"
#include "vtg/growth.hpp"
#include "vtg/qi.hpp"
#include "vtg/quotient.hpp"
#include "vtg/structure.hpp"
#include "vtg/walk.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace vtg;

namespace {

// Collects failed checks with a short reason.
struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::size_t failed = 0;
};

std::string str(std::size_t v) { return std::to_string(v); }

// ---------------------------------------------------------------------------

void counting_identity(Checker& c) {
  for (const auto& inst : fixtures::counting_instances()) {
    auto s = ball_gen_set(inst.graph, inst.action, 0);
    auto d = oracle::distances(inst.graph);
    auto diam = oracle::diameter(d);
    auto stab = stabilizer(inst.action, 0).order();
    auto sizes = oracle::power_sizes(s.elems().items(), inst.action.group().identity(), diam);
    for (std::size_t n = 1; n <= diam; ++n)
      c.expect(sizes[n] == stab * oracle::ball_size(d, 0, n), inst.name + " n=" + str(n));
  }
}

void quotient_suite(Checker& c) {
  std::mt19937_64 rng(2);
  for (const auto& qc : {fixtures::c6_rot3(), fixtures::torus4_shift()}) {
    const auto& g = qc.inst.graph;
    auto q = build_quotient(g, qc.inst.action, qc.h);
    auto d = oracle::distances(g);
    auto diam = oracle::diameter(d);

    // Fibres are permuted isometrically and G reaches every fibre.
    fibre_diameters(q);
    std::set<std::size_t> reached;
    for (const auto& x : q.group().elements()) {
      for (const auto& f : q.fibres()) {
        std::set<std::size_t> img;
        for (auto v : f) img.insert(q.fibre_of(qc.inst.action.apply(x, v)));
        c.expect(img.size() == 1, qc.name + ": fibre image splits");
        for (auto u : f)
          for (auto v : f)
            c.expect(d[u][v] == d[qc.inst.action.apply(x, u)][qc.inst.action.apply(x, v)], qc.name + ": isometry");
      }
      reached.insert(q.fibre_of(qc.inst.action.apply(x, q.fibres()[0][0])));
    }
    c.expect(reached.size() == q.fibres().size(), qc.name + ": fibres not all isometric images");

    auto s = ball_gen_set(g, qc.inst.action, 0);
    auto qd = oracle::distances(q.quotient());
    for (std::size_t n = 1; n <= diam; ++n) {
      auto img = quotient_gen_set_image(q, s, n, 0);
      std::size_t expect = 0;
      for (const auto& x : q.quotient_group().elements())
        expect += qd[x.permutation()[q.fibre_of(0)]][q.fibre_of(0)] <= n;
      c.expect(img.image.size() == expect, qc.name + ": phi(S^n) n=" + str(n));
    }
    auto ke = check_kernel_enlargement(q, s);
    c.expect(ke.kernel_radius <= ke.n, qc.name + ": kernel radius");
    for (std::size_t m = 0; m <= diam; ++m) {
      auto bp = check_ball_preimage(q, 0, m);
      c.expect(bp.k_tight <= bp.k, qc.name + ": ball preimage m=" + str(m));
    }

    std::vector<Vertex> all(g.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    auto hact = qc.inst.action.restrict_to(qc.h);
    auto whole = quotient_metric(g, hact, all);
    for (std::size_t i = 0; i < whole.num_fibres(); ++i)
      for (std::size_t j = 0; j < whole.num_fibres(); ++j)
        c.expect(whole.distance(i, j) == qd[q.fibre_of(whole.fibres()[i][0])][q.fibre_of(whole.fibres()[j][0])],
                 qc.name + ": X = Gamma metric");

    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Vertex> x;
      for (const auto& f : q.fibres())
        if (rng() % 2 && x.size() + f.size() <= 12) x.insert(x.end(), f.begin(), f.end());
      if (x.empty()) continue;
      auto qm = quotient_metric(g, hact, x);
      auto ref = oracle::chain_metric(d, qm.fibres());
      for (std::size_t i = 0; i < qm.num_fibres(); ++i)
        for (std::size_t j = 0; j < qm.num_fibres(); ++j) {
          auto expect = ref[i][j] == oracle::kInf ? QuotientMetric::kInfinite : ref[i][j];
          c.expect(qm.distance(i, j) == expect, qc.name + ": chain oracle");
        }
    }
  }
}

void qi_calculus(Checker& c) {
  std::mt19937_64 rng(3);
  auto random_space = [&](std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 1; v < n; ++v) e.emplace_back(rng() % v, v);
    for (std::size_t i = 0; i < n / 2; ++i) {
      Vertex a = rng() % n, b = rng() % n;
      if (a != b) e.emplace_back(a, b);
    }
    return std::make_shared<const MetricSpace>(MetricSpace::of_graph(Graph::from_edges(n, e, true)));
  };
  const Rational cs[] = {Rational(1), Rational(3, 2), Rational(2), Rational(5, 2)};
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_space(3 + rng() % 8);
    auto b = random_space(3 + rng() % 8);
    auto z = random_space(3 + rng() % 8);
    std::vector<std::size_t> fm(a->size()), gm(b->size());
    for (auto& y : fm) y = rng() % b->size();
    for (auto& y : gm) y = rng() % z->size();
    auto f0 = verify_qi(fm, a, b, {cs[rng() % 4], 0});
    auto g0 = verify_qi(gm, b, z, {cs[rng() % 4], 0});
    auto f = verify_qi(fm, a, b, {f0.params.c, f0.min_k});
    auto g = verify_qi(gm, b, z, {g0.params.c, g0.min_k});
    auto gf = compose_qi(f, g);
    c.expect(gf.verified && gf.params == compose_params(f.params, g.params), "composition " + str(trial));
    auto fi = invert_qi(f);
    auto gi = invert_qi(g);
    c.expect(fi.verified && fi.params == QiParams{f.params.c, 3 * f.params.c * f.params.k}, "inverse f " + str(trial));
    c.expect(gi.verified && gi.params == QiParams{g.params.c, 3 * g.params.c * g.params.k}, "inverse g " + str(trial));
  }
  for (const auto& qc : fixtures::golden_quotients()) {
    auto q = build_quotient(qc.inst.graph, qc.inst.action, qc.h);
    auto r = canonical_chain(q, 0);
    auto s = ball_gen_set(qc.inst.graph, qc.inst.action, 0);
    auto radius = word_radius(qc.h, s);
    Rational k_total = 3 + 2 * Rational(radius);
    c.expect(r.k == radius, qc.name + ": k");
    c.expect(r.certified == QiParams{1, k_total}, qc.name + ": certified");
    c.expect(r.chain.verified, qc.name + ": chain");
    c.expect(r.chain.min_k <= k_total, qc.name + ": empirical K");
  }
}

void approximate_groups(Checker& c) {
  std::mt19937_64 rng(4);
  auto subset = [&](const FiniteGroup& g, std::size_t size) {
    ElementSet a;
    while (a.size() < size) a.insert(g.element(rng() % g.order()));
    return a;
  };
  auto symmetric = [&](const FiniteGroup& g, std::size_t picks) {
    ElementSet a{g.identity()};
    for (std::size_t i = 0; i < picks; ++i) {
      const auto& x = g.element(rng() % g.order());
      a.insert(x);
      a.insert(x.inverse());
    }
    return a;
  };
  std::vector<std::pair<std::string, FiniteGroup>> three{
      {"Z/9", cyclic_group(9)}, {"D16", dihedral_group(8)}, {"S4", symmetric_group(4)}};

  for (const auto& [name, g] : three)
    for (int t = 0; t < 500; ++t) {
      auto u = subset(g, 1 + rng() % 6), v = subset(g, 1 + rng() % 6), w = subset(g, 1 + rng() % 6);
      auto r = check_ruzsa_triangle(u, v, w);
      c.expect(r.uw_inv * r.v <= r.uv_inv * r.vw_inv, name + ": triangle");
    }

  for (int t = 0; t < 100; ++t) {
    const auto& g = three[t % 3].second;
    auto a = symmetric(g, 1 + rng() % 3);
    auto hp = check_higher_products(a, 6);
    for (std::size_t m = 3; m <= 6; ++m)
      c.expect(Rational(hp.sizes[m]) <= pow(hp.k, m - 2) * hp.sizes[1], "higher products m=" + str(m));
    auto cert = tripling_to_approx(a);
    c.expect(cert.verified, "tripling certificate");
    c.expect(cert.k <= pow(cert.tripling, 3), "K' <= K^3");
    c.expect(covers(product_set(a, 4), cert.x, cert.a), "A^4 cover");
  }

  for (auto& [name, g] : fixtures::small_groups()) {
    auto s = GenSet::symmetric_closure(g, g.generators());
    for (const auto& h : all_subgroups(g)) {
      auto met = check_coset_counting(g, s, h);
      const std::size_t index = g.order() / h.order();
      for (std::size_t m = 1; m <= index; ++m)
        c.expect((m - 1 < met.size() ? met[m - 1] : index) >= m, name + ": coset counting");
    }
  }

  auto groups = fixtures::small_groups();
  auto factorial = [](std::size_t k) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
  };
  for (int t = 0; t < 50; ++t) {
    const auto& g = groups[rng() % groups.size()].second;
    auto subs = all_subgroups(g);
    const auto& h = subs[rng() % subs.size()];
    auto ker = kernel_of_coset_action(g, h);
    const std::size_t k = g.order() / h.order();
    c.expect(BigInt(g.order() / ker.order()) <= factorial(k), "kernel index <= k!");
    c.expect(ker.is_subgroup_of(h) && ker.is_normal_in(g), "kernel normal in G, inside H");
  }
  for (int t = 0; t < 50; ++t) {
    const auto& g = groups[rng() % groups.size()].second;
    auto s = GenSet::symmetric_closure(g, g.generators());
    auto normals = normal_subgroups(g);
    const auto& n = normals[rng() % normals.size()];
    auto inner = normal_subgroups(n);
    const auto& h0 = inner[rng() % inner.size()];
    const std::size_t k = g.order() / n.order();
    const std::size_t r = word_radius(h0, s);
    auto rep = normal_closure_radius_check(h0, n, g, s, k, r);
    c.expect(rep.radius <= k * r + 2 * k * k, "closure radius");
  }
}

void doubling_scale(Checker& c) {
  auto t = lattice_ball_table(2, 6561);
  auto r = find_doubling_scale(t, 6561, 2, 3, Rational(1, 4), Rational(1, 2));
  c.expect(r.m >= 9 && r.m <= 81, "m in [9, 81], got " + str(r.m));
  c.expect(r.k && *r.k == pow(BigInt(3), 16), "K = 3^16");
  c.expect(r.ratio <= Rational(pow(BigInt(3), 16)), "ratio <= K");

  GrowthTable adv;
  for (std::uint64_t x = 0; x <= 128; ++x)
    adv.beta.push_back(x < 32 ? 1 : x < 64 ? 300 : x < 128 ? 300 * 257 : 300ull * 257 * 257);
  adv.exhausted = true;
  auto a = find_doubling_scale(adv, 65536, 2, 2, Rational(1, 4), Rational(3, 4));
  c.expect(a.m == a.scan.back(), "adversarial table: final scan point");
  c.expect(a.m == 128, "adversarial table: m = 128");
}

void moderate_growth(Checker& c) {
  auto c20 = cycle_graph(20);
  auto fit = moderate_growth_fit(c20, 1);
  c.expect(fit.a == 1, "C20: A = 1, got " + to_string(fit.a));
  auto rep = check_mod_growth_diam(c20, 1, 1);
  c.expect(rep.diam == 10 && Rational(10) >= Rational(20, 3), "C20 diameter bound");

  auto torus = torus_graph(12, 12);
  auto tf = moderate_growth_fit(torus, 2);
  c.expect(tf.a <= 4, "12x12 torus: A <= 4, got " + to_string(tf.a));
  // Exact check of the definition at every n.
  auto d = oracle::distances(torus);
  auto diam = oracle::diameter(d);
  for (std::uint64_t n = 1; n <= diam; ++n)
    c.expect(Rational(oracle::ball_size(d, 0, n)) * tf.a >= pow(Rational(n, diam), 2) * 144, "torus n=" + str(n));
  check_mod_growth_diam(torus, tf.a, 2);
  for (unsigned e = 1; e <= 3; ++e)
    for (const auto& g : {c20, torus, petersen_graph(), hypercube_graph(5)}) {
      auto f = moderate_growth_fit(g, e);
      check_mod_growth_diam(g, f.a, e);
    }
}

void growth_transfer(Checker& c) {
  for (const auto& qc : {fixtures::c6_rot3(), fixtures::torus4_shift()}) {
    auto q = build_quotient(qc.inst.graph, qc.inst.action, qc.h);
    auto diam = diameter(qc.inst.graph);
    auto rep = growth_transfer_check(q, 0, diam);
    auto s = ball_gen_set(qc.inst.graph, qc.inst.action, 0);
    c.expect(rep.k == word_radius(qc.h, s), qc.name + ": shift k");
    c.expect(rep.rows.size() == diam + 1, qc.name + ": rows");
    for (const auto& row : rep.rows) {
      c.expect(rep.fibre * row.beta_quot >= row.beta_base, qc.name + ": lower display");
      c.expect(rep.fibre * row.beta_quot <= row.beta_base_shift, qc.name + ": upper display");
      if (row.m >= 1) {
        c.expect(row.s_m == rep.stabilizer * row.beta_quot, qc.name + ": |S^m|");
        c.expect(rep.stabilizer * row.beta_base <= rep.fibre * row.s_m, qc.name + ": stabilizer display");
      }
    }
  }
}

void mixing(Checker& c) {
  std::vector<double> t;
  for (std::size_t n : {16, 32, 64}) {
    auto r = mixing_time_tv(cycle_graph(n));
    c.expect(r.exact, "exact walk on C" + str(n));
    t.push_back(double(r.t_mix));
    auto s = spectral_gap(cycle_graph(n));
    double closed = 0.5 * (1 - std::cos(2 * std::numbers::pi / double(n)));
    c.expect(std::abs(s.gap - closed) <= 1e-8, "gap C" + str(n));
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    double ratio = t[i] / t[i - 1];
    c.expect(ratio >= 3.3 && ratio <= 4.7, "t_mix ratio " + std::to_string(ratio));
  }
}

void growth_profile(Checker& c) {
  auto lattice = lattice_ball_table(2, 64);
  auto lf = fit_growth_profile(lattice, 4, 3, 8);
  c.expect(lf.f.pieces() == 1 && lf.f.degrees[0] == 2, "lattice: one degree-2 piece");
  c.expect(lf.max_deviation <= 1.5, "lattice: deviation " + std::to_string(lf.max_deviation));

  const std::size_t side = 24, n = 4;
  auto torus = growth_table(torus_graph(side, side), 0, 48);
  auto tf = fit_growth_profile(torus, n, 2, 12);
  c.expect(tf.f.degrees == std::vector<unsigned>{2, 0}, "torus: degree 2 then 0");
  Rational wrap(side, 2 * n);
  c.expect(tf.f.pieces() == 2 && abs(tf.f.breakpoints[0] - wrap) <= 1, "torus: breakpoint near " + to_string(wrap));

  auto heis = cayley_ball_lazy(heisenberg_generators(0), 8);
  double slope = loglog_slope(heis, 4, 8);
  c.expect(slope >= 3.2 && slope <= 4.5, "Heisenberg slope " + std::to_string(slope));
}

void structure_search(Checker& c) {
  auto inst = perm_instance("C6/dihedral", cycle_graph(6), cycle_dihedral(6));
  auto r = search_H(inst.graph, inst.action);
  auto rot3 = fixtures::c6_rot3().h;
  bool in_pareto = false;
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const auto& cand = r.candidates[i];
    c.expect(cand.idempotent, "candidate " + str(i) + " not idempotent");
    if (!cand.h.same_elements(rot3)) continue;
    found = i;
    const auto& rep = cand.report;
    bool record = rep.max_fibre_diameter == 3 && rep.max_stabilizer == 2 && rep.nilpotent.step == 1;
    c.expect(record, "<rot3> record");
    in_pareto = std::find(r.pareto.begin(), r.pareto.end(), i) != r.pareto.end();
  }
  c.expect(found.has_value(), "<rot3> enumerated");
  if (found && !in_pareto) {
    std::ostringstream why;
    why << "<rot3> (stab, diam, index) = (" << r.candidates[*found].report.max_stabilizer << ", "
        << r.candidates[*found].report.max_fibre_diameter << ", " << r.candidates[*found].report.nilpotent.index
        << ") is dominated; Pareto set:";
    for (auto i : r.pareto) {
      auto v = objective_vector(r.candidates[i].report);
      why << " #" << i << "(" << v[0] << ", " << v[1] << ", " << v[2] << ")";
    }
    c.expect(false, why.str());
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<void(Checker&)> run;
    double limit_s;  // 0: none
  };
  std::vector<Criterion> criteria{
      {1, "counting identity |S^n| = |G_e| beta(n)", counting_identity, 10},
      {2, "quotient suite", quotient_suite, 0},
      {3, "QI calculus and canonical chains", qi_calculus, 0},
      {4, "approximate groups", approximate_groups, 0},
      {5, "doubling scale", doubling_scale, 1},
      {6, "moderate growth", moderate_growth, 0},
      {7, "growth transfer", growth_transfer, 0},
      {8, "mixing", mixing, 60},
      {9, "growth profile", growth_profile, 0},
      {10, "structure search", structure_search, 0},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Checker c;
    std::string error;
    auto start = std::chrono::steady_clock::now();
    try {
      crit.run(c);
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (crit.limit_s > 0 && secs >= crit.limit_s) c.expect(false, "runtime over " + std::to_string(crit.limit_s) + " s");
    bool ok = error.empty() && c.failed == 0;
    if (!ok) ++failed;
    std::ostringstream line;
    line.precision(3);
    line << (ok ? "[PASS] " : "[FAIL] ") << crit.id << ". " << crit.name << " (" << std::fixed << secs << " s)";
    if (!error.empty()) line << " exception: " << error;
    for (const auto& f : c.failures) line << " | " << f;
    std::cout << line.str() << std::endl;
  }
  std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
