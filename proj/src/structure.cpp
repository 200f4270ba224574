#include "vtg/structure.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

namespace vtg {

namespace {

NilpotentPart best_nilpotent_part(const FiniteGroup& g) {
  std::optional<NilpotentPart> best;
  auto key = [](const NilpotentPart& p) {
    return std::make_tuple(p.index, p.rank.value_or(kMaxExactRank + 1), p.step);
  };
  for (const auto& n : normal_subgroups(g)) {
    auto data = nilpotency_data(n);
    if (!data.nilpotent) continue;
    NilpotentPart p;
    p.order = n.order();
    p.index = g.order() / n.order();
    p.rank = data.rank;
    p.step = data.step.value_or(0);
    if (!best || key(p) < key(*best)) best = p;
  }
  if (!best) throw FalsificationError("no nilpotent normal subgroup found (the trivial one always is)");
  return *best;
}

}  // namespace

StructureReport certify(const Graph& g, const Action& act, const FiniteGroup& h, Vertex e, std::string instance) {
  if (!is_transitive(act)) throw InputError("certify needs a transitive group");
  StructureReport r;
  r.instance = std::move(instance);
  r.h_order = h.order();
  auto first = build_quotient(g, act, h);
  r.h_prime = first.kernel();
  auto q = build_quotient(g, act, r.h_prime);
  r.quotient_vertices = q.quotient().num_vertices();
  r.quotient_group_order = q.quotient_group().order();
  r.kernel_equal = q.kernel().same_elements(r.h_prime);

  auto diams = fibre_diameters(q);
  r.max_fibre_diameter = *std::max_element(diams.begin(), diams.end());
  r.nilpotent = best_nilpotent_part(q.quotient_group());

  auto qa = q.quotient_action();
  const std::size_t he = q.fibre_of(e);
  r.gen_set_size = ball_gen_set(q.quotient(), qa, he).size();
  r.max_stabilizer = stabilizer(qa, he).order();
  ElementSet image;
  const auto base_stabilizer = stabilizer(act, e);
  for (const auto& x : base_stabilizer.elements()) image.insert(GroupElement(q.phi(x)));
  if (image.size() != r.max_stabilizer) throw FalsificationError("quotient stabilizer is not the image of G_e");

  auto chain = canonical_chain(q, e);
  r.k = chain.k;
  r.certified = chain.certified;
  r.empirical_k = chain.chain.min_k;
  r.chain_verified = chain.chain.verified;
  return r;
}

bool same_record(const StructureReport& a, const StructureReport& b) {
  return a.h_prime.same_elements(b.h_prime) && a.quotient_vertices == b.quotient_vertices &&
         a.quotient_group_order == b.quotient_group_order && a.max_fibre_diameter == b.max_fibre_diameter &&
         a.kernel_equal == b.kernel_equal && a.nilpotent.order == b.nilpotent.order &&
         a.nilpotent.index == b.nilpotent.index && a.nilpotent.rank == b.nilpotent.rank &&
         a.nilpotent.step == b.nilpotent.step && a.gen_set_size == b.gen_set_size &&
         a.max_stabilizer == b.max_stabilizer && a.certified == b.certified && a.empirical_k == b.empirical_k &&
         a.k == b.k && a.chain_verified == b.chain_verified;
}

std::array<std::size_t, 3> objective_vector(const StructureReport& r) {
  return {r.max_stabilizer, r.max_fibre_diameter, r.nilpotent.index};
}

SearchResult search_H(const Graph& g, const Action& act, std::optional<std::array<double, 3>> weights,
                      std::size_t workers, std::size_t cap) {
  if (act.group().order() > cap) throw ResourceError("group exceeds the normal subgroup enumeration cap");
  auto normals = normal_subgroups(act.group(), cap);
  const std::size_t count = normals.size();
  std::vector<SearchCandidate> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i].h = normals[i];
        out[i].report = certify(g, act, normals[i]);
        auto again = certify(g, act, out[i].report.h_prime);
        out[i].idempotent = same_record(out[i].report, again);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  SearchResult result;
  result.candidates = std::move(out);
  const auto& cs = result.candidates;
  for (std::size_t i = 0; i < count; ++i) {
    auto a = objective_vector(cs[i].report);
    bool dominated = false;
    for (std::size_t j = 0; j < count && !dominated; ++j) {
      auto b = objective_vector(cs[j].report);
      bool le = b[0] <= a[0] && b[1] <= a[1] && b[2] <= a[2];
      dominated = le && b != a;
    }
    if (!dominated) result.pareto.push_back(i);
  }
  auto score = [&](std::size_t i) {
    auto v = objective_vector(cs[i].report);
    return (*weights)[0] * double(v[0]) + (*weights)[1] * double(v[1]) + (*weights)[2] * double(v[2]);
  };
  for (std::size_t i = 1; i < count; ++i) {
    bool better = weights ? score(i) < score(result.best)
                          : objective_vector(cs[i].report) < objective_vector(cs[result.best].report);
    if (better) result.best = i;
  }
  return result;
}

namespace {

// Least j >= 1 with x^j in U.
std::size_t coset_order(const GroupElement& x, const FiniteGroup& u, std::size_t limit) {
  GroupElement p = x;
  for (std::size_t j = 1; j <= limit; ++j) {
    if (u.contains(p)) return j;
    p = p * x;
  }
  return 0;
}

std::size_t cyclic_diameter(std::size_t c, const std::vector<std::size_t>& steps) {
  std::vector<std::size_t> dist(c, static_cast<std::size_t>(-1));
  std::vector<std::size_t> queue{0};
  dist[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto x = queue[head];
    for (auto s : steps) {
      auto y = (x + s) % c;
      if (dist[y] == static_cast<std::size_t>(-1)) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return *std::max_element(dist.begin(), dist.end());
}

}  // namespace

CyclicQuotientRecord cyclic_quotient_search(const GenSet& s, std::size_t cap) {
  const FiniteGroup& g = s.owner();
  if (g.order() > cap) throw ResourceError("group exceeds the cyclic quotient search cap");
  auto lens = word_lengths(s);
  CyclicQuotientRecord best;
  best.diam_g = *std::max_element(lens.begin(), lens.end());
  bool found = false;

  for (const auto& gp : normal_subgroups(g, cap)) {
    // Elements of G' ordered by word length in S, then by position in G.
    std::vector<std::size_t> by_length;
    for (std::size_t i = 0; i < g.order(); ++i)
      if (gp.contains(g.element(i))) by_length.push_back(i);
    std::stable_sort(by_length.begin(), by_length.end(),
                     [&](std::size_t a, std::size_t b) { return lens[a] < lens[b]; });

    for (const auto& u : normal_subgroups(gp, cap)) {
      const std::size_t c = gp.order() / u.order();
      std::optional<GroupElement> generator;
      for (const auto& x : gp.elements())
        if (coset_order(x, u, c) == c) {
          generator = x;
          break;
        }
      if (!generator) continue;

      auto ids = left_coset_ids(gp, u);
      std::vector<std::size_t> exponent_of_coset(c, 0);
      GroupElement p = gp.identity();
      for (std::size_t j = 0; j < c; ++j) {
        exponent_of_coset[ids[*gp.index_of(p)]] = j;
        p = p * *generator;
      }
      auto residue = [&](std::size_t g_index) {
        return exponent_of_coset[ids[*gp.index_of(g.element(g_index))]];
      };

      std::vector<bool> in_s(c, false);
      std::size_t span = c;  // residues generate the subgroup of multiples of gcd
      for (const auto& x : s.elems())
        if (gp.contains(x)) {
          auto r = residue(*g.index_of(x));
          in_s[r] = true;
          span = std::gcd(span, r);
        }
      bool augmented = false;
      for (auto i : by_length) {
        if (span == 1) break;
        auto r = residue(i);
        if (r % span == 0) continue;
        in_s[r] = in_s[(c - r) % c] = true;
        span = std::gcd(span, r);
        augmented = true;
      }
      std::vector<std::size_t> steps;
      for (std::size_t r = 0; r < c; ++r)
        if (in_s[r]) steps.push_back(r);
      const std::size_t diam = cyclic_diameter(c, steps);
      if (!found || diam > best.diam_quotient) {
        found = true;
        best.g_prime = gp;
        best.u = u;
        best.cyclic_order = c;
        best.s_prime_size = steps.size();
        best.augmented = augmented;
        best.diam_quotient = diam;
      }
    }
  }
  if (!found) throw FalsificationError("no cyclic quotient found (G/G is always one)");
  best.ratio = best.diam_g == 0 ? Rational(1) : Rational(best.diam_quotient, best.diam_g);
  return best;
}

}  // namespace vtg
