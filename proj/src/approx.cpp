#include "vtg/approx.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <bit>

namespace vtg {

namespace {

void require_symmetric_with_identity(const ElementSet& a, const char* what) {
  if (a.empty()) throw InputError(std::string(what) + ": empty set");
  if (!a.contains(a[0].identity())) throw InputError(std::string(what) + ": set does not contain the identity");
  for (const auto& x : a)
    if (!a.contains(x.inverse())) throw InputError(std::string(what) + ": set is not symmetric");
}

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& b) {
  std::size_t n = 0;
  for (auto w : b) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// Coverage of each translate x A of the universe, one bitset per candidate.
struct CoverProblem {
  std::size_t universe = 0;
  std::vector<GroupElement> candidates;
  std::vector<Bits> coverage;
};

CoverProblem make_cover_problem(const ElementSet& b, const ElementSet& a) {
  CoverProblem p;
  p.universe = b.size();
  const std::size_t words = (b.size() + 63) / 64;
  ElementSet candidates = product(b, inverse_set(a));
  for (const auto& x : candidates) {
    Bits bits(words, 0);
    for (const auto& y : a) {
      if (auto i = b.index_of(x * y)) bits[*i / 64] |= std::uint64_t{1} << (*i % 64);
    }
    p.candidates.push_back(x);
    p.coverage.push_back(std::move(bits));
  }
  return p;
}

ElementSet greedy_cover(const CoverProblem& p) {
  const std::size_t words = (p.universe + 63) / 64;
  Bits uncovered(words, 0);
  for (std::size_t i = 0; i < p.universe; ++i) uncovered[i / 64] |= std::uint64_t{1} << (i % 64);
  ElementSet x;
  std::size_t remaining = p.universe;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < p.candidates.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t w = 0; w < words; ++w)
        gain += static_cast<std::size_t>(std::popcount(p.coverage[c][w] & uncovered[w]));
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best_gain == 0) throw FalsificationError("greedy cover stalled");
    for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~p.coverage[best][w];
    remaining -= best_gain;
    x.insert(p.candidates[best]);
  }
  return x;
}

class ExactCover {
 public:
  ExactCover(const CoverProblem& p, std::uint64_t node_cap) : p_(p), node_cap_(node_cap) {
    words_ = (p.universe + 63) / 64;
    covering_.resize(p.universe);
    std::vector<std::size_t> order(p.candidates.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return popcount(p.coverage[a]) > popcount(p.coverage[b]);
    });
    for (auto c : order) {
      max_cover_ = std::max(max_cover_, popcount(p.coverage[c]));
      for (std::size_t i = 0; i < p.universe; ++i)
        if (p.coverage[c][i / 64] >> (i % 64) & 1) covering_[i].push_back(c);
    }
  }

  /// Indices of a cover of size <= budget, or nullopt.
  std::optional<std::vector<std::size_t>> solve(std::size_t budget) {
    Bits uncovered(words_, 0);
    for (std::size_t i = 0; i < p_.universe; ++i) uncovered[i / 64] |= std::uint64_t{1} << (i % 64);
    std::vector<std::size_t> chosen;
    if (search(uncovered, budget, chosen)) return chosen;
    return std::nullopt;
  }

 private:
  bool search(const Bits& uncovered, std::size_t budget, std::vector<std::size_t>& chosen) {
    if (++nodes_ > node_cap_) throw ResourceError("exact cover search exceeded its node cap");
    std::size_t left = popcount(uncovered);
    if (left == 0) return true;
    if (budget == 0 || left > budget * max_cover_) return false;
    // Branch on the uncovered point with the fewest covering translates.
    std::size_t pivot = p_.universe, fewest = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < p_.universe; ++i) {
      if (!(uncovered[i / 64] >> (i % 64) & 1)) continue;
      if (covering_[i].size() < fewest) {
        fewest = covering_[i].size();
        pivot = i;
      }
    }
    for (auto c : covering_[pivot]) {
      Bits next(uncovered);
      for (std::size_t w = 0; w < words_; ++w) next[w] &= ~p_.coverage[c][w];
      chosen.push_back(c);
      if (search(next, budget - 1, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  }

  const CoverProblem& p_;
  std::uint64_t node_cap_;
  std::uint64_t nodes_ = 0;
  std::size_t words_ = 0;
  std::size_t max_cover_ = 0;
  std::vector<std::vector<std::size_t>> covering_;
};

}  // namespace

bool covers(const ElementSet& b, const ElementSet& x, const ElementSet& a) {
  ElementSet xa = product(x, a);
  return b.is_subset_of(xa);
}

ElementSet ruzsa_cover_disjoint(const ElementSet& b, const ElementSet& a) {
  if (a.empty()) throw InputError("ruzsa_cover: A is empty");
  ElementSet a_inv = inverse_set(a);
  ElementSet used;
  ElementSet x;
  for (const auto& y : b) {
    bool disjoint = true;
    for (const auto& z : a_inv)
      if (used.contains(y * z)) {
        disjoint = false;
        break;
      }
    if (!disjoint) continue;
    x.insert(y);
    for (const auto& z : a_inv) used.insert(y * z);
  }
  if (!covers(b, x, product(a_inv, a))) throw FalsificationError("maximal disjoint translates do not cover B");
  return x;
}

ElementSet ruzsa_cover_direct(const ElementSet& b, const ElementSet& a) {
  if (a.empty()) throw InputError("ruzsa_cover: A is empty");
  if (b.empty()) return {};
  auto x = greedy_cover(make_cover_problem(b, a));
  if (!covers(b, x, a)) throw FalsificationError("greedy cover does not cover B");
  return x;
}

ApproxCertificate is_k_approximate(const ElementSet& a, const Rational& k, std::uint64_t node_cap) {
  require_symmetric_with_identity(a, "is_k_approximate");
  ApproxCertificate cert;
  cert.a = a;
  cert.k = k;
  ElementSet a2 = product(a, a);
  auto problem = make_cover_problem(a2, a);
  const BigInt budget_big = k < 0 ? BigInt(-1) : floor(k);
  auto greedy = greedy_cover(problem);
  if (greedy.size() <= budget_big) {
    cert.x = std::move(greedy);
    cert.verified = true;
    cert.method = "greedy";
  } else {
    cert.method = "exact";
    if (budget_big >= 1) {
      if (a.size() > kExactCoverMaxSize)
        throw ResourceError("exact cover fallback needs |A| <= " + std::to_string(kExactCoverMaxSize));
      auto budget = budget_big.convert_to<std::size_t>();
      ExactCover exact(problem, node_cap);
      if (auto chosen = exact.solve(budget)) {
        for (auto c : *chosen) cert.x.insert(problem.candidates[c]);
        cert.verified = true;
      }
    }
  }
  if (cert.verified && (!covers(a2, cert.x, a) || cert.x.size() > budget_big))
    throw FalsificationError("approximate-group certificate fails A^2 ⊆ XA");
  return cert;
}

ApproxCertificate tripling_to_approx(const ElementSet& a) {
  require_symmetric_with_identity(a, "tripling_to_approx");
  ApproxCertificate cert;
  ElementSet a2 = product(a, a);
  ElementSet a3 = product(a2, a);
  ElementSet a4 = product(a3, a);
  cert.tripling = Rational(a3.size(), a.size());
  cert.a = a2;
  auto ruzsa = ruzsa_cover_disjoint(a4, a);  // A^4 ⊆ X A^{-1} A = X A^2
  auto greedy = ruzsa_cover_direct(a4, a2);
  if (greedy.size() < ruzsa.size()) {
    cert.x = std::move(greedy);
    cert.method = "greedy";
  } else {
    cert.x = std::move(ruzsa);
    cert.method = "ruzsa";
  }
  cert.k = cert.x.size();
  if (!covers(a4, cert.x, a2)) throw FalsificationError("A^4 is not covered by X A^2");
  if (cert.k > pow(cert.tripling, 3)) throw FalsificationError("tripling certificate exceeds K^3");
  cert.verified = true;
  return cert;
}

TriangleReport check_ruzsa_triangle(const ElementSet& u, const ElementSet& v, const ElementSet& w) {
  if (u.empty() || v.empty() || w.empty()) throw InputError("check_ruzsa_triangle: empty set");
  TriangleReport r;
  auto v_inv = inverse_set(v);
  auto w_inv = inverse_set(w);
  r.uw_inv = product(u, w_inv).size();
  r.v = v_inv.size();
  r.uv_inv = product(u, v_inv).size();
  r.vw_inv = product(v, w_inv).size();
  if (r.uw_inv * r.v > r.uv_inv * r.vw_inv) throw FalsificationError("Ruzsa triangle inequality fails");
  return r;
}

HigherProductsReport check_higher_products(const ElementSet& a, std::size_t mmax) {
  require_symmetric_with_identity(a, "check_higher_products");
  if (mmax < 3) throw InputError("check_higher_products needs mmax >= 3");
  HigherProductsReport r;
  r.sizes.assign(mmax + 1, 0);
  ElementSet power = a;
  r.sizes[1] = a.size();
  for (std::size_t m = 2; m <= mmax; ++m) {
    power = product(power, a);
    r.sizes[m] = power.size();
  }
  r.k = Rational(r.sizes[3], a.size());
  for (std::size_t m = 3; m <= mmax; ++m)
    if (Rational(r.sizes[m]) > pow(r.k, m - 2) * a.size())
      throw FalsificationError("|A^m| exceeds K^(m-2) |A| at m = " + std::to_string(m));
  return r;
}

ClosureRadiusReport normal_closure_radius_check(const FiniteGroup& h0, const FiniteGroup& n,
                                                const FiniteGroup& g, const GenSet& s, std::size_t k,
                                                std::size_t r) {
  if (!h0.is_subgroup_of(n) || !h0.is_normal_in(n)) throw InputError("H0 is not normal in N");
  if (!n.is_subgroup_of(g) || !n.is_normal_in(g)) throw InputError("N is not normal in G");
  if (g.order() / n.order() > k) throw InputError("[G:N] exceeds k");
  if (word_radius(h0, s) > r) throw InputError("H0 is not inside S^r");
  ClosureRadiusReport out;
  auto closure = normal_closure(h0, g);
  out.closure_order = closure.order();
  out.radius = word_radius(closure, s);
  out.bound = k * r + 2 * k * k;
  if (out.radius > out.bound) throw FalsificationError("normal closure escapes S^(kr + 2k^2)");
  return out;
}

std::vector<std::size_t> check_coset_counting(const FiniteGroup& g, const GenSet& s, const FiniteGroup& h) {
  auto ids = left_coset_ids(g, h);
  const std::size_t index = g.order() / h.order();
  auto len = word_lengths(s);
  std::vector<std::size_t> first_length(index, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < ids.size(); ++i) first_length[ids[i]] = std::min(first_length[ids[i]], len[i]);
  std::size_t max_len = *std::max_element(first_length.begin(), first_length.end());
  std::vector<std::size_t> met(max_len + 1, 0);
  for (auto l : first_length) ++met[l];
  for (std::size_t j = 1; j < met.size(); ++j) met[j] += met[j - 1];
  for (std::size_t m = 1; m <= index; ++m) {
    std::size_t j = m - 1;
    std::size_t count = j < met.size() ? met[j] : index;
    if (count < m) throw FalsificationError("S^(m-1) meets fewer than m cosets");
  }
  return met;
}

}  // namespace vtg
