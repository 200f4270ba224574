#pragma once

#include "vtg/group.hpp"
#include "vtg/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vtg {

struct ApproxCertificate {
  ElementSet a;
  /// The K that was asked for (is_k_approximate) or |X| (tripling_to_approx).
  Rational k;
  ElementSet x;
  bool verified = false;
  /// "greedy" or "exact" for is_k_approximate; "ruzsa" or "greedy" for
  /// tripling_to_approx.
  std::string method;
  /// Tripling constant |A^3|/|A| of the generating set (tripling_to_approx).
  Rational tripling;
};

/// Maximal X ⊆ B (scanned in B's order) whose translates x A^{-1} are
/// pairwise disjoint; then B ⊆ X A^{-1} A.
ElementSet ruzsa_cover_disjoint(const ElementSet& b, const ElementSet& a);
/// Greedy set cover B ⊆ X A. Candidates are B A^{-1} in product order; each
/// step takes the first candidate covering the most uncovered points.
ElementSet ruzsa_cover_direct(const ElementSet& b, const ElementSet& a);
/// Exhaustive membership check of B ⊆ X A.
bool covers(const ElementSet& b, const ElementSet& x, const ElementSet& a);

inline constexpr std::size_t kExactCoverMaxSize = 64;
inline constexpr std::uint64_t kExactCoverNodeCap = 50'000'000;

/// Decides whether A^2 ⊆ X A for some |X| <= K. Greedy first; a greedy
/// failure falls back to exact branch and bound (|A| <= 64, else
/// ResourceError). Only the exact search refutes.
ApproxCertificate is_k_approximate(const ElementSet& a, const Rational& k,
                                   std::uint64_t node_cap = kExactCoverNodeCap);

/// With K = |A^3|/|A|, certifies A^2 as a K'-approximate group with
/// K' = |X| <= K^3 by an explicit cover of A^4 by translates of A^2.
ApproxCertificate tripling_to_approx(const ElementSet& a);

struct TriangleReport {
  std::size_t uw_inv = 0;  // |U W^{-1}|
  std::size_t v = 0;       // |V^{-1}|
  std::size_t uv_inv = 0;  // |U V^{-1}|
  std::size_t vw_inv = 0;  // |V W^{-1}|
};

/// |U W^{-1}| |V^{-1}| <= |U V^{-1}| |V W^{-1}|; FalsificationError if not.
TriangleReport check_ruzsa_triangle(const ElementSet& u, const ElementSet& v, const ElementSet& w);

struct HigherProductsReport {
  Rational k;                      // |A^3| / |A|
  std::vector<std::size_t> sizes;  // sizes[m] = |A^m| for m = 1..mmax (sizes[0] unused)
};

/// |A^m| <= K^{m-2} |A| for 3 <= m <= mmax.
HigherProductsReport check_higher_products(const ElementSet& a, std::size_t mmax);

struct ClosureRadiusReport {
  std::size_t closure_order = 0;
  std::size_t radius = 0;  // word radius of the normal closure of H0
  std::size_t bound = 0;   // k r + 2 k^2
};

/// For H0 ⊲ N ⊲ G with [G:N] <= k and H0 ⊆ S^r: the normal closure of H0
/// in G lies in S^{kr + 2k^2}. Preconditions raise InputError.
ClosureRadiusReport normal_closure_radius_check(const FiniteGroup& h0, const FiniteGroup& n,
                                                const FiniteGroup& g, const GenSet& s, std::size_t k,
                                                std::size_t r);

/// For H <= G: S^{m-1} meets at least m left cosets of H for every
/// m <= [G:H]. Returns the number of cosets met by S^j for j = 0, 1, ...
/// until all are met.
std::vector<std::size_t> check_coset_counting(const FiniteGroup& g, const GenSet& s, const FiniteGroup& h);

}  // namespace vtg
