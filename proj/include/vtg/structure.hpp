#pragma once

#include "vtg/graph.hpp"
#include "vtg/group.hpp"
#include "vtg/qi.hpp"
#include "vtg/quotient.hpp"
#include "vtg/rational.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace vtg {

/// Nilpotent normal subgroup of G_{Γ/H} chosen by least index, then rank,
/// then step.
struct NilpotentPart {
  std::size_t order = 0;
  std::size_t index = 0;
  std::optional<std::size_t> rank;  // nullopt: rank above kMaxExactRank
  std::size_t step = 0;
};

struct StructureReport {
  std::string instance;
  std::size_t h_order = 0;       // the H that was passed in
  FiniteGroup h_prime;           // H', used for everything below
  std::size_t quotient_vertices = 0;
  std::size_t quotient_group_order = 0;
  std::size_t max_fibre_diameter = 0;  // (i)
  bool kernel_equal = false;           // (ii) kernel of the H' quotient is H'
  NilpotentPart nilpotent;             // (iii)
  std::size_t gen_set_size = 0;        // (iv) ball generating set of G_{Γ/H}
  std::size_t max_stabilizer = 0;      // (v)
  QiParams certified;                  // (vi) (1, 3 + 2k)
  Rational empirical_k;                // least K the chain map needs at C = 1
  std::size_t k = 0;                   // word radius of H'
  bool chain_verified = false;
};

/// Builds Γ/H, replaces H by the kernel H' and evaluates (i)-(vi) on the
/// H' quotient. G must act transitively (InputError). Cross-checks that
/// the quotient stabilizer is the image of G_e.
StructureReport certify(const Graph& g, const Action& act, const FiniteGroup& h, Vertex e = 0,
                        std::string instance = {});

/// Numeric fields of two reports agree.
bool same_record(const StructureReport& a, const StructureReport& b);

/// Minimised coordinates: stabilizer size, fibre diameter, nilpotent index.
std::array<std::size_t, 3> objective_vector(const StructureReport& r);

struct SearchCandidate {
  FiniteGroup h;
  StructureReport report;
  bool idempotent = false;  // certify(H') reproduces the record
};

struct SearchResult {
  std::vector<SearchCandidate> candidates;  // one per normal subgroup of G
  std::vector<std::size_t> pareto;          // indices of nondominated candidates
  std::size_t best = 0;
};

/// Certifies every normal subgroup of G (at most `cap` elements in G).
/// `best` minimises the weighted sum when weights are given, otherwise the
/// objective vector lexicographically; ties go to the earlier candidate.
/// Certifications run on `workers` threads; the result does not depend on
/// the worker count.
SearchResult search_H(const Graph& g, const Action& act, std::optional<std::array<double, 3>> weights = std::nullopt,
                      std::size_t workers = 1, std::size_t cap = 10'000);

inline constexpr std::size_t kCyclicQuotientCap = 2000;

struct CyclicQuotientRecord {
  FiniteGroup g_prime;
  FiniteGroup u;
  std::size_t cyclic_order = 0;   // |G'/U|
  std::size_t s_prime_size = 0;   // |S'| in G'/U
  bool augmented = false;         // S ∩ G' did not generate G'/U
  std::size_t diam_quotient = 0;  // diam_{S'}(G'/U)
  std::size_t diam_g = 0;         // diam_S(G)
  Rational ratio;
};

/// Over U ⊲ G' ⊲ G with G'/U cyclic, the pair maximising diam_{S'}(G'/U),
/// S' the image of S ∩ G', augmented by shortest elements of G' (and their
/// inverses) until it generates. Ties go to the first pair found, G' in
/// normal-subgroup order and U likewise.
CyclicQuotientRecord cyclic_quotient_search(const GenSet& s, std::size_t cap = kCyclicQuotientCap);

}  // namespace vtg
