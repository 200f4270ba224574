#pragma once

#include "vtg/group.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vtg {

using Vertex = std::size_t;
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Finite simple undirected graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  /// Throws InputError on loops, out-of-range endpoints, or (unless
  /// `merge_duplicates`) repeated edges.
  static Graph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                          bool merge_duplicates = false);

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const;
  std::span<const std::uint32_t> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const;
  /// The common degree, or nullopt for irregular (or empty) graphs.
  std::optional<std::size_t> regular_degree() const;
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
};

/// beta[r] = |B(x, r)| for r = 0..radius().
struct GrowthTable {
  std::vector<std::uint64_t> beta;
  /// Whole graph (or group) was reached within the table.
  bool exhausted = false;

  std::size_t radius() const { return beta.empty() ? 0 : beta.size() - 1; }
  std::uint64_t operator[](std::size_t r) const { return beta.at(r); }
  /// beta(0) = 1 and nondecreasing; throws InputError otherwise.
  void validate() const;
  /// Also strictly increasing until the first repeated value and constant
  /// after it, as for any connected graph. Throws FalsificationError.
  void validate_graph_table() const;
};

std::vector<std::uint32_t> distances_from(const Graph& g, Vertex x);
/// Flat n*n matrix, row-major.
std::vector<std::uint32_t> all_pairs_distances(const Graph& g);
bool is_connected(const Graph& g);
/// Throws InputError for disconnected graphs.
std::size_t diameter(const Graph& g);
std::size_t eccentricity(const Graph& g, Vertex x);

/// Sorted vertices at distance <= r from x.
std::vector<Vertex> ball(const Graph& g, Vertex x, std::size_t r);
GrowthTable growth_table(const Graph& g, Vertex x, std::size_t radius);

/// Vertex i is g.element(i); x ~ y iff x != y and y = x s for some s in S.
Graph cayley_graph(const FiniteGroup& g, const GenSet& s);

/// Growth of the Cayley graph of <gens> at the identity, without
/// materializing the group. `gens` must be closed under inversion.
GrowthTable cayley_ball_lazy(std::span<const GroupElement> gens, std::size_t radius,
                             std::size_t cap = kDefaultElementCap);

inline constexpr std::size_t kAutomorphismVertexCap = 256;

bool is_automorphism(const Graph& g, const Permutation& p);
/// Full automorphism group as a permutation group on the vertices.
FiniteGroup automorphism_group(const Graph& g, std::size_t vertex_cap = kAutomorphismVertexCap,
                               std::size_t order_cap = kDefaultElementCap);

/// Throws InputError when `act` is not an action by automorphisms.
void check_acts_by_automorphisms(const Graph& g, const Action& act);
bool is_vertex_transitive(const Graph& g);
bool is_vertex_transitive(const Graph& g, const Action& act);

/// S = { g : d(g(e), e) <= 1 }. Asserts that S^n = { g : g(e) in B(e, n) }
/// for every n >= 1.
GenSet ball_gen_set(const Graph& g, const Action& act, Vertex e = 0);

// Graph file: first line "n m", then m lines "u v" (0-based).
Graph parse_graph_text(const std::string& text);
Graph read_graph_file(const std::string& path);
std::string format_graph_text(const Graph& g);

// Growth CSV: header "r,beta", one row per radius.
std::string format_growth_csv(const GrowthTable& t);
GrowthTable parse_growth_csv(const std::string& text);

}  // namespace vtg
