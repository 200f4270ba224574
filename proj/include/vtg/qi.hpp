#pragma once

#include "vtg/graph.hpp"
#include "vtg/quotient.hpp"
#include "vtg/rational.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace vtg {

/// Finite metric space on {0..n-1} given by a full distance matrix.
class MetricSpace {
 public:
  MetricSpace() = default;
  MetricSpace(std::size_t n, std::vector<std::uint64_t> dist);
  /// Graph metric; throws InputError for disconnected graphs.
  static MetricSpace of_graph(const Graph& g);
  /// d_{X/H} on the fibres of a quotient metric.
  static MetricSpace of_quotient_metric(const QuotientMetric& qm);

  std::size_t size() const { return n_; }
  std::uint64_t operator()(std::size_t x, std::size_t y) const { return dist_[x * n_ + y]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> dist_;
};

/// (C, K) with C >= 1, K >= 0.
struct QiParams {
  Rational c = 1;
  Rational k = 0;
  friend bool operator==(const QiParams&, const QiParams&) = default;
};

/// Parameters of g ∘ f for an f with `first` = (C, K) followed by a g with
/// `second` = (D, L): (CD, DK + 2L).
QiParams compose_params(const QiParams& first, const QiParams& second);

struct QiWitness {
  std::shared_ptr<const MetricSpace> source;
  std::shared_ptr<const MetricSpace> target;
  std::vector<std::size_t> map;
  QiParams params;
  bool verified = false;
  /// Least K making the map a (C, K)-quasi-isometry for the stored C.
  Rational min_k = 0;
  /// Pair realising the worst distortion (equal points when the net
  /// condition or nothing dominates).
  std::size_t worst_x = 0;
  std::size_t worst_y = 0;
  /// Largest distance from a target point to the image.
  std::uint64_t net_radius = 0;
};

/// Exhaustive pair check plus the K-net check.
QiWitness verify_qi(std::vector<std::size_t> map, std::shared_ptr<const MetricSpace> source,
                    std::shared_ptr<const MetricSpace> target, const QiParams& params);

/// The map y ↦ some x with f(x) nearest to y (ties: smallest f(x), then
/// smallest x), verified at (C, 3CK).
QiWitness invert_qi(const QiWitness& w);

/// g ∘ f as a map, verified at compose_params(f.params, g.params).
QiWitness compose_qi(const QiWitness& f, const QiWitness& g);

struct ChainReport {
  std::size_t k = 0;            // word radius of H in the ball generating set
  QiWitness projection;         // Γ -> Γ/H, at (1, k)
  QiWitness orbit_map;          // Cay(G_{Γ/H}, S) -> Γ/H, at (1, 1)
  QiWitness orbit_inverse;      // Γ/H -> Cay(G_{Γ/H}, S), at (1, 3)
  QiWitness chain;              // Γ -> Cay(G_{Γ/H}, S), at `certified`
  QiParams certified;           // (1, 3 + 2k)
  QiParams composed;            // compose_params(projection, orbit_inverse) = (1, k + 6)
  bool composed_verified = false;
};

/// Γ -> Γ/H -> Cay(G_{Γ/H}, S) with S the ball generating set of G_{Γ/H}
/// at H(e).
ChainReport canonical_chain(const QuotientSystem& q, Vertex e = 0);

}  // namespace vtg
