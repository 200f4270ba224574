#pragma once

#include "vtg/graph.hpp"
#include "vtg/group.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace vtg {

/// Γ/H together with the fibre map ψ, the induced action φ of G on Γ/H, and
/// the kernel H' of φ. Immutable.
class QuotientSystem {
 public:
  const Graph& base() const { return base_; }
  const Action& action() const { return action_; }
  const FiniteGroup& group() const { return action_.group(); }
  const FiniteGroup& h() const { return h_; }
  const Graph& quotient() const { return quotient_; }
  std::size_t fibre_of(Vertex v) const { return fibre_of_[v]; }
  const std::vector<std::size_t>& fibre_map() const { return fibre_of_; }
  const std::vector<std::vector<Vertex>>& fibres() const { return fibres_; }
  std::size_t fibre_size() const;
  /// H' = { g in G : g H(x) = H(x) for all x }.
  const FiniteGroup& kernel() const { return kernel_; }
  /// φ(g) as a permutation of fibre ids.
  Permutation phi(const GroupElement& g) const;
  /// G_{Γ/H} = φ(G), acting naturally on fibre ids.
  const FiniteGroup& quotient_group() const { return quotient_group_; }
  Action quotient_action() const { return Action::natural(quotient_group_); }

 private:
  friend QuotientSystem build_quotient(const Graph&, const Action&, const FiniteGroup&);
  QuotientSystem(Graph base, Action action, FiniteGroup h)
      : base_(std::move(base)), action_(std::move(action)), h_(std::move(h)) {}
  Graph base_;
  Action action_;
  FiniteGroup h_;
  Graph quotient_;
  std::vector<std::size_t> fibre_of_;
  std::vector<std::vector<Vertex>> fibres_;
  FiniteGroup kernel_;
  FiniteGroup quotient_group_;
};

/// Requires G to act on Γ by automorphisms and to normalise H <= G
/// (InputError otherwise). Fibre ids follow the minimum vertex of each
/// orbit. Checks that φ is well defined, lands in Aut(Γ/H), and that H'
/// contains H with the same orbits and G/H' ≅ G_{Γ/H}.
QuotientSystem build_quotient(const Graph& base, const Action& g, const FiniteGroup& h);

/// Diameter of each fibre in d_Γ. When G is transitive, checks that G
/// permutes the fibres by isometries and that all diameters agree.
std::vector<std::size_t> fibre_diameters(const QuotientSystem& q);

/// d_{X/H} on the H-fibres of a fibre-closed X: shortest chains in which
/// each leg costs its d_Γ-distance and moving within a fibre is free.
class QuotientMetric {
 public:
  static constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();

  std::size_t num_fibres() const { return fibres_.size(); }
  const std::vector<std::vector<Vertex>>& fibres() const { return fibres_; }
  /// Fibre of x, or nullopt when x is not in X.
  std::optional<std::size_t> fibre_of(Vertex x) const;
  std::uint64_t distance(std::size_t fi, std::size_t fj) const { return dist_[fi * fibres_.size() + fj]; }
  std::uint64_t vertex_distance(Vertex x, Vertex y) const;

 private:
  friend QuotientMetric quotient_metric(const Graph&, const Action&, std::span<const Vertex>);
  std::vector<std::vector<Vertex>> fibres_;
  std::vector<std::size_t> fibre_index_;
  std::vector<std::uint64_t> dist_;
};

/// `h` is the action of H on Γ. Throws InputError when X is not a union of
/// H-orbits.
QuotientMetric quotient_metric(const Graph& g, const Action& h, std::span<const Vertex> x);

struct BallPreimageReport {
  std::size_t m = 0;
  std::size_t k = 0;        // word radius of H in S
  std::size_t k_tight = 0;  // least k' with ψ^{-1}(B(H(e), m)) ⊆ B(e, m + k')
  std::size_t ball_size = 0;
  std::size_t preimage_size = 0;
};

/// B(e, m) ⊆ ψ^{-1}(B_{Γ/H}(H(e), m)) ⊆ B(e, m + k), k = word_radius(H, S)
/// with S the ball generating set at e. Pass `k` to skip recomputing it.
BallPreimageReport check_ball_preimage(const QuotientSystem& q, Vertex e, std::size_t m,
                                       std::optional<std::size_t> k = std::nullopt);

struct GenSetImageReport {
  std::size_t n = 0;
  ElementSet image;  // φ(S^n)
  std::size_t stabilizer_image_size = 0;
};

/// φ(S^n) for the ball generating set S of G at e. Checks
/// φ(G_e) = (G_{Γ/H})_{H(e)} and, for n >= 1,
/// φ(S^n) = { γ in G_{Γ/H} : d_{Γ/H}(γ H(e), H(e)) <= n }.
GenSetImageReport quotient_gen_set_image(const QuotientSystem& q, const GenSet& s, std::size_t n,
                                         Vertex e = 0);

struct KernelEnlargementReport {
  std::size_t h_order = 0;
  std::size_t kernel_order = 0;
  std::size_t n = 0;              // word radius of H in S
  std::size_t kernel_radius = 0;  // word radius of H' in S
};

/// Rebuilds the quotient with H' and checks Γ/H' = Γ/H, the same induced
/// group, G_{Γ/H'} ≅ G/H', kernel(H') = H', and H ⊆ S^n ⟹ H' ⊆ S^n for
/// n = word_radius(H, S).
KernelEnlargementReport check_kernel_enlargement(const QuotientSystem& q, const GenSet& s);

// Fibre map CSV: header "vertex,fibre".
std::string format_fibre_csv(const QuotientSystem& q);

}  // namespace vtg
