#pragma once

#include "vtg/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace vtg {

/// Materialization cap for closures and product sets.
inline constexpr std::size_t kDefaultElementCap = 2'000'000;

enum class ElementKind { permutation, matrix, vector };

/// A bijection of {0, ..., n-1}. Composition is right-to-left:
/// (g * h)(x) = g(h(x)).
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `images` is a bijection.
  explicit Permutation(std::vector<std::uint32_t> images);
  static Permutation identity(std::size_t degree);
  /// Builds from disjoint cycles; points not mentioned are fixed.
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<std::uint32_t>>& cycles);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator[](std::size_t x) const { return images_[x]; }
  std::span<const std::uint32_t> images() const { return images_; }

  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  bool is_identity() const;
  /// Disjoint-cycle notation over 0-based points, "()" for the identity.
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

/// Square integer matrix, optionally with entries reduced modulo `modulus`
/// (modulus 0 means the integers). Entries are arbitrary precision.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t dim, std::vector<BigInt> entries, BigInt modulus = 0);
  static IntMatrix identity(std::size_t dim, BigInt modulus = 0);

  std::size_t dim() const { return dim_; }
  const BigInt& modulus() const { return modulus_; }
  const BigInt& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  std::span<const BigInt> entries() const { return entries_; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  /// Throws InputError when the matrix is not invertible over its ring.
  IntMatrix inverse() const;
  bool is_identity() const;
  /// Row-major entries separated by spaces.
  std::string to_string() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend bool operator<(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t dim_ = 0;
  BigInt modulus_ = 0;
  std::vector<BigInt> entries_;
};

/// Element of Z^d or of a product of cyclic groups, under addition.
/// moduli[i] == 0 means coordinate i ranges over the integers.
class IntVector {
 public:
  IntVector() = default;
  IntVector(std::vector<std::int64_t> coords, std::vector<std::int64_t> moduli);
  static IntVector zero(std::vector<std::int64_t> moduli);

  std::size_t dim() const { return coords_.size(); }
  std::span<const std::int64_t> coords() const { return coords_; }
  std::span<const std::int64_t> moduli() const { return moduli_; }

  IntVector operator*(const IntVector& rhs) const;  // addition
  IntVector inverse() const;
  bool is_identity() const;
  std::string to_string() const;

  friend bool operator==(const IntVector&, const IntVector&) = default;
  friend auto operator<=>(const IntVector&, const IntVector&) = default;

 private:
  std::vector<std::int64_t> coords_;
  std::vector<std::int64_t> moduli_;
};

/// Group element with exact equality and a cached hash.
class GroupElement {
 public:
  using Repr = std::variant<Permutation, IntMatrix, IntVector>;

  GroupElement();
  GroupElement(Permutation p);
  GroupElement(IntMatrix m);
  GroupElement(IntVector v);

  ElementKind kind() const;
  const Repr& repr() const { return repr_; }
  const Permutation& permutation() const;
  const IntMatrix& matrix() const;
  const IntVector& vector() const;

  /// Throws InputError when the operands have incompatible shapes.
  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;
  /// Identity of the same shape.
  GroupElement identity() const;
  bool is_identity() const;
  std::size_t hash() const { return hash_; }
  std::string to_string() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.hash_ == b.hash_ && a.repr_ == b.repr_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b);

 private:
  void rehash();
  Repr repr_;
  std::size_t hash_ = 0;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

/// g^{-1} h g, the conjugate of h by g.
GroupElement conjugate(const GroupElement& h, const GroupElement& g);
/// [x, y] = x^{-1} y^{-1} x y.
GroupElement commutator(const GroupElement& x, const GroupElement& y);

/// Insertion-ordered set of group elements. Iteration order is the
/// insertion order, which makes every scan in the library deterministic.
class ElementSet {
 public:
  ElementSet() = default;
  ElementSet(std::initializer_list<GroupElement> items);
  explicit ElementSet(std::span<const GroupElement> items);

  /// Returns true when the element was new.
  bool insert(const GroupElement& g);
  bool contains(const GroupElement& g) const { return index_.contains(g); }
  std::optional<std::size_t> index_of(const GroupElement& g) const;
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const GroupElement& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<GroupElement>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool is_subset_of(const ElementSet& other) const;
  /// Same elements, regardless of order.
  bool same_elements(const ElementSet& other) const;

 private:
  std::vector<GroupElement> items_;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index_;
};

ElementSet inverse_set(const ElementSet& a);
/// { a b : a in A, b in B } in scan order (a outer, b inner).
ElementSet product(const ElementSet& a, const ElementSet& b, std::size_t cap = kDefaultElementCap);
/// A^m = { a_1 ... a_m : a_i in A } (not (A u {1})^m). Throws ResourceError
/// when an intermediate set exceeds `cap`.
ElementSet product_set(const ElementSet& a, std::size_t m, std::size_t cap = kDefaultElementCap);

/// A finite group, materialized. Immutable and cheap to copy.
///
/// Elements are stored in breadth-first order of words in the generators,
/// starting with the identity at index 0.
class FiniteGroup {
 public:
  FiniteGroup();  // trivial permutation group of degree 0

  /// Closure of `generators` under multiplication. Throws ResourceError if the
  /// group has more than `cap` elements.
  static FiniteGroup generate(const GroupElement& identity,
                              std::vector<GroupElement> generators,
                              std::size_t cap = kDefaultElementCap);
  /// A group whose element set is already known to be closed (for instance a
  /// stabilizer filtered from a larger group). A small generating set is
  /// chosen greedily in the given order. Throws FalsificationError when the
  /// set turns out not to be closed.
  static FiniteGroup from_elements(const GroupElement& identity, const ElementSet& elements);

  const GroupElement& identity() const;
  const std::vector<GroupElement>& generators() const;
  const ElementSet& elements() const;
  const GroupElement& element(std::size_t i) const { return elements()[i]; }
  std::size_t order() const { return elements().size(); }
  bool contains(const GroupElement& g) const { return elements().contains(g); }
  std::optional<std::size_t> index_of(const GroupElement& g) const { return elements().index_of(g); }

  bool is_subgroup_of(const FiniteGroup& parent) const;
  /// Requires this to be a subgroup of `parent`.
  bool is_normal_in(const FiniteGroup& parent) const;
  bool is_abelian() const;
  bool is_trivial() const { return order() == 1; }
  bool same_elements(const FiniteGroup& other) const;

  /// Checks identity, closure under inversion and composition: exhaustively
  /// if order() <= exhaustive_bound, otherwise on `samples` seeded random
  /// pairs. Throws FalsificationError on failure.
  void verify_group_axioms(std::size_t exhaustive_bound = 2000, std::size_t samples = 20000,
                           std::uint64_t seed = 1) const;

 private:
  struct Impl;
  explicit FiniteGroup(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

std::size_t element_order(const GroupElement& g, std::size_t cap = kDefaultElementCap);

/// Symmetric generating set containing the identity.
class GenSet {
 public:
  /// Validates symmetry, identity membership and generation of `owner`.
  GenSet(FiniteGroup owner, ElementSet elems);
  /// gens, their inverses and the identity, in that interleaved order with
  /// the identity first.
  static GenSet symmetric_closure(FiniteGroup owner, std::span<const GroupElement> gens);

  const FiniteGroup& owner() const { return owner_; }
  const ElementSet& elems() const { return elems_; }
  std::size_t size() const { return elems_.size(); }

 private:
  FiniteGroup owner_;
  ElementSet elems_;
};

/// Action of a finite group on {0, ..., degree-1}.
class Action {
 public:
  using ApplyFn = std::function<std::size_t(const GroupElement&, std::size_t)>;

  Action(FiniteGroup group, std::size_t degree, ApplyFn apply);
  /// Permutation group acting on its points.
  static Action natural(FiniteGroup perm_group);
  /// G acting on its own elements (indexed as in G.elements()) by left
  /// multiplication.
  static Action left_regular(FiniteGroup group);

  const FiniteGroup& group() const { return group_; }
  std::size_t degree() const { return degree_; }
  std::size_t apply(const GroupElement& g, std::size_t x) const { return apply_(g, x); }
  Permutation as_permutation(const GroupElement& g) const;
  /// Same action restricted to a subgroup of group().
  Action restrict_to(const FiniteGroup& subgroup) const;

 private:
  FiniteGroup group_;
  std::size_t degree_;
  ApplyFn apply_;
};

/// Orbit of x under act.group(), by closure under the generators. Sorted.
std::vector<std::size_t> orbit(const Action& act, std::size_t x);
/// All orbits, each sorted, ordered by minimum point.
std::vector<std::vector<std::size_t>> orbits(const Action& act);
bool is_transitive(const Action& act);

/// { g : g(x) = x }.
FiniteGroup stabilizer(const Action& act, std::size_t x);
/// { g : g(x) = y }, in the group's element order.
std::vector<GroupElement> transporter(const Action& act, std::size_t x, std::size_t y);

/// Smallest normal subgroup of `g` containing `h`.
FiniteGroup normal_closure(const FiniteGroup& h, const FiniteGroup& g);
FiniteGroup normal_closure(std::span<const GroupElement> h_gens, const FiniteGroup& g);

/// Subgroup generated by `gens` inside `g` (the identity of g is used).
FiniteGroup subgroup(const FiniteGroup& g, std::span<const GroupElement> gens);
FiniteGroup trivial_subgroup(const FiniteGroup& g);
FiniteGroup intersection(const FiniteGroup& a, const FiniteGroup& b);

/// Left coset labels: result[i] is the coset id of g.element(i) in G/H,
/// with ids assigned in order of first appearance.
std::vector<std::size_t> left_coset_ids(const FiniteGroup& g, const FiniteGroup& h);
std::size_t index_of_subgroup(const FiniteGroup& g, const FiniteGroup& h);

/// Kernel of the action of G on the left cosets G/H. Asserts that the
/// result is normal, contained in H and of index dividing k!.
FiniteGroup kernel_of_coset_action(const FiniteGroup& g, const FiniteGroup& h);

/// One representative per left coset of H, found by breadth-first search
/// over words in S (shortlex order in the order of S). Every representative
/// lies in S^{k-1}, k = [G:H]; throws FalsificationError otherwise.
std::vector<GroupElement> coset_reps_in_ball(const FiniteGroup& g, const GenSet& s,
                                             const FiniteGroup& h);

/// gamma_1 = G, gamma_{i+1} = [gamma_i, G], until it stabilizes. The last
/// entry is the terminal term.
std::vector<FiniteGroup> lower_central_series(const FiniteGroup& g);

inline constexpr std::size_t kMaxExactRank = 6;

struct NilpotencyData {
  bool nilpotent = false;
  std::optional<std::size_t> step;
  /// Minimum size of a generating set; nullopt with rank_overflow set when
  /// no generating set of size <= kMaxExactRank exists.
  std::optional<std::size_t> rank;
  bool rank_overflow = false;
  bool abelian = false;
  bool cyclic = false;
};

/// Default cap on |G| for nilpotency_data.
inline constexpr std::size_t kNilpotencyCap = 20'000;

NilpotencyData nilpotency_data(const FiniteGroup& g, std::size_t cap = kNilpotencyCap);
/// Minimum generating set size (exhaustive over cyclic-subgroup
/// representatives); nullopt when it exceeds max_rank.
std::optional<std::size_t> minimum_generating_set_size(const FiniteGroup& g,
                                                       std::size_t max_rank = kMaxExactRank);
bool is_cyclic(const FiniteGroup& g);

/// Least l with H in S^l (S^0 = {1}), by breadth-first word lengths.
/// Throws ResourceError when some element of H is not reached within
/// `cap` visited elements.
std::size_t word_radius(std::span<const GroupElement> h, const ElementSet& s,
                        std::size_t cap = kDefaultElementCap);
std::size_t word_radius(const FiniteGroup& h, const GenSet& s, std::size_t cap = kDefaultElementCap);

/// Word length of every element of s.owner() (indexed as in its elements).
std::vector<std::size_t> word_lengths(const GenSet& s);

/// Conjugacy classes, each in element order, ordered by first element.
std::vector<std::vector<std::size_t>> conjugacy_classes(const FiniteGroup& g);

/// All normal subgroups, found as joins of conjugacy classes. Ordered by
/// order, then by discovery. Throws ResourceError above `cap` elements.
std::vector<FiniteGroup> normal_subgroups(const FiniteGroup& g, std::size_t cap = 10'000);

/// All subgroups (joins of cyclic subgroups). Intended for small groups.
std::vector<FiniteGroup> all_subgroups(const FiniteGroup& g, std::size_t cap = 512);

// ---------------------------------------------------------------------------
// Group file format:
//
//   # comment
//   permutation <degree>
//   (0 1 2)(3 4)
//
//   matrix <dim> [mod <m>]
//   1 1 0 0 1 0 0 0 1
//
//   vector <dim> [mod <m_1> ... <m_dim>]     (a single m applies to all)
//   1 0
//
// One generator per line after the header.

struct GroupSpec {
  GroupElement identity;
  std::vector<GroupElement> generators;
};

GroupSpec parse_group_text(const std::string& text);
GroupSpec read_group_file(const std::string& path);
std::string format_group_text(const GroupSpec& spec);
/// Parses one element in the same notation as `like`.
GroupElement parse_element(const std::string& text, const GroupElement& like);

}  // namespace vtg
