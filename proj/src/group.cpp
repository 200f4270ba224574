#include "vtg/group.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace vtg {

namespace {

inline std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

BigInt reduce_mod(const BigInt& x, const BigInt& m) {
  if (m == 0) return x;
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

std::int64_t reduce_mod(std::int64_t x, std::int64_t m) {
  if (m == 0) return x;
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<BigInt> mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt old_r = reduce_mod(a, m), r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  return reduce_mod(old_s, m);
}

}  // namespace

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto y : images_) {
    if (y >= images_.size() || seen[y]) throw InputError("permutation images are not a bijection");
    seen[y] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<std::uint32_t> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  Permutation p;
  p.images_ = std::move(images);
  return p;
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     const std::vector<std::vector<std::uint32_t>>& cycles) {
  std::vector<std::uint32_t> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> used(degree, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      auto x = cycle[i];
      if (x >= degree) throw InputError("cycle point out of range");
      if (used[x]) throw InputError("cycles are not disjoint");
      used[x] = true;
      images[x] = cycle[(i + 1) % cycle.size()];
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (degree() != rhs.degree()) throw InputError("composing permutations of different degree");
  Permutation out;
  out.images_.resize(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) out.images_[x] = images_[rhs.images_[x]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.images_.resize(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) out.images_[images_[x]] = static_cast<std::uint32_t>(x);
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < images_.size(); ++x)
    if (images_[x] != x) return false;
  return true;
}

std::string Permutation::to_string() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (seen[x] || images_[x] == x) continue;
    out += '(';
    std::size_t y = x;
    bool first = true;
    while (!seen[y]) {
      seen[y] = true;
      if (!first) out += ' ';
      out += std::to_string(y);
      first = false;
      y = images_[y];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t dim, std::vector<BigInt> entries, BigInt modulus)
    : dim_(dim), modulus_(std::move(modulus)), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) throw InputError("matrix entry count does not match dimension");
  if (modulus_ < 0 || modulus_ == 1) throw InputError("matrix modulus must be 0 or >= 2");
  for (auto& e : entries_) e = reduce_mod(e, modulus_);
}

IntMatrix IntMatrix::identity(std::size_t dim, BigInt modulus) {
  std::vector<BigInt> entries(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) entries[i * dim + i] = 1;
  return IntMatrix(dim, std::move(entries), std::move(modulus));
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (dim_ != rhs.dim_ || modulus_ != rhs.modulus_) throw InputError("composing incompatible matrices");
  IntMatrix out;
  out.dim_ = dim_;
  out.modulus_ = modulus_;
  out.entries_.assign(dim_ * dim_, 0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const BigInt& a = entries_[i * dim_ + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) out.entries_[i * dim_ + j] += a * rhs.entries_[k * dim_ + j];
    }
  }
  if (modulus_ != 0)
    for (auto& e : out.entries_) e = reduce_mod(e, modulus_);
  return out;
}

IntMatrix IntMatrix::inverse() const {
  // Gauss-Jordan over the rationals, then map back into the ring.
  const std::size_t n = dim_;
  std::vector<Rational> a(n * 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * 2 * n + j] = Rational(entries_[i * n + j]);
    a[i * 2 * n + n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * 2 * n + col] == 0) ++pivot;
    if (pivot == n) throw InputError("matrix is singular");
    if (pivot != col)
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(a[pivot * 2 * n + j], a[col * 2 * n + j]);
    Rational inv = Rational(1) / a[col * 2 * n + col];
    for (std::size_t j = 0; j < 2 * n; ++j) a[col * 2 * n + j] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i * 2 * n + col] == 0) continue;
      Rational f = a[i * 2 * n + col];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i * 2 * n + j] -= f * a[col * 2 * n + j];
    }
  }
  std::vector<BigInt> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& q = a[i * 2 * n + n + j];
      if (modulus_ == 0) {
        if (denominator(q) != 1) throw InputError("matrix is not invertible over the integers");
        out[i * n + j] = numerator(q);
      } else {
        auto inv = mod_inverse(denominator(q), modulus_);
        if (!inv) throw InputError("matrix is not invertible modulo " + modulus_.str());
        out[i * n + j] = reduce_mod(numerator(q) * *inv, modulus_);
      }
    }
  }
  return IntMatrix(n, std::move(out), modulus_);
}

bool IntMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (entries_[i * dim_ + j] != (i == j ? 1 : 0)) return false;
  return true;
}

std::string IntMatrix::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ' ';
    out += entries_[i].str();
  }
  return out;
}

bool operator<(const IntMatrix& a, const IntMatrix& b) {
  if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
  if (a.modulus_ != b.modulus_) return a.modulus_ < b.modulus_;
  return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                                      b.entries_.end());
}

// ---------------------------------------------------------------------------
// IntVector

IntVector::IntVector(std::vector<std::int64_t> coords, std::vector<std::int64_t> moduli)
    : coords_(std::move(coords)), moduli_(std::move(moduli)) {
  if (coords_.size() != moduli_.size()) throw InputError("vector and moduli lengths differ");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (moduli_[i] < 0 || moduli_[i] == 1) throw InputError("vector modulus must be 0 or >= 2");
    coords_[i] = reduce_mod(coords_[i], moduli_[i]);
  }
}

IntVector IntVector::zero(std::vector<std::int64_t> moduli) {
  std::vector<std::int64_t> coords(moduli.size(), 0);
  return IntVector(std::move(coords), std::move(moduli));
}

IntVector IntVector::operator*(const IntVector& rhs) const {
  if (moduli_ != rhs.moduli_) throw InputError("adding incompatible vectors");
  IntVector out;
  out.moduli_ = moduli_;
  out.coords_.resize(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    std::int64_t sum;
    if (__builtin_add_overflow(coords_[i], rhs.coords_[i], &sum))
      throw ResourceError("integer vector coordinate overflow");
    out.coords_[i] = reduce_mod(sum, moduli_[i]);
  }
  return out;
}

IntVector IntVector::inverse() const {
  IntVector out;
  out.moduli_ = moduli_;
  out.coords_.resize(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) out.coords_[i] = reduce_mod(-coords_[i], moduli_[i]);
  return out;
}

bool IntVector::is_identity() const {
  return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

std::string IntVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(coords_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement::GroupElement() : repr_(Permutation::identity(0)) { rehash(); }
GroupElement::GroupElement(Permutation p) : repr_(std::move(p)) { rehash(); }
GroupElement::GroupElement(IntMatrix m) : repr_(std::move(m)) { rehash(); }
GroupElement::GroupElement(IntVector v) : repr_(std::move(v)) { rehash(); }

void GroupElement::rehash() {
  std::size_t h = repr_.index();
  if (auto* p = std::get_if<Permutation>(&repr_)) {
    for (auto y : p->images()) h = mix(h, y);
  } else if (auto* m = std::get_if<IntMatrix>(&repr_)) {
    h = mix(h, m->dim());
    for (const auto& e : m->entries()) h = mix(h, std::hash<BigInt>{}(e));
  } else {
    const auto& v = std::get<IntVector>(repr_);
    for (auto c : v.coords()) h = mix(h, std::hash<std::int64_t>{}(c));
  }
  hash_ = h;
}

ElementKind GroupElement::kind() const {
  switch (repr_.index()) {
    case 0: return ElementKind::permutation;
    case 1: return ElementKind::matrix;
    default: return ElementKind::vector;
  }
}

const Permutation& GroupElement::permutation() const {
  if (auto* p = std::get_if<Permutation>(&repr_)) return *p;
  throw InputError("group element is not a permutation");
}

const IntMatrix& GroupElement::matrix() const {
  if (auto* m = std::get_if<IntMatrix>(&repr_)) return *m;
  throw InputError("group element is not a matrix");
}

const IntVector& GroupElement::vector() const {
  if (auto* v = std::get_if<IntVector>(&repr_)) return *v;
  throw InputError("group element is not a vector");
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (repr_.index() != rhs.repr_.index()) throw InputError("composing elements of different kinds");
  return std::visit(
      [&](const auto& a) -> GroupElement {
        using T = std::decay_t<decltype(a)>;
        return GroupElement(a * std::get<T>(rhs.repr_));
      },
      repr_);
}

GroupElement GroupElement::inverse() const {
  return std::visit([](const auto& a) { return GroupElement(a.inverse()); }, repr_);
}

GroupElement GroupElement::identity() const {
  if (auto* p = std::get_if<Permutation>(&repr_)) return GroupElement(Permutation::identity(p->degree()));
  if (auto* m = std::get_if<IntMatrix>(&repr_)) return GroupElement(IntMatrix::identity(m->dim(), m->modulus()));
  const auto& v = std::get<IntVector>(repr_);
  return GroupElement(IntVector::zero({v.moduli().begin(), v.moduli().end()}));
}

bool GroupElement::is_identity() const {
  return std::visit([](const auto& a) { return a.is_identity(); }, repr_);
}

std::string GroupElement::to_string() const {
  return std::visit([](const auto& a) { return a.to_string(); }, repr_);
}

bool operator<(const GroupElement& a, const GroupElement& b) {
  if (a.repr_.index() != b.repr_.index()) return a.repr_.index() < b.repr_.index();
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return x < std::get<T>(b.repr_);
      },
      a.repr_);
}

GroupElement conjugate(const GroupElement& h, const GroupElement& g) { return g.inverse() * h * g; }

GroupElement commutator(const GroupElement& x, const GroupElement& y) {
  return x.inverse() * y.inverse() * x * y;
}

// ---------------------------------------------------------------------------
// ElementSet

ElementSet::ElementSet(std::initializer_list<GroupElement> items) {
  for (const auto& g : items) insert(g);
}

ElementSet::ElementSet(std::span<const GroupElement> items) {
  for (const auto& g : items) insert(g);
}

bool ElementSet::insert(const GroupElement& g) {
  auto [it, inserted] = index_.try_emplace(g, items_.size());
  if (inserted) items_.push_back(g);
  return inserted;
}

std::optional<std::size_t> ElementSet::index_of(const GroupElement& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  return std::all_of(items_.begin(), items_.end(), [&](const GroupElement& g) { return other.contains(g); });
}

bool ElementSet::same_elements(const ElementSet& other) const {
  return size() == other.size() && is_subset_of(other);
}

ElementSet inverse_set(const ElementSet& a) {
  ElementSet out;
  for (const auto& g : a) out.insert(g.inverse());
  return out;
}

ElementSet product(const ElementSet& a, const ElementSet& b, std::size_t cap) {
  ElementSet out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      out.insert(x * y);
      if (out.size() > cap) throw ResourceError("product set exceeds cap of " + std::to_string(cap));
    }
  }
  return out;
}

ElementSet product_set(const ElementSet& a, std::size_t m, std::size_t cap) {
  if (a.empty()) throw InputError("product_set of an empty set");
  if (m == 0) throw InputError("product_set needs m >= 1");
  ElementSet current = a;
  for (std::size_t i = 1; i < m; ++i) current = product(current, a, cap);
  return current;
}

// ---------------------------------------------------------------------------
// FiniteGroup

struct FiniteGroup::Impl {
  GroupElement identity;
  std::vector<GroupElement> generators;
  ElementSet elements;
};

namespace {

// Adds `g` to a closed set `elems` generated by `gens`, re-closing it.
void extend_closure(ElementSet& elems, std::vector<GroupElement>& gens, const GroupElement& g,
                    std::size_t cap) {
  if (elems.contains(g)) return;
  gens.push_back(g);
  std::deque<std::size_t> queue;
  const std::size_t old_size = elems.size();
  for (std::size_t i = 0; i < old_size; ++i) {
    if (elems.insert(elems[i] * g)) queue.push_back(elems.size() - 1);
    if (elems.size() > cap) throw ResourceError("group closure exceeds cap of " + std::to_string(cap));
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      if (elems.insert(elems[i] * s)) queue.push_back(elems.size() - 1);
      if (elems.size() > cap) throw ResourceError("group closure exceeds cap of " + std::to_string(cap));
    }
  }
}

}  // namespace

FiniteGroup::FiniteGroup() {
  auto impl = std::make_shared<Impl>();
  impl->identity = GroupElement(Permutation::identity(0));
  impl->elements.insert(impl->identity);
  impl_ = std::move(impl);
}

FiniteGroup::FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

FiniteGroup FiniteGroup::generate(const GroupElement& identity, std::vector<GroupElement> generators,
                                  std::size_t cap) {
  if (!identity.is_identity()) throw InputError("generate: supplied identity is not an identity");
  auto impl = std::make_shared<Impl>();
  impl->identity = identity;
  ElementSet distinct;
  for (const auto& g : generators) {
    (void)(identity * g);  // shape check
    if (!g.is_identity() && distinct.insert(g)) impl->generators.push_back(g);
  }
  impl->elements.insert(identity);
  for (std::size_t i = 0; i < impl->elements.size(); ++i) {
    for (const auto& s : impl->generators) {
      impl->elements.insert(impl->elements[i] * s);
      if (impl->elements.size() > cap)
        throw ResourceError("group closure exceeds cap of " + std::to_string(cap));
    }
  }
  return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::from_elements(const GroupElement& identity, const ElementSet& elements) {
  if (!elements.contains(identity)) throw FalsificationError("element set does not contain the identity");
  ElementSet closure;
  closure.insert(identity);
  std::vector<GroupElement> gens;
  for (const auto& g : elements) {
    if (closure.contains(g)) continue;
    try {
      extend_closure(closure, gens, g, elements.size());
    } catch (const ResourceError&) {
      throw FalsificationError("element set is not closed under multiplication");
    }
  }
  if (closure.size() != elements.size() || !closure.is_subset_of(elements))
    throw FalsificationError("element set is not closed under multiplication");
  auto impl = std::make_shared<Impl>();
  impl->identity = identity;
  impl->generators = std::move(gens);
  impl->elements.insert(identity);
  for (const auto& g : elements) impl->elements.insert(g);
  return FiniteGroup(std::move(impl));
}

const GroupElement& FiniteGroup::identity() const { return impl_->identity; }
const std::vector<GroupElement>& FiniteGroup::generators() const { return impl_->generators; }
const ElementSet& FiniteGroup::elements() const { return impl_->elements; }

bool FiniteGroup::is_subgroup_of(const FiniteGroup& parent) const {
  return elements().is_subset_of(parent.elements());
}

bool FiniteGroup::is_normal_in(const FiniteGroup& parent) const {
  for (const auto& s : parent.generators())
    for (const auto& h : generators())
      if (!contains(conjugate(h, s))) return false;
  return true;
}

bool FiniteGroup::is_abelian() const {
  const auto& gens = generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!(gens[i] * gens[j] == gens[j] * gens[i])) return false;
  return true;
}

bool FiniteGroup::same_elements(const FiniteGroup& other) const {
  return elements().same_elements(other.elements());
}

void FiniteGroup::verify_group_axioms(std::size_t exhaustive_bound, std::size_t samples,
                                      std::uint64_t seed) const {
  const auto& elems = elements();
  if (!elems.contains(identity()) || !identity().is_identity())
    throw FalsificationError("group does not contain its identity");
  for (const auto& g : elems)
    if (!elems.contains(g.inverse())) throw FalsificationError("group not closed under inversion");
  const std::size_t n = elems.size();
  if (n <= exhaustive_bound) {
    for (const auto& a : elems)
      for (const auto& b : elems)
        if (!elems.contains(a * b)) throw FalsificationError("group not closed under composition");
    return;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < samples; ++t) {
    const auto& a = elems[rng() % n];
    const auto& b = elems[rng() % n];
    if (!elems.contains(a * b)) throw FalsificationError("group not closed under composition");
  }
}

std::size_t element_order(const GroupElement& g, std::size_t cap) {
  GroupElement power = g;
  std::size_t k = 1;
  while (!power.is_identity()) {
    power = power * g;
    if (++k > cap) throw ResourceError("element order exceeds cap");
  }
  return k;
}

// ---------------------------------------------------------------------------
// GenSet

GenSet::GenSet(FiniteGroup owner, ElementSet elems) : owner_(std::move(owner)), elems_(std::move(elems)) {
  if (!elems_.contains(owner_.identity())) throw InputError("generating set must contain the identity");
  for (const auto& s : elems_) {
    if (!owner_.contains(s)) throw InputError("generating set element outside its group");
    if (!elems_.contains(s.inverse())) throw InputError("generating set is not symmetric");
  }
  auto generated = FiniteGroup::generate(owner_.identity(), elems_.items(), owner_.order());
  if (generated.order() != owner_.order()) throw InputError("set does not generate its group");
}

GenSet GenSet::symmetric_closure(FiniteGroup owner, std::span<const GroupElement> gens) {
  ElementSet elems;
  elems.insert(owner.identity());
  for (const auto& g : gens) {
    elems.insert(g);
    elems.insert(g.inverse());
  }
  return GenSet(std::move(owner), std::move(elems));
}

// ---------------------------------------------------------------------------
// Action

Action::Action(FiniteGroup group, std::size_t degree, ApplyFn apply)
    : group_(std::move(group)), degree_(degree), apply_(std::move(apply)) {
  if (degree_ > 0) {
    for (std::size_t x = 0; x < degree_; ++x)
      if (apply_(group_.identity(), x) != x) throw InputError("identity does not act trivially");
  }
}

Action Action::natural(FiniteGroup perm_group) {
  std::size_t degree = perm_group.identity().permutation().degree();
  return Action(std::move(perm_group), degree,
                [](const GroupElement& g, std::size_t x) { return std::size_t{g.permutation()[x]}; });
}

Action Action::left_regular(FiniteGroup group) {
  std::size_t degree = group.order();
  FiniteGroup captured = group;
  return Action(std::move(group), degree, [captured](const GroupElement& g, std::size_t x) {
    auto idx = captured.index_of(g * captured.element(x));
    if (!idx) throw InputError("left_regular: element outside the group");
    return *idx;
  });
}

Permutation Action::as_permutation(const GroupElement& g) const {
  std::vector<std::uint32_t> images(degree_);
  for (std::size_t x = 0; x < degree_; ++x) images[x] = static_cast<std::uint32_t>(apply_(g, x));
  return Permutation(std::move(images));
}

Action Action::restrict_to(const FiniteGroup& subgroup) const {
  return Action(subgroup, degree_, apply_);
}

std::vector<std::size_t> orbit(const Action& act, std::size_t x) {
  if (x >= act.degree()) throw InputError("orbit: point outside the domain");
  std::vector<bool> seen(act.degree(), false);
  std::vector<std::size_t> out{x};
  seen[x] = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& s : act.group().generators()) {
      std::size_t y = act.apply(s, out[i]);
      if (!seen[y]) {
        seen[y] = true;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::size_t>> orbits(const Action& act) {
  std::vector<bool> seen(act.degree(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t x = 0; x < act.degree(); ++x) {
    if (seen[x]) continue;
    auto o = orbit(act, x);
    for (auto y : o) seen[y] = true;
    out.push_back(std::move(o));
  }
  return out;
}

bool is_transitive(const Action& act) {
  return act.degree() == 0 || orbit(act, 0).size() == act.degree();
}

FiniteGroup stabilizer(const Action& act, std::size_t x) {
  if (x >= act.degree()) throw InputError("stabilizer: point outside the domain");
  ElementSet fixed;
  for (const auto& g : act.group().elements())
    if (act.apply(g, x) == x) fixed.insert(g);
  return FiniteGroup::from_elements(act.group().identity(), fixed);
}

std::vector<GroupElement> transporter(const Action& act, std::size_t x, std::size_t y) {
  std::vector<GroupElement> out;
  for (const auto& g : act.group().elements())
    if (act.apply(g, x) == y) out.push_back(g);
  return out;
}

// ---------------------------------------------------------------------------
// Subgroups

FiniteGroup subgroup(const FiniteGroup& g, std::span<const GroupElement> gens) {
  return FiniteGroup::generate(g.identity(), {gens.begin(), gens.end()}, g.order());
}

FiniteGroup trivial_subgroup(const FiniteGroup& g) { return FiniteGroup::generate(g.identity(), {}); }

FiniteGroup intersection(const FiniteGroup& a, const FiniteGroup& b) {
  ElementSet common;
  for (const auto& x : a.elements())
    if (b.contains(x)) common.insert(x);
  return FiniteGroup::from_elements(a.identity(), common);
}

FiniteGroup normal_closure(std::span<const GroupElement> h_gens, const FiniteGroup& g) {
  ElementSet elems;
  elems.insert(g.identity());
  std::vector<GroupElement> gens;
  for (const auto& h : h_gens) extend_closure(elems, gens, h, g.order());
  // Close the generator list under conjugation by generators of g; a
  // subgroup whose generators' conjugates stay inside is normal.
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (const auto& s : g.generators()) {
      GroupElement c = conjugate(gens[i], s);
      if (!elems.contains(c)) extend_closure(elems, gens, c, g.order());
    }
  }
  return FiniteGroup::from_elements(g.identity(), elems);
}

FiniteGroup normal_closure(const FiniteGroup& h, const FiniteGroup& g) {
  return normal_closure(h.generators(), g);
}

std::vector<std::size_t> left_coset_ids(const FiniteGroup& g, const FiniteGroup& h) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> ids(g.order(), kUnset);
  std::size_t next = 0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (ids[i] != kUnset) continue;
    for (const auto& x : h.elements()) {
      auto j = g.index_of(g.element(i) * x);
      if (!j) throw InputError("left_coset_ids: H is not contained in G");
      ids[*j] = next;
    }
    ++next;
  }
  return ids;
}

std::size_t index_of_subgroup(const FiniteGroup& g, const FiniteGroup& h) {
  if (g.order() % h.order() != 0) throw InputError("subgroup order does not divide group order");
  return g.order() / h.order();
}

FiniteGroup kernel_of_coset_action(const FiniteGroup& g, const FiniteGroup& h) {
  if (!h.is_subgroup_of(g)) throw InputError("kernel_of_coset_action: H is not a subgroup of G");
  auto ids = left_coset_ids(g, h);
  std::vector<GroupElement> reps;
  {
    std::size_t next = 0;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == next) {
        reps.push_back(g.element(i));
        ++next;
      }
  }
  ElementSet kernel;
  for (const auto& x : g.elements()) {
    bool fixes_all = std::all_of(reps.begin(), reps.end(),
                                 [&](const GroupElement& r) { return h.contains(conjugate(x, r)); });
    if (fixes_all) kernel.insert(x);
  }
  auto out = FiniteGroup::from_elements(g.identity(), kernel);
  const std::size_t k = reps.size();
  BigInt k_factorial = 1;
  for (std::size_t i = 2; i <= k; ++i) k_factorial *= i;
  const std::size_t index = g.order() / out.order();
  if (!out.is_subgroup_of(h) || !out.is_normal_in(g) || k_factorial % index != 0)
    throw FalsificationError("coset-action kernel violates [G:H'] | k!, H' <= H or normality");
  return out;
}

std::vector<GroupElement> coset_reps_in_ball(const FiniteGroup& g, const GenSet& s, const FiniteGroup& h) {
  auto ids = left_coset_ids(g, h);
  const std::size_t k = g.order() / h.order();
  std::vector<GroupElement> reps;
  std::vector<bool> coset_seen(k, false);
  std::vector<int> depth(g.order(), -1);
  std::deque<std::size_t> queue{0};
  depth[0] = 0;
  coset_seen[ids[0]] = true;
  reps.push_back(g.identity());
  while (!queue.empty() && reps.size() < k) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const auto& x : s.elems()) {
      auto j = g.index_of(g.element(i) * x);
      if (!j) throw InputError("coset_reps_in_ball: S is not inside G");
      if (depth[*j] >= 0) continue;
      depth[*j] = depth[i] + 1;
      queue.push_back(*j);
      if (!coset_seen[ids[*j]]) {
        coset_seen[ids[*j]] = true;
        if (static_cast<std::size_t>(depth[*j]) + 1 > k)
          throw FalsificationError("coset representative outside S^(k-1)");
        reps.push_back(g.element(*j));
      }
    }
  }
  if (reps.size() != k) throw FalsificationError("coset search stalled before reaching every coset");
  return reps;
}

std::vector<FiniteGroup> lower_central_series(const FiniteGroup& g) {
  std::vector<FiniteGroup> series{g};
  while (true) {
    const auto& current = series.back();
    std::vector<GroupElement> comms;
    for (const auto& a : current.generators())
      for (const auto& s : g.generators()) {
        auto c = commutator(a, s);
        if (!c.is_identity()) comms.push_back(c);
      }
    auto next = normal_closure(comms, g);
    if (next.order() == current.order()) break;
    series.push_back(std::move(next));
  }
  return series;
}

bool is_cyclic(const FiniteGroup& g) {
  if (!g.is_abelian()) return false;
  for (const auto& x : g.elements())
    if (element_order(x, g.order()) == g.order()) return true;
  return false;
}

namespace {

// Key identifying a subgroup of g by its membership pattern.
std::vector<bool> membership_key(const FiniteGroup& g, const ElementSet& elems) {
  std::vector<bool> key(g.order(), false);
  for (const auto& x : elems) key[*g.index_of(x)] = true;
  return key;
}

}  // namespace

std::optional<std::size_t> minimum_generating_set_size(const FiniteGroup& g, std::size_t max_rank) {
  if (g.order() == 1) return 0;
  // Any generating set can be swapped for generators of maximal cyclic
  // subgroups containing its members, so those are the only candidates.
  std::vector<std::vector<bool>> cyclic_keys;
  std::vector<GroupElement> cyclic_gens;
  std::set<std::vector<bool>> seen;
  for (const auto& x : g.elements()) {
    if (x.is_identity()) continue;
    auto c = FiniteGroup::generate(g.identity(), {x}, g.order());
    auto key = membership_key(g, c.elements());
    if (seen.insert(key).second) {
      cyclic_keys.push_back(std::move(key));
      cyclic_gens.push_back(x);
    }
  }
  std::vector<GroupElement> maximal;
  for (std::size_t i = 0; i < cyclic_keys.size(); ++i) {
    bool contained = false;
    for (std::size_t j = 0; j < cyclic_keys.size() && !contained; ++j) {
      if (i == j) continue;
      bool subset = true;
      std::size_t extra = 0;
      for (std::size_t t = 0; t < g.order(); ++t) {
        if (cyclic_keys[i][t] && !cyclic_keys[j][t]) {
          subset = false;
          break;
        }
        if (cyclic_keys[j][t] && !cyclic_keys[i][t]) ++extra;
      }
      contained = subset && extra > 0;
    }
    if (!contained) maximal.push_back(cyclic_gens[i]);
  }
  const std::size_t m = maximal.size();
  for (std::size_t r = 1; r <= max_rank && r <= m; ++r) {
    std::vector<std::size_t> pick(r);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      ElementSet elems;
      elems.insert(g.identity());
      std::vector<GroupElement> gens;
      for (auto p : pick) extend_closure(elems, gens, maximal[p], g.order());
      if (elems.size() == g.order()) return r;
      // next combination
      std::size_t i = r;
      while (i > 0 && pick[i - 1] == m - r + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

NilpotencyData nilpotency_data(const FiniteGroup& g, std::size_t cap) {
  if (g.order() > cap) throw ResourceError("nilpotency_data: group order above cap");
  NilpotencyData out;
  auto series = lower_central_series(g);
  out.nilpotent = series.back().order() == 1;
  if (out.nilpotent) out.step = series.size() - 1;
  out.rank = minimum_generating_set_size(g, kMaxExactRank);
  out.rank_overflow = !out.rank.has_value();
  out.abelian = g.is_abelian();
  out.cyclic = is_cyclic(g);
  return out;
}

std::size_t word_radius(std::span<const GroupElement> h, const ElementSet& s, std::size_t cap) {
  if (h.empty()) return 0;
  if (s.empty()) throw InputError("word_radius: empty generating set");
  ElementSet targets(h);
  const GroupElement identity = s[0].identity();
  std::size_t remaining = targets.size();
  ElementSet visited;
  visited.insert(identity);
  if (targets.contains(identity)) --remaining;
  std::size_t radius = 0;
  std::size_t level_begin = 0;
  while (remaining > 0) {
    std::size_t level_end = visited.size();
    if (level_begin == level_end)
      throw ResourceError("word_radius: some element is not in the group generated by S");
    ++radius;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const auto& x : s) {
        GroupElement y = visited[i] * x;
        if (visited.insert(y) && targets.contains(y)) --remaining;
        if (visited.size() > cap) throw ResourceError("word_radius: search exceeded cap");
      }
    }
    level_begin = level_end;
  }
  return radius;
}

std::size_t word_radius(const FiniteGroup& h, const GenSet& s, std::size_t cap) {
  return word_radius(h.elements().items(), s.elems(), cap);
}

std::vector<std::size_t> word_lengths(const GenSet& s) {
  const auto& g = s.owner();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> len(g.order(), kUnset);
  std::deque<std::size_t> queue{0};
  len[0] = 0;
  while (!queue.empty()) {
    auto i = queue.front();
    queue.pop_front();
    for (const auto& x : s.elems()) {
      auto j = *g.index_of(g.element(i) * x);
      if (len[j] == kUnset) {
        len[j] = len[i] + 1;
        queue.push_back(j);
      }
    }
  }
  return len;
}

std::vector<std::vector<std::size_t>> conjugacy_classes(const FiniteGroup& g) {
  std::vector<bool> seen(g.order(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> cls{i};
    seen[i] = true;
    for (std::size_t t = 0; t < cls.size(); ++t) {
      for (const auto& s : g.generators()) {
        auto j = *g.index_of(conjugate(g.element(cls[t]), s));
        if (!seen[j]) {
          seen[j] = true;
          cls.push_back(j);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  return out;
}

std::vector<FiniteGroup> normal_subgroups(const FiniteGroup& g, std::size_t cap) {
  if (g.order() > cap) throw ResourceError("normal_subgroups: group order above cap");
  auto classes = conjugacy_classes(g);
  std::vector<FiniteGroup> found;
  std::set<std::vector<bool>> keys;
  auto add = [&](FiniteGroup n) {
    if (keys.insert(membership_key(g, n.elements())).second) found.push_back(std::move(n));
  };
  add(trivial_subgroup(g));
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& cls : classes) {
      if (found[i].contains(g.element(cls.front()))) continue;
      ElementSet elems = found[i].elements();
      std::vector<GroupElement> gens = found[i].generators();
      for (auto c : cls) extend_closure(elems, gens, g.element(c), g.order());
      add(FiniteGroup::from_elements(g.identity(), elems));
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const FiniteGroup& a, const FiniteGroup& b) { return a.order() < b.order(); });
  return found;
}

std::vector<FiniteGroup> all_subgroups(const FiniteGroup& g, std::size_t cap) {
  std::vector<FiniteGroup> found;
  std::set<std::vector<bool>> keys;
  auto add = [&](FiniteGroup n) {
    if (keys.insert(membership_key(g, n.elements())).second) {
      found.push_back(std::move(n));
      if (found.size() > cap) throw ResourceError("all_subgroups: more subgroups than cap");
    }
  };
  add(trivial_subgroup(g));
  const std::size_t cyclic_end_hint = found.size();
  (void)cyclic_end_hint;
  std::vector<GroupElement> cyclic_gens;
  for (const auto& x : g.elements()) {
    if (x.is_identity()) continue;
    std::size_t before = found.size();
    add(FiniteGroup::generate(g.identity(), {x}, g.order()));
    if (found.size() > before) cyclic_gens.push_back(x);
  }
  for (std::size_t i = 1; i < found.size(); ++i) {
    for (const auto& x : cyclic_gens) {
      if (found[i].contains(x)) continue;
      ElementSet elems = found[i].elements();
      std::vector<GroupElement> gens = found[i].generators();
      extend_closure(elems, gens, x, g.order());
      add(FiniteGroup::from_elements(g.identity(), elems));
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const FiniteGroup& a, const FiniteGroup& b) { return a.order() < b.order(); });
  return found;
}

// ---------------------------------------------------------------------------
// Group files

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::int64_t parse_i64(const std::string& tok) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw InputError("bad integer: " + tok);
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad integer: " + tok);
  }
}

Permutation parse_cycles(const std::string& text, std::size_t degree) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (c != '(') throw InputError("expected '(' in cycle notation: " + text);
    auto close = text.find(')', pos);
    if (close == std::string::npos) throw InputError("unterminated cycle: " + text);
    std::string body = text.substr(pos + 1, close - pos - 1);
    for (auto& ch : body)
      if (ch == ',') ch = ' ';
    std::vector<std::uint32_t> cycle;
    for (const auto& tok : split_ws(body)) {
      auto v = parse_i64(tok);
      if (v < 0) throw InputError("negative point in cycle");
      cycle.push_back(static_cast<std::uint32_t>(v));
    }
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
    pos = close + 1;
  }
  return Permutation::from_cycles(degree, cycles);
}

}  // namespace

GroupElement parse_element(const std::string& text, const GroupElement& like) {
  switch (like.kind()) {
    case ElementKind::permutation:
      return GroupElement(parse_cycles(text, like.permutation().degree()));
    case ElementKind::matrix: {
      const auto& m = like.matrix();
      std::vector<BigInt> entries;
      for (const auto& tok : split_ws(text)) {
        Rational q = parse_rational(tok);
        if (denominator(q) != 1) throw InputError("matrix entries must be integers");
        entries.push_back(numerator(q));
      }
      return GroupElement(IntMatrix(m.dim(), std::move(entries), m.modulus()));
    }
    case ElementKind::vector: {
      const auto& v = like.vector();
      std::vector<std::int64_t> coords;
      for (const auto& tok : split_ws(text)) coords.push_back(parse_i64(tok));
      if (coords.size() != v.dim()) throw InputError("vector has wrong dimension: " + text);
      return GroupElement(IntVector(std::move(coords), {v.moduli().begin(), v.moduli().end()}));
    }
  }
  throw InputError("unknown element kind");
}

GroupSpec parse_group_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<GroupElement> identity;
  GroupSpec spec;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (!identity) {
      const std::string& kind = toks[0];
      if (toks.size() < 2) throw InputError("group header needs a size: " + line);
      auto size = parse_i64(toks[1]);
      if (size < 0) throw InputError("negative size in group header");
      auto n = static_cast<std::size_t>(size);
      if (kind == "permutation") {
        if (toks.size() != 2) throw InputError("malformed permutation header: " + line);
        identity = GroupElement(Permutation::identity(n));
      } else if (kind == "matrix") {
        BigInt modulus = 0;
        if (toks.size() == 4 && toks[2] == "mod")
          modulus = numerator(parse_rational(toks[3]));
        else if (toks.size() != 2)
          throw InputError("malformed matrix header: " + line);
        identity = GroupElement(IntMatrix::identity(n, modulus));
      } else if (kind == "vector") {
        std::vector<std::int64_t> moduli(n, 0);
        if (toks.size() > 2) {
          if (toks[2] != "mod") throw InputError("malformed vector header: " + line);
          if (toks.size() == 4) {
            std::fill(moduli.begin(), moduli.end(), parse_i64(toks[3]));
          } else if (toks.size() == 3 + n) {
            for (std::size_t i = 0; i < n; ++i) moduli[i] = parse_i64(toks[3 + i]);
          } else {
            throw InputError("vector header needs 1 or dim moduli: " + line);
          }
        }
        identity = GroupElement(IntVector::zero(std::move(moduli)));
      } else {
        throw InputError("unknown representation kind: " + kind);
      }
      spec.identity = *identity;
      continue;
    }
    spec.generators.push_back(parse_element(line, *identity));
  }
  if (!identity) throw InputError("group file has no header line");
  return spec;
}

GroupSpec read_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open group file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_group_text(buf.str());
}

std::string format_group_text(const GroupSpec& spec) {
  std::string out;
  const auto& id = spec.identity;
  switch (id.kind()) {
    case ElementKind::permutation:
      out = "permutation " + std::to_string(id.permutation().degree()) + "\n";
      break;
    case ElementKind::matrix:
      out = "matrix " + std::to_string(id.matrix().dim());
      if (id.matrix().modulus() != 0) out += " mod " + id.matrix().modulus().str();
      out += "\n";
      break;
    case ElementKind::vector: {
      const auto& v = id.vector();
      out = "vector " + std::to_string(v.dim());
      bool any = std::any_of(v.moduli().begin(), v.moduli().end(), [](auto m) { return m != 0; });
      if (any) {
        out += " mod";
        for (auto m : v.moduli()) out += " " + std::to_string(m);
      }
      out += "\n";
      break;
    }
  }
  for (const auto& g : spec.generators) out += g.to_string() + "\n";
  return out;
}

}  // namespace vtg
