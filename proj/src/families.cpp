#include "vtg/families.hpp"

#include "vtg/errors.hpp"

#include <numeric>

namespace vtg {

namespace {

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

Permutation shift_permutation(std::size_t n, std::size_t by) {
  std::vector<std::uint32_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<std::uint32_t>((i + by) % n);
  return Permutation(std::move(images));
}

Permutation reflection_permutation(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<std::uint32_t>((n - i) % n);
  return Permutation(std::move(images));
}

}  // namespace

Graph single_vertex_graph() { return Graph(1); }

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InputError("cycle needs at least 3 vertices");
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph path_graph(std::size_t n) {
  if (n == 0) throw InputError("path needs at least 1 vertex");
  EdgeList edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

Graph complete_graph(std::size_t n) {
  if (n == 0) throw InputError("complete graph needs at least 1 vertex");
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

Graph torus_graph(std::size_t a, std::size_t b) {
  if (a < 3 || b < 3) throw InputError("torus sides must be at least 3");
  EdgeList edges;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      edges.emplace_back(i * b + j, ((i + 1) % a) * b + j);
      edges.emplace_back(i * b + j, i * b + (j + 1) % b);
    }
  }
  return Graph::from_edges(a * b, edges);
}

Graph hypercube_graph(std::size_t k) {
  if (k > 16) throw ResourceError("hypercube dimension above 16");
  const std::size_t n = std::size_t{1} << k;
  EdgeList edges;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t bit = 0; bit < k; ++bit) {
      std::size_t w = v ^ (std::size_t{1} << bit);
      if (v < w) edges.emplace_back(v, w);
    }
  return Graph::from_edges(n, edges);
}

Graph petersen_graph() {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) pairs.emplace_back(i, j);
  EdgeList edges;
  for (std::size_t u = 0; u < pairs.size(); ++u)
    for (std::size_t v = u + 1; v < pairs.size(); ++v) {
      auto [a, b] = pairs[u];
      auto [c, d] = pairs[v];
      if (a != c && a != d && b != c && b != d) edges.emplace_back(u, v);
    }
  return Graph::from_edges(10, edges);
}

Graph prism_graph(std::size_t n) {
  if (n < 3) throw InputError("prism needs n >= 3");
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(i, (i + 1) % n);
    edges.emplace_back(n + i, n + (i + 1) % n);
    edges.emplace_back(i, n + i);
  }
  return Graph::from_edges(2 * n, edges);
}

FiniteGroup cycle_rotations(std::size_t n) {
  return FiniteGroup::generate(GroupElement(Permutation::identity(n)), {GroupElement(shift_permutation(n, 1))});
}

FiniteGroup cycle_dihedral(std::size_t n) {
  return FiniteGroup::generate(GroupElement(Permutation::identity(n)),
                               {GroupElement(shift_permutation(n, 1)), GroupElement(reflection_permutation(n))});
}

FiniteGroup torus_translations(std::size_t a, std::size_t b) {
  std::vector<std::uint32_t> down(a * b), right(a * b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      down[i * b + j] = static_cast<std::uint32_t>(((i + 1) % a) * b + j);
      right[i * b + j] = static_cast<std::uint32_t>(i * b + (j + 1) % b);
    }
  return FiniteGroup::generate(GroupElement(Permutation::identity(a * b)),
                               {GroupElement(Permutation(down)), GroupElement(Permutation(right))});
}

FiniteGroup cyclic_group(std::size_t n) { return abelian_group({static_cast<std::int64_t>(n)}); }

FiniteGroup abelian_group(const std::vector<std::int64_t>& moduli) {
  for (auto m : moduli)
    if (m < 1) throw InputError("abelian_group needs positive moduli");
  std::vector<std::int64_t> mods(moduli);
  // Z/1 is represented as a coordinate that is always 0.
  for (auto& m : mods)
    if (m == 1) m = 2;
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] == 1) continue;
    std::vector<std::int64_t> c(moduli.size(), 0);
    c[i] = 1;
    gens.emplace_back(IntVector(c, mods));
  }
  return FiniteGroup::generate(GroupElement(IntVector::zero(mods)), gens);
}

FiniteGroup dihedral_group(std::size_t n) { return cycle_dihedral(n); }

FiniteGroup symmetric_group(std::size_t k) {
  if (k < 2) return FiniteGroup::generate(GroupElement(Permutation::identity(k)), {});
  std::vector<std::uint32_t> cycle(k);
  for (std::size_t i = 0; i < k; ++i) cycle[i] = static_cast<std::uint32_t>((i + 1) % k);
  return FiniteGroup::generate(GroupElement(Permutation::identity(k)),
                               {GroupElement(Permutation::from_cycles(k, {{0, 1}})), GroupElement(Permutation(cycle))});
}

std::vector<GroupElement> heisenberg_generators(std::size_t modulus) {
  BigInt m = modulus;
  IntMatrix x(3, {1, 1, 0, 0, 1, 0, 0, 0, 1}, m);
  IntMatrix y(3, {1, 0, 0, 0, 1, 1, 0, 0, 1}, m);
  return {GroupElement(x), GroupElement(x.inverse()), GroupElement(y), GroupElement(y.inverse())};
}

FiniteGroup heisenberg_mod(std::size_t p) {
  if (p < 2) throw InputError("heisenberg modulus must be >= 2");
  auto gens = heisenberg_generators(p);
  return FiniteGroup::generate(GroupElement(IntMatrix::identity(3, BigInt(p))), {gens[0], gens[2]});
}

std::vector<GroupElement> lattice_generators(std::size_t d) {
  std::vector<std::int64_t> moduli(d, 0);
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::int64_t> plus(d, 0), minus(d, 0);
    plus[i] = 1;
    minus[i] = -1;
    out.emplace_back(IntVector(plus, moduli));
    out.emplace_back(IntVector(minus, moduli));
  }
  return out;
}

Instance cayley_instance(std::string name, const FiniteGroup& g, std::span<const GroupElement> gens) {
  auto s = GenSet::symmetric_closure(g, gens);
  return Instance{std::move(name), cayley_graph(g, s), Action::left_regular(g)};
}

Instance aut_instance(std::string name, Graph graph) {
  auto aut = automorphism_group(graph);
  return Instance{std::move(name), std::move(graph), Action::natural(aut)};
}

Instance perm_instance(std::string name, Graph graph, FiniteGroup perm_group) {
  Action act = Action::natural(std::move(perm_group));
  check_acts_by_automorphisms(graph, act);
  return Instance{std::move(name), std::move(graph), std::move(act)};
}

}  // namespace vtg
