#pragma once

// Small instances shared by the unit tests and the acceptance binary.

#include "vtg/families.hpp"
#include "vtg/group.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace vtg;

inline Permutation rotation(std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<std::uint32_t>((i + k) % n);
  return Permutation(images);
}

inline Permutation torus_shift(std::size_t a, std::size_t b, std::size_t di, std::size_t dj) {
  std::vector<std::uint32_t> images(a * b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      images[i * b + j] = static_cast<std::uint32_t>(((i + di) % a) * b + (j + dj) % b);
  return Permutation(images);
}

inline FiniteGroup generated_in(const FiniteGroup& g, const std::vector<GroupElement>& gens) {
  return subgroup(g, gens);
}

struct QuotientCase {
  std::string name;
  Instance inst;
  FiniteGroup h;
};

/// 6-cycle with its dihedral group, H = <rotation by 3>.
inline QuotientCase c6_rot3() {
  auto inst = perm_instance("C6/dihedral", cycle_graph(6), cycle_dihedral(6));
  auto h = subgroup(inst.action.group(), std::vector<GroupElement>{GroupElement(rotation(6, 3))});
  return {"C6 mod rot3", inst, h};
}

/// 4x4 torus with its translations, H = <shift by (2, 0)>.
inline QuotientCase torus4_shift() {
  auto inst = perm_instance("T4x4/translations", torus_graph(4, 4), torus_translations(4, 4));
  auto h = subgroup(inst.action.group(), std::vector<GroupElement>{GroupElement(torus_shift(4, 4, 2, 0))});
  return {"4x4 torus mod (2,0)", inst, h};
}

/// Cayley graph of the Heisenberg group mod 3, H = its centre.
inline QuotientCase heisenberg3_centre() {
  auto g = heisenberg_mod(3);
  auto inst = cayley_instance("H3 Cayley", g, g.generators());
  const auto& x = g.generators()[0];
  const auto& y = g.generators()[1];
  auto h = subgroup(g, std::vector<GroupElement>{commutator(x, y)});
  return {"Heisenberg mod 3 by centre", inst, h};
}

inline std::vector<QuotientCase> golden_quotients() { return {c6_rot3(), torus4_shift(), heisenberg3_centre()}; }

/// The counting-identity instances.
inline std::vector<Instance> counting_instances() {
  auto h3 = heisenberg_mod(3);
  return {
      perm_instance("C6/dihedral", cycle_graph(6), cycle_dihedral(6)),
      perm_instance("C6/rotations", cycle_graph(6), cycle_rotations(6)),
      aut_instance("Petersen/Aut", petersen_graph()),
      perm_instance("T4x4/translations", torus_graph(4, 4), torus_translations(4, 4)),
      cayley_instance("H3/left", h3, h3.generators()),
  };
}

/// Groups of order at most 48 used for the sumset and coset checks.
inline std::vector<std::pair<std::string, FiniteGroup>> small_groups() {
  return {
      {"Z/9", cyclic_group(9)},
      {"D16", dihedral_group(8)},
      {"S4", symmetric_group(4)},
      {"D12", dihedral_group(6)},
      {"Z/2xZ/2xZ/2", abelian_group({2, 2, 2})},
      {"Z/4xZ/6", abelian_group({4, 6})},
      {"H3", heisenberg_mod(3)},
      {"D48", dihedral_group(24)},
  };
}

/// Frucht graph: cubic with trivial automorphism group.
inline Graph frucht_graph() {
  std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {0, 6}, {0, 7},  {1, 2}, {1, 7},  {2, 3},  {2, 8},   {3, 4},  {3, 9},
                                           {4, 5}, {4, 9}, {5, 6},  {5, 10}, {6, 10}, {7, 11}, {8, 9}, {8, 11}, {10, 11}};
  return Graph::from_edges(12, e);
}

}  // namespace fixtures
