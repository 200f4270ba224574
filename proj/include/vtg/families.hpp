#pragma once

#include "vtg/graph.hpp"
#include "vtg/group.hpp"

#include <string>
#include <vector>

namespace vtg {

Graph single_vertex_graph();
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// a x b grid with wraparound; vertex (i, j) is i*b + j.
Graph torus_graph(std::size_t a, std::size_t b);
/// Vertices are bitmasks of length k.
Graph hypercube_graph(std::size_t k);
/// Vertices are the 2-subsets of {0..4} in lexicographic order, adjacent
/// when disjoint.
Graph petersen_graph();
/// C_n x K_2: vertex i on the outer cycle, n + i on the inner one.
Graph prism_graph(std::size_t n);

/// Rotations of the n-cycle, as permutations of its vertices.
FiniteGroup cycle_rotations(std::size_t n);
/// Rotations and reflections of the n-cycle (order 2n for n >= 3).
FiniteGroup cycle_dihedral(std::size_t n);
/// Translations of the a x b torus (order ab).
FiniteGroup torus_translations(std::size_t a, std::size_t b);

/// Z/n as 1-dimensional vectors; generator 1.
FiniteGroup cyclic_group(std::size_t n);
/// Z/m_1 x ... x Z/m_k, generated by the unit vectors.
FiniteGroup abelian_group(const std::vector<std::int64_t>& moduli);
/// Dihedral group of order 2n as permutations of n points, generated by the
/// rotation and the reflection x -> -x.
FiniteGroup dihedral_group(std::size_t n);
FiniteGroup symmetric_group(std::size_t k);
/// Upper unitriangular 3x3 matrices mod p; generated by x = I + E_12 and
/// y = I + E_23.
FiniteGroup heisenberg_mod(std::size_t p);

/// x, x^-1, y, y^-1 for the Heisenberg group over Z (modulus 0) or Z/p.
std::vector<GroupElement> heisenberg_generators(std::size_t modulus = 0);
/// +-e_i in Z^d.
std::vector<GroupElement> lattice_generators(std::size_t d);

/// A graph together with a group acting on it by automorphisms.
struct Instance {
  std::string name;
  Graph graph;
  Action action;
};

/// Cayley graph of (G, symmetric closure of gens) with G acting by left
/// translation.
Instance cayley_instance(std::string name, const FiniteGroup& g, std::span<const GroupElement> gens);
/// The graph with its full automorphism group.
Instance aut_instance(std::string name, Graph graph);
/// The graph with a given permutation group acting naturally.
Instance perm_instance(std::string name, Graph graph, FiniteGroup perm_group);

}  // namespace vtg
