#pragma once

#include <optional>
#include <vector>

#include "lgtk/polytope.hpp"

namespace lgtk {

/// Vertex bijection witnessing a face-lattice isomorphism: vertex i of the
/// first polytope maps to vertex_map[i] of the second.
struct CombinatorialIsomorphism {
  std::vector<int> vertex_map;
  std::vector<int> facet_map;
};

/// Face-lattice isomorphism test via the vertex-facet incidence graph
/// (individualization-refinement search).
std::optional<CombinatorialIsomorphism> combinatorially_isomorphic(const Polytope& p,
                                                                   const Polytope& q);

/// Same search for arbitrary bipartite incidence structures given as
/// "facet -> sorted vertex list".
std::optional<CombinatorialIsomorphism> incidence_isomorphic(
    std::size_t nv1, const std::vector<std::vector<int>>& inc1, std::size_t nv2,
    const std::vector<std::vector<int>>& inc2);

/// Isomorphism of simple undirected graphs on vertices 0..n-1.
std::optional<std::vector<int>> graph_isomorphic(std::size_t n1,
                                                 const std::vector<std::pair<int, int>>& e1,
                                                 std::size_t n2,
                                                 const std::vector<std::pair<int, int>>& e2);

}  // namespace lgtk
