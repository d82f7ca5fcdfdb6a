#pragma once

#include <vector>

#include "lgtk/polytope.hpp"

namespace lgtk {

struct MonotonePath {
  std::vector<int> vertices;  // ids into the polytope's vertex list
  RatVec point;               // fiber-polytope point of the path
  bool coherent = false;
};

/// All strictly gamma-increasing edge paths from a gamma-minimizing vertex to
/// a gamma-maximizing one, in DFS order over sorted adjacency lists.
/// Throws std::invalid_argument if gamma is constant on P.
std::vector<MonotonePath> monotone_edge_paths(const Polytope& p, const RatVec& gamma);

/// (1/L) sum over edges of (gamma(v_{j+1}) - gamma(v_j)) (v_j + v_{j+1}) / 2,
/// with L = gamma_max - gamma_min.
RatVec path_point(const Polytope& p, const RatVec& gamma, const std::vector<int>& path);

struct MonotonePathPolytope {
  Polytope polytope;
  std::vector<MonotonePath> paths;  // with `coherent` filled in
  std::vector<int> vertex_path;     // vertex i of `polytope` <- paths[vertex_path[i]]
};

MonotonePathPolytope monotone_path_polytope(const Polytope& p, const RatVec& gamma);

/// e_i^dual on R^n.
RatVec coordinate_functional(std::size_t n, std::size_t i);

}  // namespace lgtk
