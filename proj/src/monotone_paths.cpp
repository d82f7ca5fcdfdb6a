#include "lgtk/monotone_paths.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace lgtk {

namespace {

std::vector<Rat> values(const Polytope& p, const RatVec& gamma) {
  if (gamma.size() != p.ambient_dim()) throw DimensionError("functional has the wrong length");
  std::vector<Rat> g;
  for (const auto& v : p.vertices()) g.push_back(dot(gamma, v));
  return g;
}

}  // namespace

RatVec coordinate_functional(std::size_t n, std::size_t i) {
  RatVec g(n, Rat(0));
  g.at(i) = 1;
  return g;
}

RatVec path_point(const Polytope& p, const RatVec& gamma, const std::vector<int>& path) {
  const auto g = values(p, gamma);
  const Rat lo = *std::min_element(g.begin(), g.end()), hi = *std::max_element(g.begin(), g.end());
  const Rat len = hi - lo;
  if (sgn(len) == 0) throw std::invalid_argument("functional is constant on the polytope");
  if (path.size() == 1) return p.vertices()[static_cast<std::size_t>(path[0])];
  RatVec acc(p.ambient_dim(), Rat(0));
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const auto a = static_cast<std::size_t>(path[j]), b = static_cast<std::size_t>(path[j + 1]);
    const Rat w = (g[b] - g[a]) / (2 * len);
    const auto& va = p.vertices()[a];
    const auto& vb = p.vertices()[b];
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * (va[k] + vb[k]);
  }
  return acc;
}

std::vector<MonotonePath> monotone_edge_paths(const Polytope& p, const RatVec& gamma) {
  const auto g = values(p, gamma);
  const Rat lo = *std::min_element(g.begin(), g.end()), hi = *std::max_element(g.begin(), g.end());
  if (lo == hi) throw std::invalid_argument("functional is constant on the polytope");

  std::vector<std::vector<int>> up(p.vertices().size());
  for (auto [a, b] : p.edges()) {
    if (g[static_cast<std::size_t>(a)] < g[static_cast<std::size_t>(b)]) up[static_cast<std::size_t>(a)].push_back(b);
    if (g[static_cast<std::size_t>(b)] < g[static_cast<std::size_t>(a)]) up[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& u : up) std::sort(u.begin(), u.end());

  std::vector<MonotonePath> out;
  std::vector<int> stack;
  std::function<void(int)> dfs = [&](int v) {
    stack.push_back(v);
    if (g[static_cast<std::size_t>(v)] == hi) {
      out.push_back({stack, path_point(p, gamma, stack), false});
    } else {
      for (int w : up[static_cast<std::size_t>(v)]) dfs(w);
    }
    stack.pop_back();
  };
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g[v] == lo) dfs(static_cast<int>(v));
  return out;
}

MonotonePathPolytope monotone_path_polytope(const Polytope& p, const RatVec& gamma) {
  MonotonePathPolytope m;
  m.paths = monotone_edge_paths(p, gamma);
  std::vector<RatVec> pts;
  for (const auto& path : m.paths) pts.push_back(path.point);
  m.polytope = hull(pts);
  m.vertex_path.assign(m.polytope.vertices().size(), -1);
  for (std::size_t i = 0; i < m.paths.size(); ++i) {
    const auto v = m.polytope.find_vertex(m.paths[i].point);
    if (!v) continue;
    auto& slot = m.vertex_path[static_cast<std::size_t>(*v)];
    // Two paths sharing a vertex point would break injectivity; keep the first.
    if (slot < 0) {
      slot = static_cast<int>(i);
      m.paths[i].coherent = true;
    }
  }
  return m;
}

}  // namespace lgtk
