#include "lgtk/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lgtk {

namespace {

using Adjacency = std::vector<std::vector<int>>;
using Coloring = std::vector<int>;

struct Matcher {
  const Adjacency& g1;
  const Adjacency& g2;

  std::vector<int> histogram(const Coloring& c, int ncolors) const {
    std::vector<int> h(static_cast<std::size_t>(ncolors), 0);
    for (int x : c) ++h[static_cast<std::size_t>(x)];
    return h;
  }

  // Joint colour refinement; returns false once the colourings diverge.
  bool refine(Coloring& c1, Coloring& c2, int& ncolors) const {
    for (;;) {
      using Sig = std::pair<int, std::vector<int>>;
      auto signature = [](const Adjacency& g, const Coloring& c, std::size_t v) {
        std::vector<int> nb;
        nb.reserve(g[v].size());
        for (int w : g[v]) nb.push_back(c[static_cast<std::size_t>(w)]);
        std::sort(nb.begin(), nb.end());
        return Sig{c[v], std::move(nb)};
      };
      std::vector<Sig> s1(c1.size()), s2(c2.size());
      std::map<Sig, int> ids;
      for (std::size_t v = 0; v < c1.size(); ++v) ids.emplace(s1[v] = signature(g1, c1, v), 0);
      for (std::size_t v = 0; v < c2.size(); ++v) ids.emplace(s2[v] = signature(g2, c2, v), 0);
      int next = 0;
      for (auto& [sig, id] : ids) id = next++;
      for (std::size_t v = 0; v < c1.size(); ++v) c1[v] = ids[s1[v]];
      for (std::size_t v = 0; v < c2.size(); ++v) c2[v] = ids[s2[v]];
      if (histogram(c1, next) != histogram(c2, next)) return false;
      const bool stable = next == ncolors;
      ncolors = next;
      if (stable) return true;
    }
  }

  bool verify(const std::vector<int>& map) const {
    std::set<std::pair<int, int>> edges2;
    for (std::size_t v = 0; v < g2.size(); ++v)
      for (int w : g2[v]) edges2.emplace(static_cast<int>(v), w);
    std::size_t count1 = 0;
    for (std::size_t v = 0; v < g1.size(); ++v)
      for (int w : g1[v]) {
        ++count1;
        if (!edges2.count({map[v], map[static_cast<std::size_t>(w)]})) return false;
      }
    return count1 == edges2.size();
  }

  std::optional<std::vector<int>> search(Coloring c1, Coloring c2, int ncolors) const {
    if (!refine(c1, c2, ncolors)) return std::nullopt;
    auto h = histogram(c1, ncolors);
    int cell = -1;
    for (int c = 0; c < ncolors; ++c)
      if (h[static_cast<std::size_t>(c)] > 1 &&
          (cell < 0 || h[static_cast<std::size_t>(c)] < h[static_cast<std::size_t>(cell)]))
        cell = c;
    if (cell < 0) {
      std::vector<int> by_color(static_cast<std::size_t>(ncolors));
      for (std::size_t v = 0; v < c2.size(); ++v) by_color[static_cast<std::size_t>(c2[v])] = static_cast<int>(v);
      std::vector<int> map(c1.size());
      for (std::size_t v = 0; v < c1.size(); ++v) map[v] = by_color[static_cast<std::size_t>(c1[v])];
      if (verify(map)) return map;
      return std::nullopt;
    }
    std::size_t x = 0;
    while (c1[x] != cell) ++x;
    for (std::size_t y = 0; y < c2.size(); ++y) {
      if (c2[y] != cell) continue;
      Coloring d1 = c1, d2 = c2;
      d1[x] = ncolors;
      d2[y] = ncolors;
      if (auto r = search(std::move(d1), std::move(d2), ncolors + 1)) return r;
    }
    return std::nullopt;
  }
};

std::optional<std::vector<int>> colored_isomorphism(const Adjacency& g1, const Coloring& c1,
                                                    const Adjacency& g2, const Coloring& c2) {
  if (g1.size() != g2.size()) return std::nullopt;
  int ncolors = 0;
  for (int c : c1) ncolors = std::max(ncolors, c + 1);
  for (int c : c2) ncolors = std::max(ncolors, c + 1);
  Matcher m{g1, g2};
  return m.search(c1, c2, ncolors);
}

Adjacency bipartite(std::size_t nv, const std::vector<std::vector<int>>& inc, Coloring& color) {
  Adjacency g(nv + inc.size());
  color.assign(nv + inc.size(), 0);
  for (std::size_t f = 0; f < inc.size(); ++f) {
    color[nv + f] = 1;
    for (int v : inc[f]) {
      g[static_cast<std::size_t>(v)].push_back(static_cast<int>(nv + f));
      g[nv + f].push_back(v);
    }
  }
  return g;
}

}  // namespace

std::optional<CombinatorialIsomorphism> incidence_isomorphic(
    std::size_t nv1, const std::vector<std::vector<int>>& inc1, std::size_t nv2,
    const std::vector<std::vector<int>>& inc2) {
  if (nv1 != nv2 || inc1.size() != inc2.size()) return std::nullopt;
  Coloring c1, c2;
  const auto g1 = bipartite(nv1, inc1, c1);
  const auto g2 = bipartite(nv2, inc2, c2);
  auto map = colored_isomorphism(g1, c1, g2, c2);
  if (!map) return std::nullopt;
  CombinatorialIsomorphism iso;
  iso.vertex_map.assign(map->begin(), map->begin() + static_cast<std::ptrdiff_t>(nv1));
  for (std::size_t f = 0; f < inc1.size(); ++f)
    iso.facet_map.push_back((*map)[nv1 + f] - static_cast<int>(nv2));
  return iso;
}

std::optional<CombinatorialIsomorphism> combinatorially_isomorphic(const Polytope& p,
                                                                   const Polytope& q) {
  if (p.dim() != q.dim()) return std::nullopt;
  if (p.dim() <= 0) {
    if (p.vertices().size() != q.vertices().size()) return std::nullopt;
    CombinatorialIsomorphism iso;
    for (std::size_t i = 0; i < p.vertices().size(); ++i) iso.vertex_map.push_back(static_cast<int>(i));
    return iso;
  }
  return incidence_isomorphic(p.vertices().size(), p.incidence(), q.vertices().size(),
                              q.incidence());
}

std::optional<std::vector<int>> graph_isomorphic(std::size_t n1,
                                                 const std::vector<std::pair<int, int>>& e1,
                                                 std::size_t n2,
                                                 const std::vector<std::pair<int, int>>& e2) {
  if (n1 != n2 || e1.size() != e2.size()) return std::nullopt;
  auto build = [](std::size_t n, const std::vector<std::pair<int, int>>& e) {
    Adjacency g(n);
    for (auto [u, v] : e) {
      g[static_cast<std::size_t>(u)].push_back(v);
      g[static_cast<std::size_t>(v)].push_back(u);
    }
    return g;
  };
  return colored_isomorphism(build(n1, e1), Coloring(n1, 0), build(n2, e2), Coloring(n2, 0));
}

}  // namespace lgtk
