#include "lgtk/lafforgue.hpp"

#include <algorithm>
#include <stdexcept>

namespace lgtk {

Polytope lafforgue_polytope(const PointConfiguration& config, const Polytope& secondary) {
  const std::size_t n = config.points.size();
  std::vector<RatVec> simplex;
  for (std::size_t i = 0; i < n; ++i) {
    RatVec e(n, Rat(0));
    e[i] = 1;
    simplex.push_back(std::move(e));
  }
  return minkowski_sum(secondary, hull(simplex));
}

Polytope lafforgue_polytope(const PointConfiguration& config) {
  return lafforgue_polytope(config, secondary_polytope(config).polytope);
}

PointedSubdivision pointed_subdivision(const PointConfiguration& config, const RatVec& u) {
  PointedSubdivision p;
  p.subdivision = subdivision_from_height(config, u);
  const Rat lo = *std::min_element(u.begin(), u.end());
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] == lo) p.pointing.push_back(static_cast<int>(i));
  return p;
}

std::string to_string(FacetType t) {
  switch (t) {
    case FacetType::interior_point_drop: return "interior-point-drop";
    case FacetType::right_pointed_split: return "right-pointed-split";
    case FacetType::left_pointed_split: return "left-pointed-split";
    case FacetType::vertical_0: return "vertical-0";
    case FacetType::vertical_last: return "vertical-(n+1)";
  }
  return "?";
}

std::string short_name(const FacetLabel& l) {
  switch (l.type) {
    case FacetType::interior_point_drop: return "drop-" + std::to_string(l.index);
    case FacetType::right_pointed_split: return "rsplit-" + std::to_string(l.index);
    case FacetType::left_pointed_split: return "lsplit-" + std::to_string(l.index);
    case FacetType::vertical_0:
    case FacetType::vertical_last: return "vert-" + std::to_string(l.index);
  }
  return "?";
}

IntVec gamma_coordinates(int n, const RatVec& u) {
  if (u.size() != static_cast<std::size_t>(n + 2)) throw DimensionError("gamma_coordinates: expected n+2 entries");
  IntVec out;
  RatVec col;
  col.push_back(u[0] - u[1]);
  for (int i = 1; i <= n; ++i) col.push_back(-u[i - 1] + 2 * u[i] - u[i + 1]);
  for (const auto& x : col) {
    if (x.get_den() != 1) throw std::invalid_argument("gamma_coordinates: functional is not integral");
    out.push_back(x.get_num());
  }
  return out;
}

XiMatrix an_xi_matrix(int n) {
  if (n < 1) throw std::invalid_argument("an_xi_matrix: n must be at least 1");
  const std::size_t rows = static_cast<std::size_t>(n) + 1, cols = 3 * static_cast<std::size_t>(n) + 2;
  XiMatrix x;
  x.n = n;
  x.matrix.assign(rows, IntVec(cols, Int(0)));
  auto& m = x.matrix;
  const std::size_t nn = static_cast<std::size_t>(n);
  m[0][0] = -1;
  for (std::size_t i = 0; i < nn; ++i) {
    m[0][2 * nn + i] = 1;
    // Cartan block
    m[i + 1][i] = 2;
    if (i > 0) m[i][i] = -1;
    if (i + 1 < nn) m[i + 2][i] = -1;
    m[i + 1][nn + i] = -1;
    m[i + 1][2 * nn + i] = -1;
  }
  m[0][3 * nn] = 1;
  m[0][3 * nn + 1] = -1;

  for (int i = 1; i <= n; ++i) x.columns.push_back({FacetType::interior_point_drop, i});
  for (int i = 1; i <= n; ++i) x.columns.push_back({FacetType::right_pointed_split, i});
  for (int i = 1; i <= n; ++i) x.columns.push_back({FacetType::left_pointed_split, i});
  // +f_0^dual is the functional u_j = -j, minimized at n+1.
  x.columns.push_back({FacetType::vertical_last, n + 1});
  x.columns.push_back({FacetType::vertical_0, 0});
  return x;
}

std::vector<LabeledFacet> an_pointed_facet_labels(int n, const Polytope& lafforgue) {
  if (n < 1) throw std::invalid_argument("an_pointed_facet_labels: n must be at least 1");
  const auto config = interval_configuration(n);
  const int last = n + 1;
  std::vector<LabeledFacet> out;
  for (std::size_t f = 0; f < lafforgue.facets().size(); ++f) {
    LabeledFacet lf;
    lf.facet = f;
    for (const auto& x : lafforgue.canonical_normal(f)) lf.inner_normal.push_back(-x);
    lf.pointed = pointed_subdivision(config, to_rat(lf.inner_normal));
    const auto& cells = lf.pointed.subdivision.cells;
    const auto& pt = lf.pointed.pointing;
    auto range = [](int a, int b) {
      std::vector<int> r;
      for (int i = a; i <= b; ++i) r.push_back(i);
      return r;
    };
    bool ok = false;
    if (cells.size() == 1 && cells[0].marked.size() == static_cast<std::size_t>(n) + 1) {
      // One interior point unmarked; the pointing set is everything else.
      int dropped = 0;
      while (std::binary_search(cells[0].marked.begin(), cells[0].marked.end(), dropped)) ++dropped;
      lf.label = {FacetType::interior_point_drop, dropped};
      ok = pt == cells[0].marked;
    } else if (cells.size() == 1 && cells[0].marked.size() == static_cast<std::size_t>(n) + 2) {
      if (pt == std::vector<int>{0}) {
        lf.label = {FacetType::vertical_0, 0};
        ok = true;
      } else if (pt == std::vector<int>{last}) {
        lf.label = {FacetType::vertical_last, last};
        ok = true;
      }
    } else if (cells.size() == 2) {
      const int i = cells[0].vertices.back();
      if (pt == range(0, i)) {
        lf.label = {FacetType::right_pointed_split, i};
        ok = true;
      } else if (pt == range(i, last)) {
        lf.label = {FacetType::left_pointed_split, i};
        ok = true;
      }
    }
    if (!ok) throw std::logic_error("an_pointed_facet_labels: unexpected facet");
    out.push_back(std::move(lf));
  }
  return out;
}

std::vector<LabeledFacet> an_pointed_facet_labels(int n) {
  return an_pointed_facet_labels(n, lafforgue_polytope(interval_configuration(n)));
}

}  // namespace lgtk
