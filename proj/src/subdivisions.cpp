#include "lgtk/subdivisions.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "lgtk/lp.hpp"

namespace lgtk {

namespace {

RatVec homogenize(const RatVec& a) {
  RatVec h;
  h.reserve(a.size() + 1);
  h.emplace_back(1);
  h.insert(h.end(), a.begin(), a.end());
  return h;
}

std::vector<RatVec> points_of(const PointConfiguration& config, const std::vector<int>& ids) {
  std::vector<RatVec> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(config.points[static_cast<std::size_t>(i)]);
  return out;
}

// d+1 affinely independent members of `ids`, chosen greedily.
std::vector<int> affine_basis(const PointConfiguration& config, const std::vector<int>& ids) {
  std::vector<int> basis;
  std::vector<RatVec> rows;
  for (int i : ids) {
    rows.push_back(homogenize(config.points[static_cast<std::size_t>(i)]));
    if (rank(rows) == rows.size()) {
      basis.push_back(i);
      if (basis.size() == config.lattice_rank + 1) break;
    } else {
      rows.pop_back();
    }
  }
  return basis;
}

// Barycentric coordinates of every point with respect to an affine basis.
std::vector<RatVec> barycentric(const PointConfiguration& config, const std::vector<int>& basis) {
  const std::size_t n = config.lattice_rank + 1;
  std::vector<RatVec> m(n, RatVec(n));
  for (std::size_t j = 0; j < n; ++j) {
    const RatVec h = homogenize(config.points[static_cast<std::size_t>(basis[j])]);
    for (std::size_t i = 0; i < n; ++i) m[i][j] = h[i];
  }
  std::vector<RatVec> out;
  for (const auto& a : config.points) out.push_back(solve(m, homogenize(a)));
  return out;
}

void normalize(Subdivision& s) {
  for (auto& c : s.cells) {
    std::sort(c.vertices.begin(), c.vertices.end());
    std::sort(c.marked.begin(), c.marked.end());
  }
  std::sort(s.cells.begin(), s.cells.end());
}

RatVec integral(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, Int(x.get_den()));
  RatVec out;
  for (const auto& x : v) out.emplace_back(x * l);
  return out;
}

// Height LP: heights eta and slack eps, each cell's interpolating affine
// function must agree on marked points and sit at least eps below the rest.
RegularityResult height_lp(const PointConfiguration& config, const std::vector<Cell>& cells) {
  const std::size_t n = config.points.size();
  std::vector<LinearConstraint> cons;
  for (const auto& cell : cells) {
    const auto basis = affine_basis(config, cell.vertices);
    const auto bary = barycentric(config, basis);
    for (std::size_t a = 0; a < n; ++a) {
      // row . (eta, eps): f_C(a) - eta_a (+ eps)
      RatVec row(n + 1, Rat(0));
      for (std::size_t j = 0; j < basis.size(); ++j) row[static_cast<std::size_t>(basis[j])] += bary[a][j];
      row[a] -= 1;
      const bool marked = std::binary_search(cell.marked.begin(), cell.marked.end(), static_cast<int>(a));
      if (marked) {
        if (is_zero(row)) continue;
        cons.push_back({row, Rat(0)});
        cons.push_back({scale(row, Rat(-1)), Rat(0)});
      } else {
        row[n] = 1;
        cons.push_back({row, Rat(0)});
      }
    }
  }
  RatVec cap(n + 1, Rat(0));
  cap[n] = 1;
  cons.push_back({cap, Rat(1)});
  // Pin the affine gauge: the heights of one affine basis are zero.
  for (int b : affine_basis(config, [&] {
         std::vector<int> all(n);
         for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
         return all;
       }())) {
    RatVec row(n + 1, Rat(0));
    row[static_cast<std::size_t>(b)] = 1;
    cons.push_back({row, Rat(0)});
    cons.push_back({scale(row, Rat(-1)), Rat(0)});
  }

  RegularityResult out;
  const auto r = lp_optimize(cons, cap, Sense::maximize);
  if (r.status != LpStatus::optimal) {
    out.witness = "height system has no solution";
    return out;
  }
  out.gap = r.value;
  if (sgn(r.value) <= 0) {
    out.witness = "best slack is " + to_string(r.value) + ", no strictly convex height exists";
    return out;
  }
  out.height = integral(RatVec(r.point.begin(), r.point.begin() + static_cast<std::ptrdiff_t>(n)));
  out.regular = true;
  return out;
}

bool interiors_meet(const PointConfiguration& config, const std::vector<int>& c1,
                    const std::vector<int>& c2) {
  // Variables lambda (c1), mu (c2), t. Maximize t with lambda, mu >= t.
  const std::size_t k1 = c1.size(), k2 = c2.size(), nv = k1 + k2 + 1;
  std::vector<LinearConstraint> cons;
  auto eq = [&](RatVec row, const Rat& b) {
    cons.push_back({row, b});
    cons.push_back({scale(row, Rat(-1)), -b});
  };
  for (std::size_t i = 0; i < k1 + k2; ++i) {
    RatVec row(nv, Rat(0));
    row[i] = -1;
    row[nv - 1] = 1;
    cons.push_back({row, Rat(0)});
  }
  RatVec s1(nv, Rat(0)), s2(nv, Rat(0));
  for (std::size_t i = 0; i < k1; ++i) s1[i] = 1;
  for (std::size_t i = 0; i < k2; ++i) s2[k1 + i] = 1;
  eq(s1, Rat(1));
  eq(s2, Rat(1));
  for (std::size_t j = 0; j < config.lattice_rank; ++j) {
    RatVec row(nv, Rat(0));
    for (std::size_t i = 0; i < k1; ++i) row[i] = config.points[static_cast<std::size_t>(c1[i])][j];
    for (std::size_t i = 0; i < k2; ++i) row[k1 + i] = -config.points[static_cast<std::size_t>(c2[i])][j];
    eq(row, Rat(0));
  }
  RatVec cap(nv, Rat(0));
  cap[nv - 1] = 1;
  cons.push_back({cap, Rat(1)});
  const auto r = lp_optimize(cons, cap, Sense::maximize);
  return r.status == LpStatus::optimal && sgn(r.value) > 0;
}

void validate(const PointConfiguration& config, const std::vector<Cell>& cells) {
  const int n = static_cast<int>(config.points.size());
  const int d = static_cast<int>(config.lattice_rank);
  if (cells.empty()) throw SubdivisionError("no cells");
  Rat total = 0;
  for (const auto& c : cells) {
    for (int i : c.marked)
      if (i < 0 || i >= n) throw SubdivisionError("point index out of range");
    if (!std::includes(c.marked.begin(), c.marked.end(), c.vertices.begin(), c.vertices.end()))
      throw SubdivisionError("cell vertex not marked");
    const auto cp = hull(points_of(config, c.vertices));
    if (cp.dim() != d) throw SubdivisionError("cell is not full-dimensional");
    if (cp.vertices().size() != c.vertices.size()) throw SubdivisionError("cell vertex list is redundant");
    for (int i : c.marked)
      if (!cp.contains(config.points[static_cast<std::size_t>(i)]))
        throw SubdivisionError("marked point outside its cell");
    total += normalized_volume(config, c.vertices);
  }
  if (total != normalized_volume(config, [&] {
        std::vector<int> ids;
        for (const auto& v : config.hull.vertices())
          for (int i = 0; i < n; ++i)
            if (config.points[static_cast<std::size_t>(i)] == v) ids.push_back(i);
        return ids;
      }()))
    throw SubdivisionError("cell volumes do not add up to the volume of Q");
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (interiors_meet(config, cells[i].vertices, cells[j].vertices))
        throw SubdivisionError("cells overlap");
}

using Simplex = std::vector<int>;
using SimplexSet = std::set<Simplex>;

SimplexSet simplices(const Subdivision& t) {
  SimplexSet out;
  for (const auto& c : t.cells) out.insert(c.vertices);
  return out;
}

Subdivision from_simplices(const SimplexSet& s) {
  Subdivision t;
  for (const auto& x : s) t.cells.push_back({x, x});
  normalize(t);
  return t;
}

// Simplices Z \ {z} for z in one side of the circuit.
SimplexSet circuit_side(const std::vector<int>& z, const std::vector<int>& side) {
  SimplexSet out;
  for (int drop : side) {
    Simplex s;
    for (int x : z)
      if (x != drop) s.push_back(x);
    out.insert(s);
  }
  return out;
}

std::optional<SimplexSet> flip_along(const SimplexSet& t, const std::vector<int>& z,
                                     const SimplexSet& from, const SimplexSet& to) {
  std::optional<std::set<Simplex>> link;
  SimplexSet removed;
  for (const auto& tau : from) {
    std::set<Simplex> lk;
    for (const auto& sigma : t) {
      if (!std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end())) continue;
      Simplex rest;
      std::set_difference(sigma.begin(), sigma.end(), tau.begin(), tau.end(), std::back_inserter(rest));
      // A link simplex may not touch the circuit.
      for (int x : rest)
        if (std::binary_search(z.begin(), z.end(), x)) return std::nullopt;
      lk.insert(rest);
      removed.insert(sigma);
    }
    if (lk.empty()) return std::nullopt;
    if (link && *link != lk) return std::nullopt;
    link = std::move(lk);
  }
  SimplexSet out;
  for (const auto& s : t)
    if (!removed.count(s)) out.insert(s);
  for (const auto& tau : to)
    for (const auto& rho : *link) {
      Simplex s = tau;
      s.insert(s.end(), rho.begin(), rho.end());
      std::sort(s.begin(), s.end());
      out.insert(s);
    }
  return out;
}

}  // namespace

PointConfiguration make_configuration(const std::vector<RatVec>& points) {
  if (points.empty()) throw ConfigurationError("empty point configuration");
  const std::size_t d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw ConfigurationError("points of different lengths");
    for (const auto& x : p)
      if (x.get_den() != 1) throw ConfigurationError("points must be integral");
  }
  std::set<RatVec> seen;
  for (const auto& p : points)
    if (!seen.insert(p).second) throw ConfigurationError("duplicate point in configuration");
  PointConfiguration c;
  c.lattice_rank = d;
  c.points = points;
  c.hull = lgtk::hull(points);
  if (c.hull.dim() != static_cast<int>(d)) throw ConfigurationError("configuration is not full-dimensional");
  return c;
}

PointConfiguration interval_configuration(int n) {
  std::vector<RatVec> pts;
  for (int i = 0; i <= n + 1; ++i) pts.push_back({Rat(i)});
  return make_configuration(pts);
}

bool is_triangulation(const PointConfiguration& config, const Subdivision& s) {
  for (const auto& c : s.cells)
    if (c.vertices.size() != config.lattice_rank + 1 || c.marked != c.vertices) return false;
  return true;
}

Rat normalized_volume(const PointConfiguration& config, const std::vector<int>& cell) {
  const auto pts = points_of(config, cell);
  if (pts.size() == config.lattice_rank + 1) {
    std::vector<RatVec> m;
    for (std::size_t i = 1; i < pts.size(); ++i) m.push_back(sub(pts[i], pts[0]));
    return abs(determinant(m));
  }
  // General cell: sum over a placing triangulation of its vertices.
  PointConfiguration cell_config;
  cell_config.lattice_rank = config.lattice_rank;
  cell_config.points = pts;
  Rat total = 0;
  for (const auto& c : placing_triangulation(cell_config).cells) total += normalized_volume(cell_config, c.vertices);
  return total;
}

Subdivision subdivision_from_height(const PointConfiguration& config, const RatVec& height) {
  const std::size_t n = config.points.size(), d = config.lattice_rank;
  if (height.size() != n) throw DimensionError("height must have one entry per point");
  std::vector<RatVec> lifted;
  for (std::size_t i = 0; i < n; ++i) {
    RatVec x = config.points[i];
    x.push_back(height[i]);
    lifted.push_back(std::move(x));
  }
  const auto p = hull(lifted);
  Subdivision s;
  s.height = height;
  std::vector<int> is_vertex(n, 0);
  for (std::size_t i = 0; i < n; ++i) is_vertex[i] = p.find_vertex(lifted[i]).has_value();

  if (p.dim() == static_cast<int>(d)) {
    Cell c;
    for (std::size_t i = 0; i < n; ++i) {
      c.marked.push_back(static_cast<int>(i));
      if (is_vertex[i]) c.vertices.push_back(static_cast<int>(i));
    }
    s.cells.push_back(std::move(c));
    return s;
  }
  for (const auto& f : p.facets()) {
    if (sgn(f.normal[d]) >= 0) continue;
    Cell c;
    for (std::size_t i = 0; i < n; ++i)
      if (dot(f.normal, lifted[i]) == f.offset) {
        c.marked.push_back(static_cast<int>(i));
        if (is_vertex[i]) c.vertices.push_back(static_cast<int>(i));
      }
    s.cells.push_back(std::move(c));
  }
  normalize(s);
  return s;
}

RegularityResult is_regular(const PointConfiguration& config, const std::vector<Cell>& cells) {
  std::vector<Cell> sorted = cells;
  for (auto& c : sorted) {
    std::sort(c.vertices.begin(), c.vertices.end());
    std::sort(c.marked.begin(), c.marked.end());
  }
  std::sort(sorted.begin(), sorted.end());
  validate(config, sorted);
  auto r = height_lp(config, sorted);
  if (!r.regular) return r;
  // The certificate is checked, not trusted.
  if (subdivision_from_height(config, r.height).cells != sorted) {
    r.regular = false;
    r.witness = "optimal height induces a different subdivision";
    r.height.clear();
  }
  return r;
}

std::vector<Circuit> circuits(const PointConfiguration& config) {
  const int n = static_cast<int>(config.points.size());
  const int max_size = static_cast<int>(config.lattice_rank) + 2;
  std::vector<Circuit> out;
  std::vector<int> z;
  auto consider = [&] {
    const std::size_t k = z.size();
    const std::size_t rows = config.lattice_rank + 1;
    std::vector<RatVec> m(rows, RatVec(k));
    for (std::size_t j = 0; j < k; ++j) {
      const RatVec h = homogenize(config.points[static_cast<std::size_t>(z[j])]);
      for (std::size_t i = 0; i < rows; ++i) m[i][j] = h[i];
    }
    const auto piv = rref(m);
    if (piv.size() + 1 != k) return;
    std::size_t free_col = 0;
    while (std::find(piv.begin(), piv.end(), free_col) != piv.end()) ++free_col;
    RatVec lambda(k, Rat(0));
    lambda[free_col] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) lambda[piv[r]] = -m[r][free_col];
    Circuit c;
    for (std::size_t j = 0; j < k; ++j) {
      if (sgn(lambda[j]) == 0) return;  // not minimal
      (sgn(lambda[j]) > 0 ? c.positive : c.negative).push_back(z[j]);
    }
    if (c.positive.front() > c.negative.front()) std::swap(c.positive, c.negative);
    out.push_back(std::move(c));
  };
  std::function<void(int)> rec = [&](int from) {
    if (z.size() >= 3) consider();
    if (static_cast<int>(z.size()) == max_size) return;
    for (int i = from; i < n; ++i) {
      z.push_back(i);
      rec(i + 1);
      z.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<Subdivision> flips(const PointConfiguration& config, const Subdivision& t) {
  const SimplexSet current = simplices(t);
  std::set<SimplexSet> seen;
  std::vector<Subdivision> out;
  for (const auto& c : circuits(config)) {
    std::vector<int> z = c.positive;
    z.insert(z.end(), c.negative.begin(), c.negative.end());
    std::sort(z.begin(), z.end());
    const SimplexSet plus = circuit_side(z, c.positive), minus = circuit_side(z, c.negative);
    for (int side = 0; side < 2; ++side) {
      const auto& from = side == 0 ? plus : minus;
      const auto& to = side == 0 ? minus : plus;
      auto next = flip_along(current, z, from, to);
      if (!next || !seen.insert(*next).second) continue;
      Subdivision s = from_simplices(*next);
      auto r = height_lp(config, s.cells);
      if (!r.regular || subdivision_from_height(config, r.height).cells != s.cells) continue;
      s.height = r.height;
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Subdivision& a, const Subdivision& b) { return a.cells < b.cells; });
  return out;
}

Subdivision placing_triangulation(const PointConfiguration& config) {
  const std::size_t n = config.points.size();
  for (Int t = 2;; t *= 2) {
    RatVec h;
    Int power = 1;
    for (std::size_t i = 0; i < n; ++i) {
      h.emplace_back(power);
      power *= t;
    }
    auto s = subdivision_from_height(config, h);
    if (is_triangulation(config, s)) return s;
  }
}

std::vector<Subdivision> enumerate_regular_triangulations(const PointConfiguration& config) {
  std::map<RatVec, Subdivision> found;
  std::deque<Subdivision> queue{placing_triangulation(config)};
  found.emplace(gkz_vector(config, queue.front()), queue.front());
  while (!queue.empty()) {
    const Subdivision t = std::move(queue.front());
    queue.pop_front();
    for (auto& s : flips(config, t)) {
      auto key = gkz_vector(config, s);
      if (found.emplace(std::move(key), s).second) queue.push_back(std::move(s));
    }
  }
  std::vector<Subdivision> out;
  for (auto& [k, s] : found) out.push_back(std::move(s));
  return out;
}

RatVec gkz_vector(const PointConfiguration& config, const Subdivision& t) {
  RatVec phi(config.points.size(), Rat(0));
  for (const auto& c : t.cells) {
    const Rat v = normalized_volume(config, c.vertices);
    for (int i : c.vertices) phi[static_cast<std::size_t>(i)] += v;
  }
  return phi;
}

SecondaryPolytope secondary_polytope(const PointConfiguration& config) {
  auto tris = enumerate_regular_triangulations(config);
  std::vector<RatVec> phis;
  for (const auto& t : tris) phis.push_back(gkz_vector(config, t));
  SecondaryPolytope out;
  out.polytope = hull(phis);
  out.triangulations.resize(out.polytope.vertices().size());
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const auto v = out.polytope.find_vertex(phis[i]);
    if (!v) throw std::logic_error("secondary_polytope: GKZ vector is not a vertex");
    out.triangulations[static_cast<std::size_t>(*v)] = std::move(tris[i]);
  }
  return out;
}

}  // namespace lgtk
