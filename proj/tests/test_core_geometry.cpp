#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "lgtk/isomorphism.hpp"
#include "lgtk/lp.hpp"
#include "lgtk/polytope.hpp"
#include "lgtk/rational.hpp"

using namespace lgtk;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::vector<RatVec> pts(std::initializer_list<std::initializer_list<long>> xs) {
  std::vector<RatVec> out;
  for (auto& x : xs) out.push_back(rv(x));
  return out;
}

// x in conv(others)?  Feasibility of lambda >= 0, sum lambda = 1, sum lambda p = x.
bool in_hull_of(const RatVec& x, const std::vector<RatVec>& others) {
  const std::size_t k = others.size();
  std::vector<LinearConstraint> cons;
  auto eq = [&](RatVec c, Rat b) {
    cons.push_back({c, b});
    for (auto& a : c) a = -a;
    cons.push_back({c, -b});
  };
  for (std::size_t i = 0; i < k; ++i) {
    RatVec c(k, Rat(0));
    c[i] = -1;
    cons.push_back({c, Rat(0)});
  }
  eq(RatVec(k, Rat(1)), Rat(1));
  for (std::size_t j = 0; j < x.size(); ++j) {
    RatVec c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = others[i][j];
    eq(c, x[j]);
  }
  return lp_optimize(cons, RatVec(k, Rat(0)), Sense::maximize).status == LpStatus::optimal;
}

// Oracle: the extreme points of a finite set, one LP per point.
std::set<RatVec> brute_vertices(const std::vector<RatVec>& points) {
  std::set<RatVec> uniq(points.begin(), points.end());
  std::vector<RatVec> u(uniq.begin(), uniq.end());
  std::set<RatVec> out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::vector<RatVec> others;
    for (std::size_t j = 0; j < u.size(); ++j)
      if (j != i) others.push_back(u[j]);
    if (others.empty() || !in_hull_of(u[i], others)) out.insert(u[i]);
  }
  return out;
}

void check_hrep(const Polytope& p) {
  for (const auto& v : p.vertices()) {
    for (const auto& f : p.facets()) CHECK(dot(f.normal, v) <= f.offset);
    for (const auto& e : p.equations()) CHECK(dot(e.normal, v) == e.offset);
  }
  for (std::size_t f = 0; f < p.facets().size(); ++f) {
    CHECK(affine_rank([&] {
            std::vector<RatVec> on;
            for (int v : p.incidence()[f]) on.push_back(p.vertices()[static_cast<std::size_t>(v)]);
            return on;
          }()) == p.dim() - 1);
  }
}

long euler(const Polytope& p) {
  const auto f = p.face_lattice().f_vector();
  long s = 0;
  // f_0 - f_1 + ... over proper nonempty faces
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 == 1 ? 1 : -1) * static_cast<long>(f[i]);
  return s;
}

std::set<std::pair<IntVec, Rat>> normalized_facets(const Polytope& p) {
  std::set<std::pair<IntVec, Rat>> out;
  for (std::size_t f = 0; f < p.facets().size(); ++f) {
    const IntVec n = p.canonical_normal(f);
    const auto& v = p.vertices()[static_cast<std::size_t>(p.incidence()[f].front())];
    out.emplace(n, dot(to_rat(n), v));
  }
  return out;
}

}  // namespace

TEST_CASE("rational printing and parsing") {
  CHECK(to_string(Rat(3)) == "3/1");
  CHECK(to_string(Rat(-6) / 4) == "-3/2");
  CHECK(parse_rat("10/4") == Rat(5, 2));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK_THROWS(parse_rat("x"));
}

TEST_CASE("hull of a 1-D interval") {
  const auto p = hull(pts({{0}, {3}}));
  CHECK(p.dim() == 1);
  CHECK(p.vertices().size() == 2);
  CHECK(p.facets().size() == 2);
  check_hrep(p);
}

TEST_CASE("hull of E2 drops the interior point") {
  const auto e2 = pts({{0, 0}, {-1, -1}, {-1, 0}, {0, 1}, {1, 1}, {1, 0}, {0, -1}});
  const auto p = hull(e2);
  CHECK(p.dim() == 2);
  CHECK(p.vertices().size() == 6);
  CHECK(p.facets().size() == 6);
  CHECK(!p.find_vertex(rv({0, 0})));
  CHECK(std::set<RatVec>(p.vertices().begin(), p.vertices().end()) == brute_vertices(e2));
  check_hrep(p);

  // Self-dual hexagon: the inner normal rays are the image of the nonzero
  // points of E2 under the unimodular map (x, y) -> (x - y, y).
  const Fan fan = normal_fan(p);
  CHECK(fan.rays.size() == 6);
  CHECK(fan.cones.size() == 6);
  std::set<IntVec> rays(fan.rays.begin(), fan.rays.end());
  std::set<IntVec> expect;
  for (std::size_t i = 1; i < e2.size(); ++i) expect.insert(IntVec{Int(e2[i][0] - e2[i][1]), Int(e2[i][1])});
  CHECK(rays == expect);
}

TEST_CASE("hull of the GKZ quadrilateral in ambient dimension 4") {
  const auto q = pts({{3, 0, 0, 3}, {1, 3, 0, 2}, {2, 0, 3, 1}, {1, 2, 2, 1}});
  const auto p = hull(q);
  CHECK(p.ambient_dim() == 4);
  CHECK(p.dim() == 2);
  CHECK(p.vertices().size() == 4);
  CHECK(p.facets().size() == 4);
  CHECK(std::set<RatVec>(p.vertices().begin(), p.vertices().end()) == brute_vertices(q));
  check_hrep(p);
  CHECK(p.face_lattice().f_vector() == std::vector<std::size_t>{1, 4, 4, 1});

  // gamma = first coordinate has minimum 1 on the polytope.
  std::vector<LinearConstraint> cons;
  for (const auto& f : p.facets()) cons.push_back({f.normal, f.offset});
  for (const auto& e : p.equations()) {
    cons.push_back({e.normal, e.offset});
    cons.push_back({scale(e.normal, Rat(-1)), -e.offset});
  }
  const auto r = lp_optimize(cons, rv({1, 0, 0, 0}), Sense::minimize);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == 1);

  const auto square = hull(pts({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  const auto iso = combinatorially_isomorphic(p, square);
  REQUIRE(iso);
  CHECK(iso->vertex_map.size() == 4);
}

TEST_CASE("hull rejects ragged input") {
  CHECK_THROWS_AS(hull(pts({{0, 0}, {1}})), DimensionError);
  CHECK_THROWS(hull({}));
}

TEST_CASE("minkowski sums") {
  const auto seg1 = hull(pts({{0, 0}, {1, 0}}));
  const auto seg2 = hull(pts({{0, 0}, {0, 1}}));
  const auto sq = minkowski_sum(seg1, seg2);
  CHECK(std::set<RatVec>(sq.vertices().begin(), sq.vertices().end()) ==
        std::set<RatVec>{rv({0, 0}), rv({0, 1}), rv({1, 0}), rv({1, 1})});

  const auto tri = hull(pts({{0, 0}, {2, 0}, {0, 2}}));
  const auto moved = minkowski_sum(tri, hull(pts({{5, -1}})));
  CHECK(std::set<RatVec>(moved.vertices().begin(), moved.vertices().end()) ==
        std::set<RatVec>{rv({5, -1}), rv({7, -1}), rv({5, 1})});
  CHECK_THROWS_AS(minkowski_sum(tri, hull(pts({{0}}))), DimensionError);
}

TEST_CASE("lp small cases") {
  auto r = lp_optimize({{rv({1}), Rat(3)}, {rv({-1}), Rat(0)}}, rv({1}), Sense::maximize);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.value == 3);
  CHECK(r.point == rv({3}));

  r = lp_optimize({{rv({1}), Rat(0)}, {rv({-1}), Rat(-1)}}, rv({1}), Sense::maximize);
  CHECK(r.status == LpStatus::infeasible);

  r = lp_optimize({{rv({-1, 0}), Rat(0)}, {rv({0, 1}), Rat(2)}}, rv({1, 1}), Sense::maximize);
  REQUIRE(r.status == LpStatus::unbounded);
  CHECK(dot(rv({1, 1}), r.ray) > 0);
  CHECK(dot(rv({-1, 0}), r.ray) <= 0);
  CHECK(dot(rv({0, 1}), r.ray) <= 0);
}

TEST_CASE("lp agrees with brute-force vertex enumeration") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4), bnd(-3, 6), nc(1, 5), dd(1, 3);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t d = static_cast<std::size_t>(dd(rng));
    std::vector<LinearConstraint> cons;
    // A box keeps every instance bounded and pointed.
    for (std::size_t j = 0; j < d; ++j) {
      RatVec up(d, Rat(0)), lo(d, Rat(0));
      up[j] = 1;
      lo[j] = -1;
      cons.push_back({up, Rat(4)});
      cons.push_back({lo, Rat(4)});
    }
    const int extra = std::min(nc(rng), 8 - static_cast<int>(2 * d));
    for (int k = 0; k < extra; ++k) {
      RatVec a(d);
      for (auto& x : a) x = coef(rng);
      cons.push_back({a, Rat(bnd(rng))});
    }
    RatVec obj(d);
    for (auto& x : obj) x = coef(rng);

    std::optional<Rat> best;
    std::vector<std::size_t> pick(d);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t at, std::size_t from) {
      if (at == d) {
        std::vector<RatVec> m;
        RatVec rhs;
        for (auto i : pick) {
          m.push_back(cons[i].coeffs);
          rhs.push_back(cons[i].bound);
        }
        if (rank(m) < d) return;
        const RatVec x = solve(m, rhs);
        for (const auto& c : cons)
          if (dot(c.coeffs, x) > c.bound) return;
        const Rat v = dot(obj, x);
        if (!best || v > *best) best = v;
        return;
      }
      for (std::size_t i = from; i < cons.size(); ++i) {
        pick[at] = i;
        rec(at + 1, i + 1);
      }
    };
    rec(0, 0);

    const auto r = lp_optimize(cons, obj, Sense::maximize);
    if (best) {
      REQUIRE(r.status == LpStatus::optimal);
      CHECK(r.value == *best);
      for (const auto& c : cons) CHECK(dot(c.coeffs, r.point) <= c.bound);
      ++optimal;
    } else {
      CHECK(r.status == LpStatus::infeasible);
      ++infeasible;
    }
  }
  CHECK(optimal > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("euler relation and round trip on random polytopes") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-3, 3), np(4, 12), dd(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = static_cast<std::size_t>(dd(rng));
    std::vector<RatVec> in;
    const int n = np(rng);
    for (int i = 0; i < n; ++i) {
      RatVec x(d);
      for (auto& v : x) v = c(rng);
      in.push_back(x);
    }
    const auto p = hull(in);
    check_hrep(p);
    CHECK(std::set<RatVec>(p.vertices().begin(), p.vertices().end()) == brute_vertices(in));
    CHECK(euler(p) == 1 - (p.dim() % 2 == 0 ? 1 : -1));
    const auto& fl = p.face_lattice();
    CHECK(fl.of_dim(0).size() == p.vertices().size());
    if (p.dim() >= 1) CHECK(fl.of_dim(p.dim() - 1).size() == p.facets().size());
    CHECK(fl.of_dim(1).size() == (p.dim() >= 1 ? p.edges().size() : 0));

    const auto again = hull(p.vertices());
    CHECK(again.vertices() == p.vertices());
    CHECK(normalized_facets(again) == normalized_facets(p));

    const auto self = combinatorially_isomorphic(p, p);
    CHECK(self.has_value());
  }
}

TEST_CASE("normal fan of an interval") {
  const Fan fan = normal_fan(hull(pts({{0}, {3}})));
  CHECK(std::set<IntVec>(fan.rays.begin(), fan.rays.end()) ==
        std::set<IntVec>{IntVec{Int(1)}, IntVec{Int(-1)}});
  CHECK(fan.cones.size() == 2);
}

// For generic full-dimensional P, Q the maximal cones of the common refinement
// are the full-dimensional intersections C_P(v) ∩ C_Q(u); each should match the
// cone of the vertex v + u of P + Q.
TEST_CASE("normal fan of a minkowski sum refines both fans") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-4, 4), np(3, 6), dd(2, 3);
  int done = 0;
  while (done < 20) {
    const std::size_t d = static_cast<std::size_t>(dd(rng));
    auto random_poly = [&] {
      std::vector<RatVec> in;
      const int n = np(rng) + static_cast<int>(d);
      for (int i = 0; i < n; ++i) {
        RatVec x(d);
        for (auto& v : x) v = c(rng);
        in.push_back(x);
      }
      return hull(in);
    };
    const auto p = random_poly(), q = random_poly();
    if (p.dim() != static_cast<int>(d) || q.dim() != static_cast<int>(d)) continue;
    ++done;
    const auto s = minkowski_sum(p, q);

    // Interior of the cone {c : <c, x - v> > 0 for other vertices x}.
    auto interior_meets = [&](const Polytope& a, std::size_t va, const Polytope& b, std::size_t vb) {
      std::vector<LinearConstraint> cons;
      auto add_cone = [&](const Polytope& poly, std::size_t v) {
        for (std::size_t x = 0; x < poly.vertices().size(); ++x) {
          if (x == v) continue;
          RatVec row = sub(poly.vertices()[v], poly.vertices()[x]);
          row.push_back(Rat(1));  // <c, v - x> + t <= 0
          cons.push_back({row, Rat(0)});
        }
      };
      add_cone(a, va);
      add_cone(b, vb);
      for (std::size_t j = 0; j < d; ++j) {
        RatVec up(d + 1, Rat(0)), lo(d + 1, Rat(0));
        up[j] = 1;
        lo[j] = -1;
        cons.push_back({up, Rat(1)});
        cons.push_back({lo, Rat(1)});
      }
      RatVec obj(d + 1, Rat(0));
      obj[d] = 1;
      const auto r = lp_optimize(cons, obj, Sense::maximize);
      return r.status == LpStatus::optimal && r.value > 0;
    };

    std::set<RatVec> refined;
    for (std::size_t v = 0; v < p.vertices().size(); ++v)
      for (std::size_t u = 0; u < q.vertices().size(); ++u)
        if (interior_meets(p, v, q, u)) refined.insert(add(p.vertices()[v], q.vertices()[u]));
    CHECK(refined == std::set<RatVec>(s.vertices().begin(), s.vertices().end()));

    const Fan fs = normal_fan(s), fp = normal_fan(p), fq = normal_fan(q);
    CHECK(fs.cones.size() == refined.size());
    // Every ray of the sum's fan is a ray of the refinement: it is the
    // intersection of faces of the two input fans.
    for (const auto& ray : fs.rays) {
      const RatVec r = to_rat(ray);
      auto minimized_face = [&](const Polytope& poly) {
        Rat lo = dot(r, poly.vertices()[0]);
        for (const auto& v : poly.vertices()) lo = std::min(lo, dot(r, v));
        std::vector<RatVec> face;
        for (const auto& v : poly.vertices())
          if (dot(r, v) == lo) face.push_back(v);
        return face;
      };
      std::vector<RatVec> sums;
      for (const auto& a : minimized_face(p))
        for (const auto& b : minimized_face(q)) sums.push_back(add(a, b));
      CHECK(affine_rank(sums) == static_cast<int>(d) - 1);
    }
    CHECK(fs.rays.size() >= std::max(fp.rays.size(), fq.rays.size()));
  }
}

TEST_CASE("combinatorial isomorphism") {
  const auto square = hull(pts({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  const auto rhombus = hull(pts({{0, 0}, {2, 1}, {1, 2}, {3, 3}}));
  const auto tri = hull(pts({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(combinatorially_isomorphic(square, rhombus).has_value());
  CHECK(!combinatorially_isomorphic(square, tri).has_value());

  const auto cube = hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                              {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
  const auto prism = hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}}));
  const auto octa = hull(pts({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}));
  CHECK(!combinatorially_isomorphic(cube, prism).has_value());
  CHECK(!combinatorially_isomorphic(cube, octa).has_value());

  const auto iso = combinatorially_isomorphic(cube, cube);
  REQUIRE(iso);
  // The witness maps facets to facets with matching vertex sets.
  for (std::size_t f = 0; f < cube.facets().size(); ++f) {
    std::vector<int> img;
    for (int v : cube.incidence()[f]) img.push_back(iso->vertex_map[static_cast<std::size_t>(v)]);
    std::sort(img.begin(), img.end());
    CHECK(img == cube.incidence()[static_cast<std::size_t>(iso->facet_map[f])]);
  }

  const std::vector<std::pair<int, int>> c4{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  const std::vector<std::pair<int, int>> p4{{0, 1}, {1, 2}, {2, 3}, {1, 3}};
  CHECK(graph_isomorphic(4, c4, 4, square.edges()).has_value());
  CHECK(!graph_isomorphic(4, c4, 4, p4).has_value());
}

TEST_CASE("describe") { CHECK(describe(hull(pts({{0, 0}, {1, 0}, {0, 1}}))) == "dim 2, 3 vertices, 3 facets (ambient 2)"); }
