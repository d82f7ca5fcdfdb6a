#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "lgtk/lafforgue.hpp"

using namespace lgtk;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntVec column(const XiMatrix& x, std::size_t c) {
  IntVec col;
  for (const auto& row : x.matrix) col.push_back(row[c]);
  return col;
}

bool positive_multiple(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) return false;
  std::optional<Rat> ratio;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((sgn(a[i]) == 0) != (sgn(b[i]) == 0)) return false;
    if (sgn(a[i]) == 0) continue;
    const Rat r = Rat(a[i]) / Rat(b[i]);
    if (sgn(r) <= 0 || (ratio && *ratio != r)) return false;
    ratio = r;
  }
  return ratio.has_value();
}

}  // namespace

TEST_CASE("xi matrix block display") {
  const auto x1 = an_xi_matrix(1);
  CHECK(x1.matrix == std::vector<IntVec>{iv({-1, 0, 1, 1, -1}), iv({2, -1, -1, 0, 0})});

  const auto x2 = an_xi_matrix(2);
  REQUIRE(x2.matrix.size() == 3);
  CHECK(x2.matrix[0] == iv({-1, 0, 0, 0, 1, 1, 1, -1}));
  CHECK(x2.matrix[1] == iv({2, -1, -1, 0, -1, 0, 0, 0}));
  CHECK(x2.matrix[2] == iv({-1, 2, 0, -1, 0, -1, 0, 0}));
  CHECK_THROWS(an_xi_matrix(0));
}

TEST_CASE("xi columns from the generator formulas") {
  // g_{2i} = sum_{j>i} (j-i) e_j, g_{3i} = sum_{j<=i} (i-j) e_j, g_i = e_i.
  for (int n = 1; n <= 4; ++n) {
    const auto x = an_xi_matrix(n);
    for (int i = 1; i <= n; ++i) {
      RatVec drop(static_cast<std::size_t>(n + 2), Rat(0)), g2 = drop, g3 = drop;
      drop[static_cast<std::size_t>(i)] = 1;
      for (int j = i + 1; j <= n + 1; ++j) g2[static_cast<std::size_t>(j)] = j - i;
      for (int j = 0; j <= i; ++j) g3[static_cast<std::size_t>(j)] = i - j;
      const auto k = static_cast<std::size_t>(i - 1), nn = static_cast<std::size_t>(n);
      CHECK(gamma_coordinates(n, drop) == column(x, k));
      CHECK(gamma_coordinates(n, g2) == column(x, nn + k));
      CHECK(gamma_coordinates(n, g3) == column(x, 2 * nn + k));
    }
  }
}

TEST_CASE("Lafforgue polytope of {0,1,2}") {
  const auto p = lafforgue_polytope(interval_configuration(1));
  CHECK(p.dim() == 2);
  CHECK(p.facets().size() == 5);
}

TEST_CASE("Lafforgue polytope of {0,1,2,3}") {
  const auto p = lafforgue_polytope(interval_configuration(2));
  CHECK(p.dim() == 3);
  CHECK(p.facets().size() == 8);
}

TEST_CASE("facet labels and xi matching") {
  for (int n = 1; n <= 5; ++n) {
    const auto config = interval_configuration(n);
    const auto sec = secondary_polytope(config);
    const auto laf = lafforgue_polytope(config, sec.polytope);
    CHECK(laf.dim() == n + 1);
    CHECK(laf.facets().size() == static_cast<std::size_t>(3 * n + 2));
    const auto labels = an_pointed_facet_labels(n, laf);

    std::map<FacetType, int> counts;
    std::set<FacetLabel> distinct;
    for (const auto& lf : labels) {
      ++counts[lf.label.type];
      distinct.insert(lf.label);
    }
    CHECK(distinct.size() == labels.size());
    CHECK(counts[FacetType::interior_point_drop] == n);
    CHECK(counts[FacetType::right_pointed_split] == n);
    CHECK(counts[FacetType::left_pointed_split] == n);
    CHECK(counts[FacetType::vertical_0] == 1);
    CHECK(counts[FacetType::vertical_last] == 1);

    if (n > 3) continue;
    const auto x = an_xi_matrix(n);
    std::set<std::size_t> used;
    for (const auto& lf : labels) {
      const IntVec g = gamma_coordinates(n, to_rat(lf.inner_normal));
      int matches = 0;
      for (std::size_t c = 0; c < x.columns.size(); ++c)
        if (positive_multiple(g, column(x, c))) {
          ++matches;
          used.insert(c);
          CHECK(x.columns[c] == lf.label);
        }
      CHECK(matches == 1);
      if (lf.label.type == FacetType::right_pointed_split) {
        std::vector<int> expect;
        for (int j = 0; j <= lf.label.index; ++j) expect.push_back(j);
        CHECK(lf.pointed.pointing == expect);
      }
    }
    CHECK(used.size() == x.columns.size());
  }
}

TEST_CASE("Lafforgue fan is simplicial with pointed triangulation cones and refines the secondary fan") {
  for (int n = 1; n <= 3; ++n) {
    const auto config = interval_configuration(n);
    const auto sec = secondary_polytope(config);
    const auto laf = lafforgue_polytope(config, sec.polytope);
    std::size_t expect = 0;
    for (int mask = 0; mask < (1 << n); ++mask) expect += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)) + 2);
    CHECK(laf.vertices().size() == expect);

    std::vector<std::vector<int>> through(laf.vertices().size());
    for (std::size_t f = 0; f < laf.facets().size(); ++f)
      for (int v : laf.incidence()[f]) through[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
    for (const auto& fs : through) CHECK(fs.size() == static_cast<std::size_t>(n + 1));

    // Each Lafforgue cone sits inside the normal cone of one secondary vertex.
    const auto& sv = sec.polytope.vertices();
    for (std::size_t v = 0; v < laf.vertices().size(); ++v) {
      bool contained = false;
      for (std::size_t s = 0; s < sv.size() && !contained; ++s) {
        bool all = true;
        for (int f : through[v]) {
          RatVec u;
          for (const auto& x : laf.canonical_normal(static_cast<std::size_t>(f))) u.emplace_back(-x);
          Rat lo = dot(u, sv[0]);
          for (const auto& w : sv) lo = std::min(lo, dot(u, w));
          all = all && dot(u, sv[s]) == lo;
        }
        contained = all;
      }
      CHECK(contained);
    }
  }
}

TEST_CASE("label names") {
  CHECK(short_name({FacetType::left_pointed_split, 3}) == "lsplit-3");
  CHECK(to_string(FacetType::vertical_last) == "vertical-(n+1)");
}

// Intrinsic dimension is |A| - 1 = 6; the polytope lives in R^A = R^7.
TEST_CASE("Lafforgue polytope of E2 spans the sum-zero hyperplane of R^7") {
  std::vector<RatVec> p;
  for (auto [x, y] : std::vector<std::pair<int, int>>{{0, 0}, {-1, -1}, {-1, 0}, {0, 1}, {1, 1}, {1, 0}, {0, -1}})
    p.push_back({Rat(x), Rat(y)});
  const auto laf = lafforgue_polytope(make_configuration(p));
  CHECK(laf.ambient_dim() == 7);
  CHECK(laf.dim() == 6);
  CHECK(laf.equations().size() == 1);
}
