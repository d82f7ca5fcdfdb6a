#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "lgtk/an.hpp"

using namespace lgtk;

namespace {

std::set<int> k_of(const Subdivision& t, int n) {
  std::set<int> k;
  for (const auto& c : t.cells)
    for (int v : c.vertices)
      if (v != 0 && v != n + 1) k.insert(v);
  return k;
}

// Straight from the definition: m is below s and every point strictly between
// them, going backwards from s, is above s. Returns all admissible m.
std::vector<int> admissible(const CyclicInsertion& ins, int s) {
  auto rank = [&](int x) {
    auto it = std::find(ins.s2.begin(), ins.s2.end(), x);
    return it == ins.s2.end() ? -1 : static_cast<int>(it - ins.s2.begin());
  };
  const int len = static_cast<int>(ins.s3.size());
  const int pos = static_cast<int>(std::find(ins.s3.begin(), ins.s3.end(), s) - ins.s3.begin());
  std::vector<int> out;
  for (int d = 1; d < len; ++d) {
    const int m = ins.s3[static_cast<std::size_t>((pos - d + len) % len)];
    if (rank(m) >= rank(s)) continue;
    bool ok = true;
    for (int e = 1; e < d; ++e)
      ok = ok && rank(ins.s3[static_cast<std::size_t>((pos - e + len) % len)]) > rank(s);
    if (ok) out.push_back(m);
  }
  return out;
}

CyclicInsertion random_insertion(std::mt19937& rng, int a, int b) {
  CyclicInsertion ins;
  std::vector<int> labels(static_cast<std::size_t>(a + b));
  std::iota(labels.begin(), labels.end(), 1);
  std::shuffle(labels.begin(), labels.end(), rng);
  ins.s1.assign(labels.begin(), labels.begin() + a);
  ins.s2.assign(labels.begin() + a, labels.end());
  ins.s3 = ins.s1;
  for (int s : ins.s2) {
    std::uniform_int_distribution<std::size_t> pos(0, ins.s3.size());
    ins.s3.insert(ins.s3.begin() + static_cast<long>(pos(rng)), s);
  }
  std::rotate(ins.s3.begin(), ins.s3.begin() + static_cast<long>(rng() % ins.s3.size()), ins.s3.end());
  return ins;
}

bool is_tree(int vertices, const VanishingTree& t) {
  if (static_cast<int>(t.edges.size()) != vertices - 1) return false;
  std::map<int, std::set<int>> adj;
  for (const auto& e : t.edges) {
    adj[e.a].insert(e.b);
    adj[e.b].insert(e.a);
  }
  std::set<int> seen{1};
  std::vector<int> stack{1};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (seen.insert(w).second) stack.push_back(w);
  }
  return static_cast<int>(seen.size()) == vertices && *seen.rbegin() == vertices;
}

}  // namespace

TEST_CASE("degenerations") {
  CHECK(make_degeneration(7, {2, 4}).k == std::vector<int>{1, 2, 4, 8});
  CHECK(make_degeneration(7, {1, 2, 4, 8}).k == std::vector<int>{1, 2, 4, 8});
  CHECK(make_degeneration(3, {}).k == std::vector<int>{1, 4});
  CHECK(make_degeneration(7, {4, 2}).interior() == std::vector<int>{2, 4});
  CHECK(to_string(make_degeneration(7, {2, 4})) == "1,2,4,8");
  CHECK_THROWS_AS(make_degeneration(3, {5}), std::invalid_argument);
  CHECK_THROWS_AS(make_degeneration(3, {0}), std::invalid_argument);
  CHECK_THROWS_AS(make_degeneration(3, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_degeneration(0, {}), std::invalid_argument);
  for (int n = 1; n <= 6; ++n) CHECK(all_degenerations(n).size() == std::size_t{1} << (n - 1));
}

TEST_CASE("circuits") {
  CHECK(circuits(make_degeneration(7, {2, 4})) == std::vector<std::vector<int>>{{0, 1, 2}, {0, 2, 4}, {0, 4, 8}});
  CHECK(circuits(make_degeneration(5, {})) == std::vector<std::vector<int>>{{0, 1, 6}});
  CHECK(circuits(make_degeneration(2, {2})) == std::vector<std::vector<int>>{{0, 1, 2}, {0, 2, 3}});
}

TEST_CASE("paths from J on the two-point interval") {
  using KS = std::vector<std::set<int>>;
  CHECK(path_k_sets(make_degeneration(2, {})) == KS{{1}, {}});
  CHECK(path_k_sets(make_degeneration(2, {2})) == KS{{1, 2}, {2}, {}});
  CHECK(path_k_sets(make_degeneration(7, {2, 4})) == KS{{1, 2, 4}, {2, 4}, {4}, {}});
}

TEST_CASE("path_from_J is a bijection onto coherent monotone paths") {
  for (int n = 1; n <= 5; ++n) {
    const auto sec = secondary_polytope(interval_configuration(n));
    const auto gamma = coordinate_functional(static_cast<std::size_t>(n + 2), 0);
    const auto mpp = monotone_path_polytope(sec.polytope, gamma);
    std::set<std::vector<int>> coherent;
    for (const auto& p : mpp.paths)
      if (p.coherent) coherent.insert(p.vertices);
    std::set<std::vector<int>> hit;
    for (const auto& j : all_degenerations(n)) {
      const auto p = path_from_J(j, sec, &mpp);
      CHECK(p.coherent);
      CHECK(coherent.count(p.vertices) == 1);
      hit.insert(p.vertices);
      const auto ks = path_k_sets(j);
      for (std::size_t i = 0; i < ks.size(); ++i)
        CHECK(k_of(sec.triangulations[static_cast<std::size_t>(p.vertices[i])], n) == ks[i]);
    }
    CHECK(hit == coherent);
  }
}

TEST_CASE("the J = {1,2,4,8} path has four vertices") {
  const auto j = make_degeneration(7, {2, 4});
  const auto sec = secondary_polytope(interval_configuration(7));
  const auto p = path_from_J(j, sec);
  REQUIRE(p.vertices.size() == 4);
  std::set<std::pair<int, int>> edges(sec.polytope.edges().begin(), sec.polytope.edges().end());
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    const int a = p.vertices[i], b = p.vertices[i + 1];
    CHECK(edges.count({std::min(a, b), std::max(a, b)}) == 1);
    CHECK(sec.polytope.vertices()[static_cast<std::size_t>(a)][0] < sec.polytope.vertices()[static_cast<std::size_t>(b)][0]);
  }
}

TEST_CASE("insertion graph examples") {
  // (1,1) insertion: the two points are joined.
  CHECK(insertion_graph({{10}, {20}, {10, 20}}) == std::vector<std::pair<int, int>>{{20, 10}});
  CHECK(insertion_graph({{10}, {20}, {20, 10}}) == std::vector<std::pair<int, int>>{{20, 10}});

  // Alternating a, s1, b, s2: each s_i meets an S1 neighbour.
  const CyclicInsertion alt{{1, 2}, {3, 4}, {1, 3, 2, 4}};
  CHECK(insertion_graph(alt) == std::vector<std::pair<int, int>>{{3, 1}, {4, 2}});

  // s1, s2 adjacent between a and b.
  const CyclicInsertion adj{{1, 2}, {3, 4}, {1, 3, 4, 2}};
  CHECK(insertion_graph(adj) == std::vector<std::pair<int, int>>{{3, 1}, {4, 3}});
  const CyclicInsertion adj2{{1, 2}, {3, 4}, {1, 4, 3, 2}};
  CHECK(insertion_graph(adj2) == std::vector<std::pair<int, int>>{{3, 1}, {4, 1}});

  CHECK_THROWS_AS(insertion_graph({{}, {3}, {3}}), std::invalid_argument);
  CHECK_THROWS_AS(validate({{1, 2, 3}, {4}, {1, 3, 2, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(validate({{1, 2}, {2}, {1, 2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(validate({{1, 2}, {3}, {1, 2, 4}}), std::invalid_argument);
  CHECK_NOTHROW(validate({{1, 2, 3}, {4}, {2, 3, 4, 1}}));
}

TEST_CASE("insertion graph agrees with the interval definition") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int a = 1 + static_cast<int>(rng() % 5), b = 1 + static_cast<int>(rng() % 5);
    const auto ins = random_insertion(rng, a, b);
    const auto edges = insertion_graph(ins);
    REQUIRE(edges.size() == ins.s2.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto adm = admissible(ins, ins.s2[i]);
      REQUIRE(adm.size() == 1);
      CHECK(edges[i] == std::pair{ins.s2[i], adm[0]});
    }
  }
}

TEST_CASE("canonical insertions") {
  const auto ins = canonical_insertions(make_degeneration(7, {2, 4}));
  REQUIRE(ins.size() == 3);
  const std::vector<std::pair<std::size_t, std::size_t>> sizes{{1, 1}, {2, 2}, {4, 4}};
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(ins[t].s1.size() == sizes[t].first);
    CHECK(ins[t].s2.size() == sizes[t].second);
  }
  CHECK(ins[2].s1 == std::vector<int>{1, 2, 4, 3});
  CHECK(ins[2].s3 == std::vector<int>{1, 2, 4, 3, 8, 7, 6, 5});

  const auto one = canonical_insertions(make_degeneration(4, {}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].s1 == std::vector<int>{1});
  CHECK(one[0].s2 == std::vector<int>{2, 3, 4, 5});

  CHECK(canonical_insertions(make_degeneration(4, {2, 3, 4})).size() == 4);

  for (int n = 1; n <= 7; ++n)
    for (const auto& j : all_degenerations(n))
      for (const auto& c : canonical_insertions(j)) {
        CHECK_NOTHROW(validate(c));
        // The inserted block is contiguous, so a stage with |S2| >= 2 is never a shuffle.
        if (c.s2.size() >= 2) CHECK_FALSE(is_perfect_shuffle(c));
      }
  CHECK(is_perfect_shuffle({{1, 2}, {3, 4}, {1, 3, 2, 4}}));
  CHECK_FALSE(is_perfect_shuffle({{1, 2}, {3, 4}, {1, 3, 4, 2}}));
}

TEST_CASE("vanishing trees") {
  const auto j = make_degeneration(7, {2, 4});
  const auto t = vanishing_tree(j, canonical_insertions(j));
  const std::vector<VanishingEdge> expect{{2, 1, 1, 1}, {4, 2, 2, 2}, {3, 2, 3, 2}, {8, 3, 4, 3},
                                          {7, 3, 5, 3}, {6, 3, 6, 3}, {5, 3, 7, 3}};
  CHECK(t.edges == expect);

  // Single stage: a star around 1.
  const auto star = vanishing_tree(make_degeneration(5, {}), canonical_insertions(make_degeneration(5, {})));
  for (const auto& e : star.edges) CHECK(e.b == 1);

  // All breakpoints: a chain.
  const auto all = make_degeneration(5, {2, 3, 4, 5});
  for (const auto& e : vanishing_tree(all, canonical_insertions(all)).edges) CHECK(e.a == e.b + 1);

  for (int n = 1; n <= 8; ++n)
    for (const auto& dj : all_degenerations(n)) {
      const auto tree = vanishing_tree(dj, canonical_insertions(dj));
      CHECK(is_tree(n + 1, tree));
      std::map<int, int> per_stage;
      for (const auto& e : tree.edges) ++per_stage[e.stage];
      for (int s = 1; s <= dj.stages(); ++s)
        CHECK(per_stage[s] == dj.k[static_cast<std::size_t>(s)] - dj.k[static_cast<std::size_t>(s - 1)]);
      std::set<int> labels;
      for (const auto& e : tree.edges) labels.insert(e.label);
      CHECK(labels.size() == static_cast<std::size_t>(n));
      CHECK(*labels.begin() == 1);
      CHECK(*labels.rbegin() == n);
    }

  auto bad = canonical_insertions(j);
  bad.pop_back();
  CHECK_THROWS_AS(vanishing_tree(j, bad), std::invalid_argument);
  auto unchained = canonical_insertions(j);
  std::swap(unchained[2].s1[1], unchained[2].s1[2]);
  std::swap(unchained[2].s3[1], unchained[2].s3[2]);
  CHECK_THROWS_AS(vanishing_tree(j, unchained), std::invalid_argument);
}

TEST_CASE("quivers and perversity") {
  const auto q = quiver_from_J(make_degeneration(3, {2}));
  CHECK(q.orientation(2) == -1);
  CHECK(q.orientation(3) == 1);
  CHECK(q.arrows() == std::vector<std::pair<int, int>>{{2, 1}, {2, 3}});
  for (int i = 2; i <= 5; ++i) CHECK(quiver_from_J(make_degeneration(5, {})).orientation(i) == 1);
  for (int i = 2; i <= 5; ++i) CHECK(quiver_from_J(make_degeneration(5, {2, 3, 4, 5})).orientation(i) == -1);

  CHECK(perversity(make_degeneration(4, {})) == std::vector<int>{0, 0, 0, 0});
  CHECK(perversity(make_degeneration(3, {2})) == std::vector<int>{1, 1, 1});
  const auto rev = perversity(make_degeneration(5, {2, 3, 4, 5}));
  for (int i = 1; i < 5; ++i) CHECK(rev[static_cast<std::size_t>(i - 1)] == i);

  // Against the half-integer formula evaluated in rationals.
  for (int n = 1; n <= 6; ++n)
    for (const auto& dj : all_degenerations(n)) {
      const auto qq = quiver_from_J(dj);
      const auto p = perversity(dj);
      for (int jj = 1; jj <= n; ++jj) {
        Rat v = Rat(jj, 2);
        for (int i = 1; i <= jj; ++i) v -= Rat(qq.orientation(i + 1), 2);
        CHECK(v == p[static_cast<std::size_t>(jj - 1)]);
      }
    }
}

TEST_CASE("Yoneda dimensions") {
  const auto a2 = yoneda_dimensions(make_degeneration(2, {}));
  int sum = 0;
  for (const auto& row : a2.total)
    for (int x : row) sum += x;
  CHECK(sum == 3);
  CHECK_THROWS_AS(yoneda_dimensions(make_degeneration(7, {})), std::invalid_argument);

  for (int n = 1; n <= 6; ++n)
    for (const auto& j : all_degenerations(n)) {
      const auto y = yoneda_dimensions(j);
      CHECK(y.unitriangular());
      // Placing each cone's top term one step below the previous reversal count
      // makes every Ext sit in degree 0.
      std::vector<int> shifted{0};
      const auto p = perversity(j);
      shifted.insert(shifted.end(), p.begin(), p.end() - 1);
      CHECK(yoneda_dimensions(j, shifted).strong());
    }

  // The literal perversity leaves an Ext^1 for n = 2, J = {2}.
  const auto lit = yoneda_dimensions(make_degeneration(2, {2}));
  CHECK_FALSE(lit.strong());
  CHECK(lit.graded[0][1] == std::map<int, int>{{1, 1}});
}

TEST_CASE("R(J) and E_J have the same ungraded dimensions") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& j : all_degenerations(n)) {
      const auto tree = vanishing_tree(j, canonical_insertions(j));
      CHECK(thimble_dimensions(tree) == yoneda_dimensions(j).total);
    }
}

TEST_CASE("dot output") {
  const auto j = make_degeneration(2, {});
  const auto dot = to_dot(vanishing_tree(j, canonical_insertions(j)));
  CHECK(dot == "graph vanishing_tree {\n  1;\n  2;\n  3;\n  3 -- 1 [label=\"1\", stage=1];\n  2 -- 1 [label=\"2\", stage=1];\n}\n");
  CHECK(to_dot(quiver_from_J(make_degeneration(3, {2}))) ==
        "digraph quiver {\n  1;\n  2;\n  3;\n  2 -> 1 [label=\"e2 -\"];\n  2 -> 3 [label=\"e3 +\"];\n}\n");
}
