#include "lgtk/an.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lgtk {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Cyclic subsequence test: `sub` read from some rotation appears in `seq` in order.
bool cyclic_subsequence(const std::vector<int>& sub, const std::vector<int>& seq) {
  if (sub.empty()) return true;
  std::vector<int> filtered;
  for (int x : seq)
    if (std::find(sub.begin(), sub.end(), x) != sub.end()) filtered.push_back(x);
  if (filtered.size() != sub.size()) return false;
  auto start = std::find(filtered.begin(), filtered.end(), sub[0]);
  std::rotate(filtered.begin(), start, filtered.end());
  return filtered == sub;
}

std::set<int> interior_points(const Subdivision& t, int n) {
  std::set<int> k;
  for (const auto& c : t.cells)
    for (int v : c.vertices)
      if (v != 0 && v != n + 1) k.insert(v);
  return k;
}

}  // namespace

std::vector<int> DegenerationJ::interior() const {
  if (k.size() < 2) return {};
  return {k.begin() + 1, k.end() - 1};
}

DegenerationJ make_degeneration(int n, std::vector<int> breakpoints) {
  if (n < 1) throw std::invalid_argument("degeneration: n must be at least 1");
  std::sort(breakpoints.begin(), breakpoints.end());
  if (std::adjacent_find(breakpoints.begin(), breakpoints.end()) != breakpoints.end())
    throw std::invalid_argument("degeneration: repeated breakpoint");
  for (int b : breakpoints)
    if (b < 1 || b > n + 1) throw std::invalid_argument("degeneration: breakpoint " + std::to_string(b) + " outside 1.." + std::to_string(n + 1));
  if (breakpoints.empty() || breakpoints.front() != 1) breakpoints.insert(breakpoints.begin(), 1);
  if (breakpoints.back() != n + 1) breakpoints.push_back(n + 1);
  return {n, std::move(breakpoints)};
}

std::vector<DegenerationJ> all_degenerations(int n) {
  if (n < 1) throw std::invalid_argument("degeneration: n must be at least 1");
  std::vector<DegenerationJ> out;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> b;
    for (int i = 2; i <= n; ++i)
      if (mask >> (i - 2) & 1) b.push_back(i);
    out.push_back(make_degeneration(n, b));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  return out;
}

std::string to_string(const DegenerationJ& j) {
  std::string s;
  for (std::size_t i = 0; i < j.k.size(); ++i) s += (i ? "," : "") + std::to_string(j.k[i]);
  return s;
}

std::vector<std::set<int>> path_k_sets(const DegenerationJ& j) {
  std::vector<std::set<int>> out;
  for (std::size_t i = 0; i < j.k.size(); ++i) out.emplace_back(j.k.begin() + static_cast<long>(i), j.k.end() - 1);
  return out;
}

MonotonePath path_from_J(const DegenerationJ& j, const SecondaryPolytope& secondary, const MonotonePathPolytope* mpp) {
  const auto ks = path_k_sets(j);
  MonotonePath path;
  for (const auto& k : ks) {
    int found = -1;
    for (std::size_t v = 0; v < secondary.triangulations.size(); ++v)
      if (interior_points(secondary.triangulations[v], j.n) == k) found = static_cast<int>(v);
    if (found < 0) throw std::invalid_argument("path_from_J: secondary polytope does not belong to this interval");
    path.vertices.push_back(found);
  }
  const auto gamma = coordinate_functional(at(j.n + 2), 0);
  path.point = path_point(secondary.polytope, gamma, path.vertices);
  if (mpp) path.coherent = mpp->polytope.find_vertex(path.point).has_value();
  return path;
}

MonotonePath path_from_J(const DegenerationJ& j) {
  const auto sec = secondary_polytope(interval_configuration(j.n));
  const auto mpp = monotone_path_polytope(sec.polytope, coordinate_functional(at(j.n + 2), 0));
  return path_from_J(j, sec, &mpp);
}

std::vector<std::vector<int>> circuits(const DegenerationJ& j) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 1; i < j.k.size(); ++i) out.push_back({0, j.k[i - 1], j.k[i]});
  return out;
}

void validate(const CyclicInsertion& ins) {
  std::vector<int> both = ins.s1;
  both.insert(both.end(), ins.s2.begin(), ins.s2.end());
  std::sort(both.begin(), both.end());
  if (std::adjacent_find(both.begin(), both.end()) != both.end())
    throw std::invalid_argument("cyclic insertion: S1 and S2 overlap or repeat");
  std::vector<int> s3 = ins.s3;
  std::sort(s3.begin(), s3.end());
  if (s3 != both) throw std::invalid_argument("cyclic insertion: S3 is not S1 + S2");
  if (!cyclic_subsequence(ins.s1, ins.s3))
    throw std::invalid_argument("cyclic insertion: S1 order not preserved");
}

std::vector<std::pair<int, int>> insertion_graph(const CyclicInsertion& ins) {
  validate(ins);
  std::map<int, std::size_t> rank;
  for (std::size_t r = 0; r < ins.s2.size(); ++r) rank[ins.s2[r]] = r;
  auto below = [&](int x, int s) {
    auto it = rank.find(x);
    return it == rank.end() || it->second < rank.at(s);
  };
  const std::size_t len = ins.s3.size();
  std::vector<std::pair<int, int>> edges;
  for (int s : ins.s2) {
    const std::size_t pos = static_cast<std::size_t>(std::find(ins.s3.begin(), ins.s3.end(), s) - ins.s3.begin());
    bool found = false;
    for (std::size_t d = 1; d < len && !found; ++d) {
      const int x = ins.s3[(pos + len - d) % len];
      if (below(x, s)) {
        edges.emplace_back(s, x);
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("insertion_graph: no element below " + std::to_string(s));
  }
  return edges;
}

std::vector<CyclicInsertion> canonical_insertions(const DegenerationJ& j) {
  std::vector<CyclicInsertion> out;
  std::vector<int> f{1};
  for (std::size_t t = 1; t < j.k.size(); ++t) {
    CyclicInsertion ins;
    ins.s1 = f;
    for (int s = j.k[t - 1] + 1; s <= j.k[t]; ++s) ins.s2.push_back(s);
    ins.s3 = f;
    ins.s3.insert(ins.s3.end(), ins.s2.rbegin(), ins.s2.rend());
    f = ins.s3;
    out.push_back(std::move(ins));
  }
  return out;
}

bool is_perfect_shuffle(const CyclicInsertion& ins) {
  if (ins.s1.size() != ins.s2.size()) return false;
  const std::size_t len = ins.s3.size();
  auto in2 = [&](int x) { return std::find(ins.s2.begin(), ins.s2.end(), x) != ins.s2.end(); };
  for (std::size_t i = 0; i < len; ++i)
    if (in2(ins.s3[i]) && in2(ins.s3[(i + 1) % len])) return false;
  return true;
}

VanishingTree vanishing_tree(const DegenerationJ& j, const std::vector<CyclicInsertion>& insertions) {
  if (insertions.size() != j.k.size() - 1) throw std::invalid_argument("vanishing_tree: one insertion per circuit expected");
  VanishingTree tree;
  tree.n = j.n;
  int offset = 0;
  for (std::size_t t = 0; t < insertions.size(); ++t) {
    const auto& ins = insertions[t];
    if (ins.s1.size() != at(j.k[t]) || ins.s2.size() != at(j.k[t + 1] - j.k[t]))
      throw std::invalid_argument("vanishing_tree: stage " + std::to_string(t + 1) + " has the wrong size");
    if (t > 0 && (ins.s1.size() != insertions[t - 1].s3.size() || !cyclic_subsequence(ins.s1, insertions[t - 1].s3)))
      throw std::invalid_argument("vanishing_tree: stage " + std::to_string(t + 1) + " does not continue the previous fiber");
    const auto edges = insertion_graph(ins);
    const int a = static_cast<int>(edges.size());
    for (int r = 0; r < a; ++r)
      tree.edges.push_back({edges[at(r)].first, edges[at(r)].second, offset + a - r, static_cast<int>(t) + 1});
    offset += a;
  }
  std::sort(tree.edges.begin(), tree.edges.end(), [](const auto& x, const auto& y) { return x.label < y.label; });

  // Spanning tree on the final fiber.
  const auto& fiber = insertions.back().s3;
  std::map<int, int> parent;
  for (int x : fiber) parent[x] = x;
  auto root = [&](int x) {
    while (parent.at(x) != x) x = parent.at(x);
    return x;
  };
  for (const auto& e : tree.edges) {
    const int ra = root(e.a), rb = root(e.b);
    if (ra == rb) throw std::logic_error("vanishing_tree: stage graphs close a cycle");
    parent[ra] = rb;
  }
  if (tree.edges.size() + 1 != fiber.size()) throw std::logic_error("vanishing_tree: not spanning");
  return tree;
}

std::vector<std::vector<int>> thimble_dimensions(const VanishingTree& t) {
  const std::size_t n = t.edges.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& x = t.edges[i];
      const auto& y = t.edges[j];
      d[i][j] = (x.a == y.a) + (x.a == y.b) + (x.b == y.a) + (x.b == y.b);
    }
  }
  return d;
}

int QuiverJ::orientation(int i) const {
  if (i == n + 1) return 1;
  if (i < 2 || i > n) throw std::out_of_range("QuiverJ: no edge e_" + std::to_string(i));
  return o[at(i - 2)];
}

std::vector<std::pair<int, int>> QuiverJ::arrows() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 2; i <= n; ++i) out.push_back(orientation(i) > 0 ? std::pair{i - 1, i} : std::pair{i, i - 1});
  return out;
}

QuiverJ quiver_from_J(const DegenerationJ& j) {
  QuiverJ q;
  q.n = j.n;
  const auto in = j.interior();
  for (int i = 2; i <= j.n; ++i) q.o.push_back(std::binary_search(in.begin(), in.end(), i) ? -1 : 1);
  return q;
}

std::vector<int> perversity(const DegenerationJ& j) {
  const auto q = quiver_from_J(j);
  std::vector<int> p;
  int reversed = 0;  // p(j) counts the reversed edges among e_2..e_{j+1}
  for (int i = 1; i <= j.n; ++i) {
    reversed += q.orientation(i + 1) < 0;
    p.push_back(reversed);
  }
  return p;
}

namespace {

// A bounded complex of indecomposable projectives of the path algebra of an
// A_n quiver. Hom(P_a, P_b) is spanned by the path a -> b when it exists.
struct Term {
  int vertex;
  int degree;
};
struct Complex {
  std::vector<Term> terms;
  std::vector<std::pair<std::size_t, std::size_t>> d;  // term -> term, coefficient 1
};

bool has_path(const QuiverJ& q, int a, int b) {
  for (int i = std::min(a, b) + 1; i <= std::max(a, b); ++i)
    if ((q.orientation(i) > 0) != (a < b)) return false;
  return true;
}

std::map<int, int> ext(const QuiverJ& q, const Complex& x, const Complex& y) {
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> basis;
  for (std::size_t a = 0; a < x.terms.size(); ++a)
    for (std::size_t b = 0; b < y.terms.size(); ++b)
      if (has_path(q, x.terms[a].vertex, y.terms[b].vertex)) basis[y.terms[b].degree - x.terms[a].degree].push_back({a, b});

  // Differential Hom^k -> Hom^{k+1}: f |-> d_Y f - (-1)^k f d_X, as a matrix.
  auto differential = [&](int k) {
    const auto& src = basis[k];
    const auto& dst = basis[k + 1];
    std::vector<RatVec> rows(dst.size(), RatVec(src.size(), Rat(0)));
    auto index = [&](std::size_t a, std::size_t b) {
      return static_cast<std::size_t>(std::find(dst.begin(), dst.end(), std::pair{a, b}) - dst.begin());
    };
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto [a, b] = src[c];
      for (const auto& [from, to] : y.d)
        if (from == b) rows[index(a, to)][c] += 1;
      for (const auto& [from, to] : x.d)
        if (to == a) rows[index(from, b)][c] -= (k % 2 == 0) ? 1 : -1;
    }
    return rows;
  };
  auto rank_of = [&](int k) -> int {
    if (basis[k].empty() || basis[k + 1].empty()) return 0;
    return static_cast<int>(rank(differential(k)));
  };

  std::vector<int> degrees;
  for (const auto& [k, b] : basis)
    if (!b.empty()) degrees.push_back(k);
  std::map<int, int> out;
  for (int k : degrees) {
    const int dim = static_cast<int>(basis[k].size()) - rank_of(k) - rank_of(k - 1);
    if (dim) out[k] = dim;
  }
  return out;
}

}  // namespace

bool YonedaData::strong() const {
  for (const auto& row : graded)
    for (const auto& cell : row)
      for (const auto& [k, dim] : cell)
        if (k != 0 && dim) return false;
  return true;
}

bool YonedaData::unitriangular() const {
  for (std::size_t i = 0; i < total.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (total[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

YonedaData yoneda_dimensions(const DegenerationJ& j, const std::vector<int>& shifts) {
  if (j.n > 6) throw std::invalid_argument("yoneda_dimensions: n > 6 is out of scope");
  if (shifts.size() != at(j.n)) throw std::invalid_argument("yoneda_dimensions: one shift per object expected");
  const auto q = quiver_from_J(j);
  std::vector<Complex> objects;
  for (int i = 1; i <= j.n; ++i) {
    Complex c;
    const int top = -shifts[at(i - 1)];
    c.terms.push_back({i, top});
    if (q.orientation(i + 1) < 0) {
      c.terms.push_back({i + 1, top - 1});
      c.d.push_back({1, 0});
    }
    objects.push_back(std::move(c));
  }
  YonedaData y;
  const std::size_t n = at(j.n);
  y.graded.assign(n, std::vector<std::map<int, int>>(n));
  y.total.assign(n, std::vector<int>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      y.graded[a][b] = ext(q, objects[a], objects[b]);
      for (const auto& [k, dim] : y.graded[a][b]) y.total[a][b] += dim;
    }
  return y;
}

YonedaData yoneda_dimensions(const DegenerationJ& j) { return yoneda_dimensions(j, perversity(j)); }

std::string to_dot(const VanishingTree& t) {
  std::ostringstream os;
  os << "graph vanishing_tree {\n";
  for (int v = 1; v <= t.n + 1; ++v) os << "  " << v << ";\n";
  for (const auto& e : t.edges)
    os << "  " << e.a << " -- " << e.b << " [label=\"" << e.label << "\", stage=" << e.stage << "];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const QuiverJ& q) {
  std::ostringstream os;
  os << "digraph quiver {\n";
  for (int v = 1; v <= q.n; ++v) os << "  " << v << ";\n";
  for (int i = 2; i <= q.n; ++i) {
    const auto [tail, head] = q.arrows()[at(i - 2)];
    os << "  " << tail << " -> " << head << " [label=\"e" << i << (q.orientation(i) > 0 ? " +" : " -") << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace lgtk
