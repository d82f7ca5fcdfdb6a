#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgtk/monotone_paths.hpp"
#include "lgtk/subdivisions.hpp"

namespace lgtk {

/// A maximal degeneration of {0, ..., n+1}: breakpoints 1 = k_0 < ... < k_m = n+1.
struct DegenerationJ {
  int n = 0;
  std::vector<int> k;

  int stages() const { return static_cast<int>(k.size()) - 1; }
  /// k_1, ..., k_{m-1}: the breakpoints inside {2, ..., n}.
  std::vector<int> interior() const;
  auto operator<=>(const DegenerationJ&) const = default;
};

/// Accepts either the interior breakpoints or the full chain (1 and n+1 are
/// added when missing). Throws std::invalid_argument on anything outside
/// {1, ..., n+1} or on repeated entries.
DegenerationJ make_degeneration(int n, std::vector<int> breakpoints);

/// All 2^{n-1} degenerations of {0, ..., n+1}, ordered by interior set.
std::vector<DegenerationJ> all_degenerations(int n);

/// "1,2,4,8"
std::string to_string(const DegenerationJ& j);

/// Interior points of the triangulations along the path: K_i = {k_i, ..., k_{m-1}}
/// for i = 0..m, so K_0 contains 1 and K_m is empty.
std::vector<std::set<int>> path_k_sets(const DegenerationJ& j);

/// The gamma = e_0^dual monotone path on the secondary polytope of the interval.
/// `coherent` is set only when the monotone path polytope is supplied; the
/// one-argument form builds both polytopes.
MonotonePath path_from_J(const DegenerationJ& j, const SecondaryPolytope& secondary,
                         const MonotonePathPolytope* mpp = nullptr);
MonotonePath path_from_J(const DegenerationJ& j);

/// C_i = {0, k_{i-1}, k_i}, i = 1..m.
std::vector<std::vector<int>> circuits(const DegenerationJ& j);

/// Fiber points are plain integer labels and sigma is the identity on labels.
/// s1 and s3 are cyclic sequences; s2 is listed smallest first. Every element
/// of s1 is below every element of s2.
struct CyclicInsertion {
  std::vector<int> s1;
  std::vector<int> s2;
  std::vector<int> s3;
};

/// Throws std::invalid_argument unless s1, s2 are disjoint, s3 is a
/// permutation of their union, and s1 appears in s3 in the same cyclic order.
void validate(const CyclicInsertion& ins);

/// One edge (s, m(s)) per element of s2, in s2 order. m(s) is found by walking
/// backwards through s3 from s to the first element below s; everything
/// passed over is above s. Throws std::invalid_argument if there is none.
std::vector<std::pair<int, int>> insertion_graph(const CyclicInsertion& ins);

/// The R(J) insertions: stage t inserts {k_{t-1}+1, ..., k_t} after
/// (1, k_1, ..., k_0+1, k_2, ..., k_1+1, ..., k_{t-1}, ..., k_{t-2}+1).
std::vector<CyclicInsertion> canonical_insertions(const DegenerationJ& j);

/// True when |s1| = |s2| and no two elements of s2 are cyclically adjacent in s3.
bool is_perfect_shuffle(const CyclicInsertion& ins);

struct VanishingEdge {
  int a = 0, b = 0;  // fiber points, a = the inserted point
  int label = 0;     // critical path index, 1..n
  int stage = 0;     // circuit index, 1..m
  auto operator<=>(const VanishingEdge&) const = default;
};

struct VanishingTree {
  int n = 0;
  std::vector<VanishingEdge> edges;  // sorted by label
};

/// Union of the stage insertion graphs. Labels run through the stages in
/// order; inside a stage, the largest element of s2 gets the smallest label.
/// Consecutive stages must chain: stage t+1's s1 is stage t's s3 up to rotation.
/// Throws std::invalid_argument on size mismatches with j, std::logic_error if
/// the result is not a spanning tree of {1, ..., n+1}.
VanishingTree vanishing_tree(const DegenerationJ& j, const std::vector<CyclicInsertion>& insertions);

/// Fiber points shared by the edges labelled i < j; 1 on the diagonal.
std::vector<std::vector<int>> thimble_dimensions(const VanishingTree& t);

/// Orientation of e_2, ..., e_n; e_i joins vertices i-1 and i and points to i
/// when o(e_i) = +1.
struct QuiverJ {
  int n = 0;
  std::vector<int> o;  // o[i-2] = o(e_i)

  int orientation(int i) const;  // o(e_i), with o(e_{n+1}) = +1
  std::vector<std::pair<int, int>> arrows() const;  // (tail, head)
};

QuiverJ quiver_from_J(const DegenerationJ& j);

/// p(j) = j/2 - (1/2) sum_{i=1}^{j} o(e_{i+1}), j = 1..n.
std::vector<int> perversity(const DegenerationJ& j);

/// Graded Ext between the objects E_1, ..., E_n over the path algebra of
/// Gamma_J. E_i is P_i when o(e_{i+1}) = +1, otherwise the cone of
/// P_{i+1} -> P_i; its top term P_i sits in degree -shift[i-1].
struct YonedaData {
  std::vector<std::vector<std::map<int, int>>> graded;  // [i][j]: degree -> dim
  std::vector<std::vector<int>> total;

  bool strong() const;  // every nonzero Ext in degree 0
  bool unitriangular() const;
};

/// Shifts default to perversity(j). Throws std::invalid_argument for n > 6.
YonedaData yoneda_dimensions(const DegenerationJ& j);
YonedaData yoneda_dimensions(const DegenerationJ& j, const std::vector<int>& shifts);

std::string to_dot(const VanishingTree& t);
std::string to_dot(const QuiverJ& q);

}  // namespace lgtk
