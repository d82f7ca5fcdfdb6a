#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgtk/an.hpp"

namespace lgtk {

using cplx = std::complex<double>;

class TrackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SeparationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer heights on {0, ..., n+1} whose lower hull breaks exactly at J:
/// slope i on [k_{i-1}, k_i], eta(1) = 0, and points off J one unit above the hull.
struct HeightFunction {
  int n = 0;
  std::vector<long> eta;     // eta[0..n+1]; eta[0] is unused and 0
  std::vector<long> slopes;  // slopes[i-1] on [k_{i-1}, k_i]
};

HeightFunction height_from_J(const DegenerationJ& j);

/// psi(z) = sum_{i=1}^{n+1} c_i s^{eta(i)} z^i; the fiber over q is psi = q.
struct RegenerationFamily {
  DegenerationJ j;
  HeightFunction height;
  std::vector<cplx> c;  // c[0..n+1]; c_i = 1 on J
  double s = 0.1;

  std::vector<cplx> coefficients() const;  // index = degree, constant term 0
};

/// c_i = 1 on J, 1 + (x + iy) * spread with x, y uniform in [-1, 1] elsewhere.
RegenerationFamily regeneration(const DegenerationJ& j, double s, std::uint64_t seed, double spread = 0.1);

/// All roots of sum a_i z^i (index = degree): Aberth iterations started on the
/// circles given by the Newton polygon of |a_i|, stopped at backward error 1e-12.
/// Throws std::runtime_error if they do not converge.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& a);
cplx evaluate(const std::vector<cplx>& a, cplx z);
std::vector<cplx> derivative(const std::vector<cplx>& a);

struct CriticalPoint {
  cplx point;
  cplx value;
};

/// Throws std::invalid_argument if the derivative vanishes identically or the
/// degree is below 2.
std::vector<CriticalPoint> critical_data(const std::vector<cplx>& a);

/// Logarithmic lifts of the critical values: Im(log) in [window, window + 2 pi),
/// then shifted by 2 pi * offsets[i] for the i-th value in decreasing modulus.
struct LiftChoice {
  double window = 0;
  std::vector<int> offsets;  // empty = fundamental
};

/// Staircase paths in the log plane, ordered by decreasing modulus. Path i runs
/// from lifts[i] to the common base point; each path passes the larger critical
/// values it meets on their clockwise side.
struct RadarScreen {
  std::vector<cplx> values;  // critical values, decreasing modulus
  std::vector<cplx> lifts;
  std::vector<std::vector<cplx>> paths;
  std::optional<std::vector<cplx>> floor_path;  // from below the smallest value, if requested
  cplx base;
  double epsilon = 0;
};

/// Throws std::invalid_argument on zero or equal-modulus values (relative gap
/// below 1e-9).
RadarScreen radar_screen(std::vector<cplx> values, const LiftChoice& lift = {}, double epsilon = 1e-3,
                         std::optional<double> floor_depth = std::nullopt);

/// Number of pairs of exponentiated paths that meet away from the base point.
/// Exact on the axis-parallel log-plane segments, checked against 2 pi i shifts.
/// With `log_plane` only the lifted paths are compared; lifts more than 2 pi
/// apart wind around 0 and their images in C* may cross.
int radar_crossings(const RadarScreen& r, bool log_plane = false);

enum class PathSpace { linear, logarithmic };

struct TrackOptions {
  double gap_ratio = 3;
  double tolerance = 1e-9;  // backward error accepted after correction
  double min_step = 1e-12;  // fraction of a segment
};

struct TrackResult {
  std::vector<cplx> fiber;  // fiber[i] continues start[i]
  double min_step = 1;
  int steps = 0;
};

/// Continues every root of a(z) = q along the polyline (q = w or q = exp(w)).
/// Throws TrackingError when the matching stays ambiguous at the minimum step.
TrackResult track_fiber(const std::vector<cplx>& a, const std::vector<cplx>& path, const std::vector<cplx>& start,
                        PathSpace space, const TrackOptions& opt = {});

/// Permutation of the fiber over path.front() == path.back(): perm[i] = j when
/// root i ends at root j. Roots are listed by polynomial_roots.
std::vector<int> loop_permutation(const std::vector<cplx>& a, const std::vector<cplx>& loop, PathSpace space,
                                  const TrackOptions& opt = {});

struct NumericStage {
  int stage = 0;
  CyclicInsertion insertion;  // fiber labels 1..n+1, counter-clockwise cyclic orders
  std::vector<int> paths;     // radar path index (1-based) of each s2 element, in order
  bool cyclic = false;        // S1 order preserved inside S3
  bool edges_match = false;   // I_{sigma,<} equals the stage's vanishing pairs
  double cluster_low = 0, cluster_high = 0;  // modulus range of the stage's critical values
};

struct MonodromyReport {
  RegenerationFamily family;
  RadarScreen screen;
  std::vector<cplx> base_fiber;  // label i+1 = base_fiber[i], sorted by argument in [0, 2 pi)
  VanishingTree numeric;         // edge label = radar path index
  std::vector<NumericStage> stages;
  std::optional<VanishingTree> predicted;  // from the numeric insertions
  bool match = false;
  double min_step = 1;
  std::string note;
};

struct MonodromyOptions {
  LiftChoice lift;
  double epsilon = 1e-3;  // capped at a quarter of the smallest log-modulus gap
  double separation = 10;  // required ratio between consecutive stage clusters
  TrackOptions track;
};

/// Extracts the stage insertions and the vanishing tree of the radar screen.
/// Throws SeparationError when clusters are not separated by `separation`.
MonodromyReport analyze_monodromy(const RegenerationFamily& f, const MonodromyOptions& opt = {});

/// Halves s from `start` until the stage clusters separate; throws
/// SeparationError below `floor`.
double choose_s(const DegenerationJ& j, std::uint64_t seed, double start = 0.1, double floor = 1e-4,
                double spread = 0.1);

/// S3 read counter-clockwise from s1[0]: 0 for S1 elements, rank + 1 for S2.
std::vector<int> insertion_type(const CyclicInsertion& ins);

struct TheoremReport {
  DegenerationJ j;
  int trials = 0;
  int validated = 0;  // every stage a cyclic insertion
  int matched = 0;    // numeric tree == vanishing_tree(numeric insertions)
  int shuffles = 0;   // trials where every equal-size stage is a perfect shuffle
  double s = 0;
  std::vector<std::string> failures;
};

/// `trials` seeded coefficient draws with fundamental lifts. Runs on `threads`
/// workers (0 = LGTK_THREADS or hardware concurrency).
TheoremReport verify_theorem(const DegenerationJ& j, int trials, std::uint64_t seed = 1, unsigned threads = 0,
                             std::optional<double> s = std::nullopt);

struct SurjectivityReport {
  int n = 0;
  std::size_t expected = 0;  // n! types for a single circuit
  std::vector<std::vector<int>> realized;
  int runs = 0;
};

/// Single-circuit search over coefficient draws and branch offsets in
/// [-range, range]^n until every insertion type shows up.
SurjectivityReport search_insertions(int n, int draws, int range = 1, std::uint64_t seed = 1, unsigned threads = 0);

/// Connected components of {|a(z)| < r} on a grid over [-box, box]^2. Each is
/// a disk, so this also counts the components of the level set |a| = r.
int sublevel_components(const std::vector<cplx>& a, double r, double box, int grid = 600);

unsigned default_threads();

}  // namespace lgtk
