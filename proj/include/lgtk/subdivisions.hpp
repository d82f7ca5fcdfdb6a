#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lgtk/polytope.hpp"

namespace lgtk {

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SubdivisionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Full-dimensional configuration of distinct integer points.
struct PointConfiguration {
  std::size_t lattice_rank = 0;
  std::vector<RatVec> points;
  Polytope hull;
};

PointConfiguration make_configuration(const std::vector<RatVec>& points);
/// {0, 1, ..., n+1} on the line.
PointConfiguration interval_configuration(int n);

/// A marked cell: `vertices` spans the cell, `marked` lists every point of A
/// used by it (a superset of `vertices`). Both sorted.
struct Cell {
  std::vector<int> vertices;
  std::vector<int> marked;
  auto operator<=>(const Cell&) const = default;
};

/// Cells are kept sorted; equality ignores the height.
struct Subdivision {
  std::vector<Cell> cells;
  RatVec height;
  bool operator==(const Subdivision& o) const { return cells == o.cells; }
};

bool is_triangulation(const PointConfiguration& config, const Subdivision& s);

/// Lattice-normalized volume of a full-dimensional cell.
Rat normalized_volume(const PointConfiguration& config, const std::vector<int>& cell);

Subdivision subdivision_from_height(const PointConfiguration& config, const RatVec& height);

struct RegularityResult {
  bool regular = false;
  RatVec height;        // certificate, integral, when regular
  Rat gap;              // optimal slack of the height LP
  std::string witness;  // reason when not regular
};

/// Throws SubdivisionError if the cells do not form a marked subdivision.
RegularityResult is_regular(const PointConfiguration& config, const std::vector<Cell>& cells);

/// Minimal affinely dependent subsets with their signed parts.
struct Circuit {
  std::vector<int> positive;
  std::vector<int> negative;
};
std::vector<Circuit> circuits(const PointConfiguration& config);

/// Regular triangulations one bistellar flip away, sorted.
std::vector<Subdivision> flips(const PointConfiguration& config, const Subdivision& t);

/// Placing triangulation of the points in the given order.
Subdivision placing_triangulation(const PointConfiguration& config);

/// Sorted by GKZ vector.
std::vector<Subdivision> enumerate_regular_triangulations(const PointConfiguration& config);

RatVec gkz_vector(const PointConfiguration& config, const Subdivision& t);

struct SecondaryPolytope {
  Polytope polytope;
  std::vector<Subdivision> triangulations;  // triangulations[i] has vertex i
};

SecondaryPolytope secondary_polytope(const PointConfiguration& config);

}  // namespace lgtk
