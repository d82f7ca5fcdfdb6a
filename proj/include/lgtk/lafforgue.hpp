#pragma once

#include <string>
#include <vector>

#include "lgtk/subdivisions.hpp"

namespace lgtk {

/// Sigma(A) + Delta^A, in ambient R^A.
Polytope lafforgue_polytope(const PointConfiguration& config);
Polytope lafforgue_polytope(const PointConfiguration& config, const Polytope& secondary);

/// A subdivision together with the face of Delta^A it is paired with.
struct PointedSubdivision {
  Subdivision subdivision;
  std::vector<int> pointing;  // sorted point indices
};

/// Pointed subdivision cut out by the functional u on R^A (the face of the
/// Lafforgue polytope where u is minimized).
PointedSubdivision pointed_subdivision(const PointConfiguration& config, const RatVec& u);

enum class FacetType {
  interior_point_drop,
  right_pointed_split,
  left_pointed_split,
  vertical_0,
  vertical_last,
};

/// "interior-point-drop", ..., "vertical-0", "vertical-(n+1)".
std::string to_string(FacetType t);

struct FacetLabel {
  FacetType type = FacetType::interior_point_drop;
  int index = 0;  // i for the three split/drop families, 0 or n+1 for vertical
  auto operator<=>(const FacetLabel&) const = default;
};

/// "drop-2", "rsplit-1", "lsplit-3", "vert-0", "vert-4".
std::string short_name(const FacetLabel& l);

/// Coordinates of a functional on Gamma in the dual of the basis
/// f_0 = e_0 - e_1, f_i = -e_{i-1} + 2 e_i - e_{i+1}.
IntVec gamma_coordinates(int n, const RatVec& u);

/// Rows f_0..f_n, columns g_1..g_n, g_{2i}, g_{3i}, g_{3n+1}, g_{3n+2}.
struct XiMatrix {
  int n = 0;
  std::vector<IntVec> matrix;
  std::vector<FacetLabel> columns;  // geometric label of each column's facet
};

XiMatrix an_xi_matrix(int n);

struct LabeledFacet {
  std::size_t facet = 0;  // index into lafforgue_polytope(...).facets()
  IntVec inner_normal;    // primitive, in R^A
  PointedSubdivision pointed;
  FacetLabel label;
};

/// Facets of the Lafforgue polytope of {0, ..., n+1}, classified by their
/// pointed coarse subdivisions.
std::vector<LabeledFacet> an_pointed_facet_labels(int n);
std::vector<LabeledFacet> an_pointed_facet_labels(int n, const Polytope& lafforgue);

}  // namespace lgtk
