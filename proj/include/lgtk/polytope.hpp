#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "lgtk/rational.hpp"

namespace lgtk {

/// Supporting inequality <normal, x> <= offset.
struct Facet {
  RatVec normal;
  Rat offset;
};

/// Affine equation <normal, x> = offset.
struct Equation {
  RatVec normal;
  Rat offset;
};

struct Face {
  std::vector<int> vertices;  // sorted vertex ids
  int dim = -1;
};

/// Graded poset of faces, ordered by dimension then vertex list.
struct FaceLattice {
  std::vector<Face> faces;
  std::vector<std::size_t> f_vector() const;  // entries for dims -1..d
  std::vector<const Face*> of_dim(int d) const;
};

class Polytope {
 public:
  Polytope() = default;

  std::size_t ambient_dim() const { return ambient_dim_; }
  /// Intrinsic dimension (affine hull).
  int dim() const { return dim_; }
  const std::vector<RatVec>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Equation>& equations() const { return equations_; }
  /// incidence()[f] lists the vertices on facet f, sorted.
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }

  /// Computed on first use; safe under concurrent readers.
  const FaceLattice& face_lattice() const;
  /// Edges as sorted vertex-id pairs, lexicographic order.
  const std::vector<std::pair<int, int>>& edges() const;

  /// Index of a vertex with exactly these coordinates.
  std::optional<int> find_vertex(std::span<const Rat> x) const;
  bool contains(std::span<const Rat> x) const;

  /// Facet normal projected onto the direction space of the affine hull,
  /// scaled to a primitive integer vector. Outer orientation.
  IntVec canonical_normal(std::size_t facet) const;

  friend Polytope hull(const std::vector<RatVec>& points);

 private:
  struct Cache {
    std::once_flag lattice_once;
    FaceLattice lattice;
    std::once_flag edges_once;
    std::vector<std::pair<int, int>> edges;
  };

  std::size_t ambient_dim_ = 0;
  int dim_ = -1;
  std::vector<RatVec> vertices_;
  std::vector<Facet> facets_;
  std::vector<Equation> equations_;
  std::vector<std::vector<int>> incidence_;
  std::vector<RatVec> directions_;  // basis of the direction space (rref rows)
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Convex hull with irredundant V- and H-descriptions. Works in the affine
/// span of the input; ambient coordinates are preserved.
Polytope hull(const std::vector<RatVec>& points);

Polytope minkowski_sum(const Polytope& p, const Polytope& q);

/// Polytope spanned by a subset of vertices of `p` (e.g. a face).
Polytope sub_polytope(const Polytope& p, const std::vector<int>& vertex_ids);

/// Fan with rays given as primitive integer vectors; each cone lists ray ids.
struct Fan {
  std::size_t lattice_rank = 0;
  std::vector<IntVec> rays;
  std::vector<std::vector<int>> cones;  // maximal cones, sorted ids
};

/// Inner normal fan: ray i is the negated canonical normal of facet i, and
/// cone v lists the facets through vertex v (functionals minimized at v).
Fan normal_fan(const Polytope& p);

/// One-line summary, e.g. "dim 2, 4 vertices, 4 facets".
std::string describe(const Polytope& p);

}  // namespace lgtk
