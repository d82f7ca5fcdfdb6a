#include "lgtk/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "bitset.hpp"

namespace lgtk {

using detail::Bitset;

namespace {

struct Ray {
  IntVec coords;
  Bitset zeros;
};

Int idot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

// Double description of {x : rows[i] . x <= 0 for all i}. The rows must span
// the whole space, so the cone is pointed. Returns its extreme rays together
// with the set of rows tight at each ray.
std::vector<Ray> extreme_rays(const std::vector<IntVec>& rows, std::size_t dim) {
  const std::size_t n = rows.size();

  // Greedy choice of dim independent rows for the initial simplicial cone.
  std::vector<std::size_t> basis;
  std::vector<RatVec> echelon;
  for (std::size_t i = 0; i < n && basis.size() < dim; ++i) {
    auto trial = echelon;
    trial.push_back(to_rat(rows[i]));
    if (rank(trial) == trial.size()) {
      echelon = std::move(trial);
      basis.push_back(i);
    }
  }
  if (basis.size() != dim) throw std::logic_error("extreme_rays: rows do not span");

  std::vector<RatVec> b;
  for (auto i : basis) b.push_back(to_rat(rows[i]));
  std::vector<Ray> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    RatVec rhs(dim, Rat(0));
    rhs[j] = -1;
    Ray r{primitive(std::span<const Rat>(solve(b, rhs))), Bitset(n)};
    for (std::size_t i = 0; i < dim; ++i)
      if (i != j) r.zeros.set(basis[i]);
    rays.push_back(std::move(r));
  }

  std::vector<bool> processed(n, false);
  for (auto i : basis) processed[i] = true;

  for (std::size_t row = 0; row < n; ++row) {
    if (processed[row]) continue;
    processed[row] = true;
    std::vector<int> sign(rays.size());
    std::vector<Int> value(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = idot(rows[row], rays[r].coords);
      sign[r] = sgn(value[r]);
      if (sign[r] > 0) pos.push_back(r);
      else if (sign[r] < 0) neg.push_back(r);
      else rays[r].zeros.set(row);
    }
    if (pos.empty()) continue;

    std::vector<Ray> fresh;
    for (auto p : pos) {
      for (auto q : neg) {
        Bitset common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
          if (t == p || t == q) continue;
          if (common.subset_of(rays[t].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        IntVec c(dim);
        for (std::size_t k = 0; k < dim; ++k)
          c[k] = value[p] * rays[q].coords[k] - value[q] * rays[p].coords[k];
        common.set(row);
        fresh.push_back(Ray{primitive(std::span<const Int>(c)), std::move(common)});
      }
    }
    std::vector<Ray> kept;
    kept.reserve(rays.size() - pos.size() + fresh.size());
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (sign[r] <= 0) kept.push_back(std::move(rays[r]));
    for (auto& f : fresh) kept.push_back(std::move(f));
    rays = std::move(kept);
  }
  return rays;
}

bool lex_less(const RatVec& a, const RatVec& b) { return a < b; }

}  // namespace

Polytope hull(const std::vector<RatVec>& input) {
  if (input.empty()) throw std::invalid_argument("hull: empty point list");
  const std::size_t m = input.front().size();
  for (const auto& p : input)
    if (p.size() != m) throw DimensionError("hull: points of different lengths");

  std::vector<RatVec> pts = input;
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polytope poly;
  poly.ambient_dim_ = m;

  std::vector<RatVec> dirs;
  for (std::size_t i = 1; i < pts.size(); ++i) dirs.push_back(sub(pts[i], pts[0]));
  const auto pivots = rref(dirs);
  const std::size_t k = pivots.size();
  poly.dim_ = static_cast<int>(k);
  poly.directions_ = dirs;

  std::vector<bool> is_pivot(m, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t j = 0; j < m; ++j) {
    if (is_pivot[j]) continue;
    RatVec nrm(m, Rat(0));
    nrm[j] = 1;
    for (std::size_t r = 0; r < k; ++r) nrm[pivots[r]] = -dirs[r][j];
    const Rat off = dot(nrm, pts[0]);
    poly.equations_.push_back({std::move(nrm), off});
  }

  if (k == 0) {
    poly.vertices_ = {pts[0]};
    return poly;
  }

  // Homogenized constraints (y, -1) . (a, b) <= 0 in intrinsic coordinates.
  std::vector<IntVec> rows;
  rows.reserve(pts.size());
  for (const auto& p : pts) {
    RatVec h(k + 1);
    for (std::size_t r = 0; r < k; ++r) h[r] = p[pivots[r]];
    h[k] = -1;
    Int l = 1;
    for (const auto& x : h) l = lcm(l, x.get_den());
    IntVec row(k + 1);
    for (std::size_t r = 0; r <= k; ++r) row[r] = h[r].get_num() * (l / h[r].get_den());
    rows.push_back(std::move(row));
  }

  auto rays = extreme_rays(rows, k + 1);

  struct RawFacet {
    Facet f;
    Bitset pts_on;
  };
  std::vector<RawFacet> raw;
  for (auto& r : rays) {
    bool trivial = true;
    for (std::size_t j = 0; j < k; ++j)
      if (sgn(r.coords[j]) != 0) trivial = false;
    if (trivial) continue;
    RatVec nrm(m, Rat(0));
    for (std::size_t j = 0; j < k; ++j) nrm[pivots[j]] = Rat(r.coords[j]);
    raw.push_back({{std::move(nrm), Rat(r.coords[k])}, r.zeros});
  }

  // A point is a vertex iff its facet set is not contained in another's.
  std::vector<Bitset> on_facets(pts.size(), Bitset(raw.size()));
  for (std::size_t f = 0; f < raw.size(); ++f)
    raw[f].pts_on.for_each([&](std::size_t i) { on_facets[i].set(f); });
  std::vector<int> vid(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool vertex = true;
    for (std::size_t j = 0; j < pts.size() && vertex; ++j)
      if (j != i && on_facets[i].subset_of(on_facets[j])) vertex = false;
    if (vertex) {
      vid[i] = static_cast<int>(poly.vertices_.size());
      poly.vertices_.push_back(pts[i]);
    }
  }

  std::sort(raw.begin(), raw.end(), [](const RawFacet& a, const RawFacet& b) {
    if (a.f.normal != b.f.normal) return a.f.normal < b.f.normal;
    return a.f.offset < b.f.offset;
  });
  for (auto& r : raw) {
    std::vector<int> inc;
    r.pts_on.for_each([&](std::size_t i) {
      if (vid[i] >= 0) inc.push_back(vid[i]);
    });
    poly.facets_.push_back(std::move(r.f));
    poly.incidence_.push_back(std::move(inc));
  }
  return poly;
}

const FaceLattice& Polytope::face_lattice() const {
  std::call_once(cache_->lattice_once, [this] {
    const std::size_t nv = vertices_.size();
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> queue;
    std::vector<int> all(nv);
    std::iota(all.begin(), all.end(), 0);
    seen.insert(all);
    queue.push_back(all);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto face = queue[head];
      for (const auto& inc : incidence_) {
        std::vector<int> meet;
        std::set_intersection(face.begin(), face.end(), inc.begin(), inc.end(),
                              std::back_inserter(meet));
        if (meet.size() == face.size()) continue;
        if (seen.insert(meet).second) queue.push_back(std::move(meet));
      }
    }
    seen.insert(std::vector<int>{});
    FaceLattice lat;
    for (const auto& f : seen) {
      std::vector<RatVec> pts;
      for (int v : f) pts.push_back(vertices_[v]);
      lat.faces.push_back({f, affine_rank(pts)});
    }
    std::stable_sort(lat.faces.begin(), lat.faces.end(),
                     [](const Face& a, const Face& b) { return a.dim < b.dim; });
    cache_->lattice = std::move(lat);
  });
  return cache_->lattice;
}

const std::vector<std::pair<int, int>>& Polytope::edges() const {
  std::call_once(cache_->edges_once, [this] {
    const int nv = static_cast<int>(vertices_.size());
    std::vector<Bitset> facets_of(nv, Bitset(incidence_.size()));
    std::vector<Bitset> members(incidence_.size(), Bitset(nv));
    for (std::size_t f = 0; f < incidence_.size(); ++f)
      for (int v : incidence_[f]) {
        facets_of[v].set(f);
        members[f].set(static_cast<std::size_t>(v));
      }
    std::vector<std::pair<int, int>> out;
    if (dim_ >= 1) {
      for (int u = 0; u < nv; ++u)
        for (int v = u + 1; v < nv; ++v) {
          const Bitset common = facets_of[u] & facets_of[v];
          Bitset span(nv);
          for (int w = 0; w < nv; ++w) span.set(static_cast<std::size_t>(w));
          common.for_each([&](std::size_t f) { span = span & members[f]; });
          if (span.count() == 2) out.emplace_back(u, v);
        }
    }
    cache_->edges = std::move(out);
  });
  return cache_->edges;
}

std::optional<int> Polytope::find_vertex(std::span<const Rat> x) const {
  RatVec key(x.begin(), x.end());
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), key, lex_less);
  if (it != vertices_.end() && *it == key) return static_cast<int>(it - vertices_.begin());
  return std::nullopt;
}

bool Polytope::contains(std::span<const Rat> x) const {
  if (x.size() != ambient_dim_) throw DimensionError("contains: dimension mismatch");
  for (const auto& e : equations_)
    if (dot(e.normal, x) != e.offset) return false;
  for (const auto& f : facets_)
    if (dot(f.normal, x) > f.offset) return false;
  if (dim_ == 0) return RatVec(x.begin(), x.end()) == vertices_.front();
  return true;
}

IntVec Polytope::canonical_normal(std::size_t facet) const {
  const auto& nrm = facets_.at(facet).normal;
  const std::size_t k = directions_.size();
  if (k == ambient_dim_) return primitive(std::span<const Rat>(nrm));
  std::vector<RatVec> gram(k, RatVec(k));
  RatVec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(directions_[i], directions_[j]);
    rhs[i] = dot(directions_[i], nrm);
  }
  const RatVec c = solve(gram, rhs);
  RatVec proj(ambient_dim_, Rat(0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < ambient_dim_; ++j) proj[j] += c[i] * directions_[i][j];
  return primitive(std::span<const Rat>(proj));
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim())
    throw DimensionError("minkowski_sum: ambient dimensions differ");
  std::vector<RatVec> sums;
  sums.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices())
    for (const auto& b : q.vertices()) sums.push_back(add(a, b));
  return hull(sums);
}

Polytope sub_polytope(const Polytope& p, const std::vector<int>& vertex_ids) {
  std::vector<RatVec> pts;
  for (int v : vertex_ids) pts.push_back(p.vertices().at(static_cast<std::size_t>(v)));
  return hull(pts);
}

Fan normal_fan(const Polytope& p) {
  if (p.dim() < 1) throw std::invalid_argument("normal_fan: polytope must have dimension >= 1");
  Fan fan;
  fan.lattice_rank = p.ambient_dim();
  for (std::size_t f = 0; f < p.facets().size(); ++f) {
    IntVec r = p.canonical_normal(f);
    for (auto& x : r) x = -x;
    fan.rays.push_back(std::move(r));
  }
  fan.cones.assign(p.vertices().size(), {});
  for (std::size_t f = 0; f < p.incidence().size(); ++f)
    for (int v : p.incidence()[f]) fan.cones[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
  return fan;
}

std::vector<std::size_t> FaceLattice::f_vector() const {
  int top = -1;
  for (const auto& f : faces) top = std::max(top, f.dim);
  std::vector<std::size_t> out(static_cast<std::size_t>(top + 2), 0);
  for (const auto& f : faces) ++out[static_cast<std::size_t>(f.dim + 1)];
  return out;
}

std::vector<const Face*> FaceLattice::of_dim(int d) const {
  std::vector<const Face*> out;
  for (const auto& f : faces)
    if (f.dim == d) out.push_back(&f);
  return out;
}

std::string describe(const Polytope& p) {
  std::ostringstream os;
  os << "dim " << p.dim() << ", " << p.vertices().size() << " vertices, " << p.facets().size()
     << " facets (ambient " << p.ambient_dim() << ")";
  return os.str();
}

}  // namespace lgtk
