#include "lgtk/lp.hpp"

#include <optional>

namespace lgtk {

namespace {

// Dense tableau for max c.z subject to T z = rhs, z >= 0, with a feasible basis.
class Tableau {
 public:
  Tableau(std::vector<RatVec> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t cols() const { return rows_.empty() ? 0 : rows_.front().size() - 1; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const std::vector<RatVec>& rows() const { return rows_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rat inv = 1 / rows_[r][c];
    for (auto& x : rows_[r])
      if (sgn(x) != 0) x *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || sgn(rows_[i][c]) == 0) continue;
      const Rat f = rows_[i][c];
      for (std::size_t j = 0; j < rows_[i].size(); ++j)
        if (sgn(rows_[r][j]) != 0) rows_[i][j] -= f * rows_[r][j];
    }
    basis_[r] = c;
  }

  // Runs the simplex method restricted to columns < `usable`. Returns the
  // entering column if the problem is unbounded.
  std::optional<std::size_t> maximize(const RatVec& cost, std::size_t usable) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < usable && !enter; ++j) {
        if (is_basic(j)) continue;
        Rat reduced = -cost[j];
        for (std::size_t i = 0; i < rows_.size(); ++i)
          if (sgn(rows_[i][j]) != 0) reduced += cost[basis_[i]] * rows_[i][j];
        if (sgn(reduced) < 0) enter = j;
      }
      if (!enter) return std::nullopt;
      const std::size_t c = *enter;
      std::optional<std::size_t> leave;
      Rat best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][c]) <= 0) continue;
        Rat ratio = rows_[i].back() / rows_[i][c];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return c;
      pivot(*leave, c);
    }
  }

  bool is_basic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  void truncate_columns(std::size_t keep) {
    for (auto& row : rows_) {
      Rat rhs = row.back();
      row.resize(keep);
      row.push_back(rhs);
    }
  }

  RatVec solution(std::size_t n) const {
    RatVec z(n, Rat(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n) z[basis_[i]] = rows_[i].back();
    return z;
  }

 private:
  std::vector<RatVec> rows_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult lp_optimize(const std::vector<LinearConstraint>& constraints, const RatVec& objective,
                     Sense sense) {
  const std::size_t n = objective.size();
  const std::size_t m = constraints.size();
  for (const auto& c : constraints)
    if (c.coeffs.size() != n) throw DimensionError("lp_optimize: constraint length mismatch");

  // Columns: x+ (n), x- (n), slacks (m), artificials (one per negative rhs).
  const std::size_t base_cols = 2 * n + m;
  std::size_t n_art = 0;
  for (const auto& c : constraints)
    if (sgn(c.bound) < 0) ++n_art;
  const std::size_t total = base_cols + n_art;

  std::vector<RatVec> rows(m, RatVec(total + 1, Rat(0)));
  std::vector<std::size_t> basis(m);
  std::size_t art = base_cols;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = constraints[i];
    const int flip = sgn(c.bound) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][j] = flip * c.coeffs[j];
      rows[i][n + j] = -flip * c.coeffs[j];
    }
    rows[i][2 * n + i] = flip;
    rows[i][total] = flip * c.bound;
    if (flip < 0) {
      rows[i][art] = 1;
      basis[i] = art++;
    } else {
      basis[i] = 2 * n + i;
    }
  }

  Tableau tab(std::move(rows), std::move(basis));
  LpResult result;

  if (n_art > 0) {
    RatVec phase1(total, Rat(0));
    for (std::size_t j = base_cols; j < total; ++j) phase1[j] = -1;
    tab.maximize(phase1, total);
    Rat infeas = 0;
    for (std::size_t i = 0; i < tab.rows().size(); ++i)
      if (tab.basis()[i] >= base_cols) infeas += tab.rows()[i].back();
    if (sgn(infeas) != 0) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (std::size_t i = 0; i < tab.rows().size();) {
      if (tab.basis()[i] < base_cols) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < base_cols && !col; ++j)
        if (sgn(tab.rows()[i][j]) != 0 && !tab.is_basic(j)) col = j;
      if (col) {
        tab.pivot(i, *col);
        ++i;
      } else {
        tab.drop_row(i);
      }
    }
    tab.truncate_columns(base_cols);
  }

  RatVec cost(base_cols, Rat(0));
  const int dir = sense == Sense::maximize ? 1 : -1;
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = dir * objective[j];
    cost[n + j] = -dir * objective[j];
  }
  auto unbounded = tab.maximize(cost, base_cols);

  const RatVec z = tab.solution(base_cols);
  result.point.assign(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j) result.point[j] = z[j] - z[n + j];
  result.value = dot(objective, result.point);

  if (unbounded) {
    const std::size_t c = *unbounded;
    RatVec d(base_cols, Rat(0));
    d[c] = 1;
    for (std::size_t i = 0; i < tab.rows().size(); ++i) d[tab.basis()[i]] -= tab.rows()[i][c];
    result.ray.assign(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j) result.ray[j] = d[j] - d[n + j];
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  return result;
}

}  // namespace lgtk
