#pragma once

#include <vector>

#include "lgtk/rational.hpp"

namespace lgtk {

enum class LpStatus { optimal, infeasible, unbounded };
enum class Sense { minimize, maximize };

/// coeffs . x <= bound
struct LinearConstraint {
  RatVec coeffs;
  Rat bound;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  RatVec point;  // optimal point, or a feasible point when unbounded
  Rat value;     // objective at `point`
  RatVec ray;    // improving feasible direction when unbounded
};

/// Exact two-phase simplex (Bland's rule) over free variables.
LpResult lp_optimize(const std::vector<LinearConstraint>& constraints, const RatVec& objective,
                     Sense sense);

}  // namespace lgtk
