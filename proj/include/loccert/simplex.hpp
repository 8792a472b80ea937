#pragma once

#include <vector>

#include "loccert/scalar.hpp"

namespace loccert {

/// Outcome of an exact nonnegative-combination feasibility problem
///   find x >= 0 with  A x = b
/// over the rationals. Exactly one of the two certificates is populated:
///  - feasible:   x with A x = b and x >= 0 component-wise;
///  - infeasible: y with y.col <= 0 for every column of A and y.b > 0,
///    which separates b from the cone spanned by the columns.
struct LpFeasibility {
  bool feasible = false;
  std::vector<Rational> solution;  // length = number of columns
  std::vector<Rational> farkas;    // length = number of rows
};

/// Phase-one simplex with Bland's anti-cycling rule, run entirely over
/// exact rationals. Deterministic: identical inputs yield identical
/// certificates. `columns` holds the columns of A, all of length rhs.size().
LpFeasibility solve_nonnegative_combination(const std::vector<std::vector<Rational>>& columns,
                                            const std::vector<Rational>& rhs);

}  // namespace loccert
