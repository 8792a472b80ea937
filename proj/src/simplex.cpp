#include "loccert/simplex.hpp"

#include <cstddef>

#include "loccert/errors.hpp"

namespace loccert {

// Dense phase-one tableau.
//
// Layout: m constraint rows over n original columns, m artificial columns
// and a right-hand-side column; one reduced-cost row at the bottom with the
// negated objective in its rhs cell. Rows are sign-flipped up front so that
// rhs >= 0 and the all-artificial basis is feasible. Minimizing the sum of
// artificials decides feasibility of the original system; the simplex
// multipliers of the optimal tableau provide the separating vector when the
// optimum is positive.
LpFeasibility solve_nonnegative_combination(const std::vector<std::vector<Rational>>& columns,
                                            const std::vector<Rational>& rhs) {
  const std::size_t m = rhs.size();
  const std::size_t n = columns.size();
  for (const auto& col : columns) {
    if (col.size() != m) throw ValidationError("column length does not match rhs");
  }

  const std::size_t width = n + m + 1;
  const std::size_t rhs_col = n + m;
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(width, Rational(0)));
  std::vector<int> flip(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0) flip[i] = -1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = flip[i] * columns[j][i];
    t[i][n + i] = 1;
    t[i][rhs_col] = flip[i] * rhs[i];
  }
  // Reduced costs for cost vector (0,...,0, 1,...,1): r_j = c_j - sum_i T[i][j].
  for (std::size_t j = 0; j < width; ++j) {
    Rational colsum = 0;
    for (std::size_t i = 0; i < m; ++i) colsum += t[i][j];
    const Rational cost = (j >= n && j < rhs_col) ? 1 : 0;
    t[m][j] = cost - colsum;  // rhs cell ends up as -(objective)
  }

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Bland's rule terminates without cycling; the budget only catches bugs.
  const std::size_t max_pivots = 1000000 + 100 * (n + m) * (m + 1);
  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > max_pivots) {
      throw InternalError("simplex exceeded its pivot budget");
    }
    // Bland: entering column = smallest index with negative reduced cost.
    std::size_t enter = width;
    for (std::size_t j = 0; j < rhs_col; ++j) {
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;  // optimal

    // Bland: leaving row = min ratio, ties broken by smallest basic index.
    std::size_t leave = m;
    Rational best_ratio = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rational ratio = t[i][rhs_col] / t[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) {
      throw InternalError("phase-one simplex became unbounded");
    }

    const Rational p = t[leave][enter];
    for (std::size_t j = 0; j < width; ++j) t[leave][j] /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  const Rational objective = -t[m][rhs_col];
  LpFeasibility out;
  if (objective == 0) {
    out.feasible = true;
    out.solution.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) out.solution[basis[i]] = t[i][rhs_col];
    }
  } else {
    // Simplex multipliers: y_i = 1 - (reduced cost of artificial i),
    // mapped back through the row sign flips.
    out.feasible = false;
    out.farkas.assign(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      out.farkas[i] = flip[i] * (1 - t[m][n + i]);
    }
  }
  return out;
}

}  // namespace loccert
