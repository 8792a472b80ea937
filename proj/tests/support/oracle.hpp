#pragma once

// Brute-force conic-membership oracle, independent of the library's LP
// route: its own vectorization (real and imaginary parts of every entry,
// 2 d^2 coordinates), its own Gaussian elimination, and exhaustive
// enumeration of column subsets. By the conic Caratheodory theorem, a
// target lies in the cone iff some linearly independent subset of the
// generators expresses it with nonnegative coefficients.

#include <optional>
#include <span>
#include <vector>

#include "loccert/operator.hpp"

namespace oracle {

using loccert::HermitianOperator;
using loccert::Rational;

inline std::vector<Rational> vectorize(const HermitianOperator& op) {
  std::vector<Rational> v;
  const int d = op.dim();
  v.reserve(2 * static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      v.push_back(op.exact_at(i, j).re);
      v.push_back(op.exact_at(i, j).im);
    }
  }
  return v;
}

/// Solves M x = b exactly when M (given by columns) has full column rank;
/// returns nullopt if the columns are dependent or the system is
/// inconsistent.
inline std::optional<std::vector<Rational>> solve_full_rank(
    const std::vector<std::vector<Rational>>& cols, const std::vector<Rational>& b) {
  const std::size_t rows = b.size();
  const std::size_t n = cols.size();
  // Augmented matrix [cols | b], row-major.
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = cols[j][i];
    a[i][n] = b[i];
  }
  std::vector<std::size_t> pivot_rows;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = row;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) return std::nullopt;  // dependent columns
    std::swap(a[p], a[row]);
    const Rational piv = a[row][col];
    for (std::size_t j = col; j <= n; ++j) a[row][j] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_rows.push_back(row);
    ++row;
  }
  for (std::size_t i = row; i < rows; ++i) {
    if (a[i][n] != 0) return std::nullopt;  // inconsistent
  }
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t col = 0; col < n; ++col) x[col] = a[col][n];
  return x;
}

/// True iff target is a nonnegative rational combination of the generators.
inline bool in_cone(const HermitianOperator& target,
                    std::span<const HermitianOperator> generators) {
  const std::vector<Rational> b = vectorize(target);
  bool zero = true;
  for (const auto& q : b) zero = zero && q == 0;
  if (zero) return true;

  std::vector<std::vector<Rational>> cols;
  cols.reserve(generators.size());
  for (const auto& g : generators) cols.push_back(vectorize(g));

  const std::size_t n = cols.size();
  for (std::size_t mask = 1; mask < (1ULL << n); ++mask) {
    std::vector<std::vector<Rational>> subset;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1ULL << j)) subset.push_back(cols[j]);
    }
    if (subset.size() > b.size()) continue;
    const auto x = solve_full_rank(subset, b);
    if (!x) continue;
    bool nonneg = true;
    for (const auto& q : *x) nonneg = nonneg && q >= 0;
    if (nonneg) return true;
  }
  return false;
}

/// Classifies representative `index` against the others by brute force.
inline bool extreme_by_brute_force(std::size_t index,
                                   std::span<const HermitianOperator> reps) {
  std::vector<HermitianOperator> others;
  for (std::size_t j = 0; j < reps.size(); ++j) {
    if (j != index) others.push_back(reps[j]);
  }
  if (others.empty()) return true;
  return !in_cone(reps[index], others);
}

}  // namespace oracle
