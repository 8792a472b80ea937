#include "loccert/operator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace loccert {

namespace {

using EigenCMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

EigenCMatrix to_eigen(const HermitianOperator& op) {
  const int d = op.dim();
  EigenCMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = op.float_at(i, j);
  return m;
}

void require_same_shape(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.mode() != b.mode()) {
    throw ModeMismatchError("operands mix exact and float backends");
  }
  if (a.dim() != b.dim()) {
    throw ValidationError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  }
}

// First nonzero entry in row-major order, or -1 if the matrix is zero.
int first_nonzero_exact(const std::vector<ExactComplex>& xs) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!xs[k].is_zero()) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

HermitianOperator HermitianOperator::exact_from_entries(int dim,
                                                        std::vector<ExactComplex> entries) {
  if (dim <= 0) throw ValidationError("operator dimension must be positive");
  if (entries.size() != static_cast<std::size_t>(dim) * dim) {
    throw ValidationError("entry count does not match dimension");
  }
  for (int i = 0; i < dim; ++i) {
    if (entries[static_cast<std::size_t>(i) * dim + i].im != 0) {
      throw ValidationError("diagonal entry (" + std::to_string(i) + "," + std::to_string(i) +
                            ") has nonzero imaginary part");
    }
    for (int j = i + 1; j < dim; ++j) {
      const auto& upper = entries[static_cast<std::size_t>(i) * dim + j];
      const auto& lower = entries[static_cast<std::size_t>(j) * dim + i];
      if (!(upper == lower.conj())) {
        throw ValidationError("entries (" + std::to_string(i) + "," + std::to_string(j) +
                              ") and (" + std::to_string(j) + "," + std::to_string(i) +
                              ") are not conjugate");
      }
    }
  }
  auto s = std::make_shared<Storage>();
  s->mode = ScalarMode::Exact;
  s->dim = dim;
  s->exact = std::move(entries);
  return HermitianOperator(std::move(s));
}

HermitianOperator HermitianOperator::float_from_entries(int dim,
                                                        std::vector<FloatComplex> entries,
                                                        double hermitian_tol) {
  if (dim <= 0) throw ValidationError("operator dimension must be positive");
  if (entries.size() != static_cast<std::size_t>(dim) * dim) {
    throw ValidationError("entry count does not match dimension");
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const auto upper = entries[static_cast<std::size_t>(i) * dim + j];
      const auto lower = entries[static_cast<std::size_t>(j) * dim + i];
      if (std::abs(upper - std::conj(lower)) > hermitian_tol) {
        throw ValidationError("entries (" + std::to_string(i) + "," + std::to_string(j) +
                              ") and (" + std::to_string(j) + "," + std::to_string(i) +
                              ") violate Hermiticity beyond tolerance");
      }
    }
  }
  // Store the Hermitian part so conjugate symmetry is exact from here on.
  for (int i = 0; i < dim; ++i) {
    entries[static_cast<std::size_t>(i) * dim + i] =
        FloatComplex(entries[static_cast<std::size_t>(i) * dim + i].real(), 0.0);
    for (int j = i + 1; j < dim; ++j) {
      const auto avg = 0.5 * (entries[static_cast<std::size_t>(i) * dim + j] +
                              std::conj(entries[static_cast<std::size_t>(j) * dim + i]));
      entries[static_cast<std::size_t>(i) * dim + j] = avg;
      entries[static_cast<std::size_t>(j) * dim + i] = std::conj(avg);
    }
  }
  auto s = std::make_shared<Storage>();
  s->mode = ScalarMode::Float;
  s->dim = dim;
  s->flt = std::move(entries);
  return HermitianOperator(std::move(s));
}

HermitianOperator HermitianOperator::identity(int dim, ScalarMode mode) {
  if (mode == ScalarMode::Exact) {
    std::vector<ExactComplex> e(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i) * dim + i] = ExactComplex(Rational(1));
    return exact_from_entries(dim, std::move(e));
  }
  std::vector<FloatComplex> e(static_cast<std::size_t>(dim) * dim, FloatComplex(0, 0));
  for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i) * dim + i] = FloatComplex(1, 0);
  return float_from_entries(dim, std::move(e));
}

HermitianOperator HermitianOperator::exact_diagonal(std::vector<Rational> diagonal) {
  const int d = static_cast<int>(diagonal.size());
  std::vector<ExactComplex> e(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i) * d + i] = ExactComplex(std::move(diagonal[i]));
  return exact_from_entries(d, std::move(e));
}

HermitianOperator HermitianOperator::exact_projector(const std::vector<ExactComplex>& v,
                                                     bool normalize) {
  const int d = static_cast<int>(v.size());
  Rational norm2 = 0;
  for (const auto& c : v) norm2 += c.re * c.re + c.im * c.im;
  if (norm2 == 0) throw ValidationError("projector onto the zero vector");
  std::vector<ExactComplex> e(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ExactComplex x = v[i] * v[j].conj();
      if (normalize) x = {x.re / norm2, x.im / norm2};
      e[static_cast<std::size_t>(i) * d + j] = std::move(x);
    }
  }
  return exact_from_entries(d, std::move(e));
}

HermitianOperator HermitianOperator::float_projector(const std::vector<FloatComplex>& v,
                                                     bool normalize) {
  const int d = static_cast<int>(v.size());
  double norm2 = 0;
  for (const auto& c : v) norm2 += std::norm(c);
  if (norm2 == 0) throw ValidationError("projector onto the zero vector");
  std::vector<FloatComplex> e(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      FloatComplex x = v[i] * std::conj(v[j]);
      if (normalize) x /= norm2;
      e[static_cast<std::size_t>(i) * d + j] = x;
    }
  }
  return float_from_entries(d, std::move(e));
}

Scalar HermitianOperator::at(int i, int j) const {
  return is_exact() ? Scalar::exact(exact_at(i, j)) : Scalar::floating(float_at(i, j));
}

bool HermitianOperator::is_zero() const {
  if (is_exact()) return first_nonzero_exact(s_->exact) < 0;
  for (const auto& c : s_->flt) {
    if (c != FloatComplex(0, 0)) return false;
  }
  return true;
}

Scalar HermitianOperator::trace() const {
  if (is_exact()) {
    ExactComplex t;
    for (int i = 0; i < dim(); ++i) t += exact_at(i, i);
    return Scalar::exact(std::move(t));
  }
  FloatComplex t(0, 0);
  for (int i = 0; i < dim(); ++i) t += float_at(i, i);
  return Scalar::floating(t);
}

HermitianOperator tensor_product(std::span<const HermitianOperator> factors) {
  if (factors.empty()) throw ValidationError("tensor product of an empty factor list");
  const ScalarMode mode = factors[0].mode();
  long total = 1;
  for (const auto& f : factors) {
    if (f.mode() != mode) throw ModeMismatchError("tensor factors mix exact and float backends");
    total *= f.dim();
    if (total > 1 << 20) throw ValidationError("tensor product dimension too large");
  }
  const int d = static_cast<int>(total);

  // Fold left: result = ((f0 x f1) x f2) ...
  auto kron_exact = [](const HermitianOperator& a, const HermitianOperator& b) {
    const int da = a.dim(), db = b.dim(), d = da * db;
    std::vector<ExactComplex> e(static_cast<std::size_t>(d) * d);
    for (int i1 = 0; i1 < da; ++i1)
      for (int j1 = 0; j1 < da; ++j1) {
        const ExactComplex& aij = a.exact_at(i1, j1);
        if (aij.is_zero()) continue;
        for (int i2 = 0; i2 < db; ++i2)
          for (int j2 = 0; j2 < db; ++j2)
            e[static_cast<std::size_t>(i1 * db + i2) * d + (j1 * db + j2)] =
                aij * b.exact_at(i2, j2);
      }
    return HermitianOperator::exact_from_entries(d, std::move(e));
  };
  auto kron_float = [](const HermitianOperator& a, const HermitianOperator& b) {
    const int da = a.dim(), db = b.dim(), d = da * db;
    std::vector<FloatComplex> e(static_cast<std::size_t>(d) * d, FloatComplex(0, 0));
    for (int i1 = 0; i1 < da; ++i1)
      for (int j1 = 0; j1 < da; ++j1) {
        const FloatComplex aij = a.float_at(i1, j1);
        for (int i2 = 0; i2 < db; ++i2)
          for (int j2 = 0; j2 < db; ++j2)
            e[static_cast<std::size_t>(i1 * db + i2) * d + (j1 * db + j2)] =
                aij * b.float_at(i2, j2);
      }
    return HermitianOperator::float_from_entries(d, std::move(e));
  };

  HermitianOperator acc = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) {
    acc = mode == ScalarMode::Exact ? kron_exact(acc, factors[k]) : kron_float(acc, factors[k]);
  }
  (void)d;
  return acc;
}

HermitianOperator operator_add(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_shape(a, b);
  const int d = a.dim();
  if (a.is_exact()) {
    std::vector<ExactComplex> e = a.exact_entries();
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += b.exact_entries()[k];
    return HermitianOperator::exact_from_entries(d, std::move(e));
  }
  std::vector<FloatComplex> e = a.float_entries();
  for (std::size_t k = 0; k < e.size(); ++k) e[k] += b.float_entries()[k];
  return HermitianOperator::float_from_entries(d, std::move(e), 1.0);
}

HermitianOperator operator_sub(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_shape(a, b);
  const int d = a.dim();
  if (a.is_exact()) {
    std::vector<ExactComplex> e = a.exact_entries();
    for (std::size_t k = 0; k < e.size(); ++k) e[k] -= b.exact_entries()[k];
    return HermitianOperator::exact_from_entries(d, std::move(e));
  }
  std::vector<FloatComplex> e = a.float_entries();
  for (std::size_t k = 0; k < e.size(); ++k) e[k] -= b.float_entries()[k];
  return HermitianOperator::float_from_entries(d, std::move(e), 1.0);
}

HermitianOperator scale(const HermitianOperator& a, const Rational& q) {
  if (!a.is_exact()) throw ModeMismatchError("rational scale of a float operator");
  std::vector<ExactComplex> e = a.exact_entries();
  for (auto& c : e) c = q * c;
  return HermitianOperator::exact_from_entries(a.dim(), std::move(e));
}

HermitianOperator scale(const HermitianOperator& a, double q) {
  if (a.is_exact()) throw ModeMismatchError("double scale of an exact operator");
  std::vector<FloatComplex> e = a.float_entries();
  for (auto& c : e) c *= q;
  return HermitianOperator::float_from_entries(a.dim(), std::move(e), 1.0);
}

bool operator_equal(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.mode() != b.mode() || a.dim() != b.dim()) return false;
  if (a.is_exact()) return a.exact_entries() == b.exact_entries();
  return a.float_entries() == b.float_entries();
}

double max_abs_diff(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_shape(a, b);
  if (a.is_exact()) throw ModeMismatchError("max_abs_diff is a float-mode comparison");
  double m = 0;
  for (std::size_t k = 0; k < a.float_entries().size(); ++k) {
    m = std::max(m, std::abs(a.float_entries()[k] - b.float_entries()[k]));
  }
  return m;
}

double frobenius_norm(const HermitianOperator& a) {
  double s = 0;
  if (a.is_exact()) {
    for (const auto& c : a.exact_entries()) {
      s += (c.re * c.re + c.im * c.im).convert_to<double>();
    }
  } else {
    for (const auto& c : a.float_entries()) s += std::norm(c);
  }
  return std::sqrt(s);
}

bool is_positive_semidefinite(const HermitianOperator& op, const Tolerances& tol) {
  const int d = op.dim();
  if (!op.is_exact()) {
    Eigen::SelfAdjointEigenSolver<EigenCMatrix> es(to_eigen(op), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.psd;
  }

  // Schur-complement elimination on a working copy. A Hermitian matrix is
  // PSD iff every pivot is nonnegative and any zero diagonal entry has a
  // fully vanishing row at its elimination step.
  std::vector<ExactComplex> a = op.exact_entries();
  auto at = [&](int i, int j) -> ExactComplex& { return a[static_cast<std::size_t>(i) * d + j]; };
  for (int k = 0; k < d; ++k) {
    const Rational p = at(k, k).re;
    if (p < 0) return false;
    if (p == 0) {
      for (int i = k + 1; i < d; ++i) {
        if (!at(i, k).is_zero()) return false;
      }
      continue;
    }
    for (int i = k + 1; i < d; ++i) {
      if (at(i, k).is_zero()) continue;
      for (int j = k + 1; j < d; ++j) {
        ExactComplex delta = at(i, k) * at(k, j);
        at(i, j) -= ExactComplex{delta.re / p, delta.im / p};
      }
    }
  }
  return true;
}

namespace {

// Row-echelon rank of an exact matrix, stopping early once `stop_at` pivots
// have been found (pass dim for the full rank).
int exact_rank_bounded(const HermitianOperator& op, int stop_at) {
  const int d = op.dim();
  std::vector<ExactComplex> a = op.exact_entries();
  auto at = [&](int i, int j) -> ExactComplex& { return a[static_cast<std::size_t>(i) * d + j]; };
  int rank = 0;
  int row = 0;
  for (int col = 0; col < d && row < d; ++col) {
    int pivot = -1;
    for (int i = row; i < d; ++i) {
      if (!at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int j = 0; j < d; ++j) std::swap(at(pivot, j), at(row, j));
    }
    ++rank;
    if (rank >= stop_at) return rank;
    const ExactComplex p = at(row, col);
    for (int i = row + 1; i < d; ++i) {
      if (at(i, col).is_zero()) continue;
      const ExactComplex f = at(i, col) / p;
      for (int j = col; j < d; ++j) at(i, j) -= f * at(row, j);
    }
    ++row;
  }
  return rank;
}

int float_rank(const HermitianOperator& op, double tol) {
  Eigen::SelfAdjointEigenSolver<EigenCMatrix> es(to_eigen(op), Eigen::EigenvaluesOnly);
  int r = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i]) > tol) ++r;
  }
  return r;
}

}  // namespace

int operator_rank(const HermitianOperator& op, const Tolerances& tol) {
  return op.is_exact() ? exact_rank_bounded(op, op.dim() + 1) : float_rank(op, tol.psd);
}

bool has_rank_at_most_one(const HermitianOperator& op, const Tolerances& tol) {
  return op.is_exact() ? exact_rank_bounded(op, 2) <= 1 : float_rank(op, tol.psd) <= 1;
}

std::optional<Scalar> proportionality_factor(const HermitianOperator& a,
                                             const HermitianOperator& b,
                                             const Tolerances& tol) {
  require_same_shape(a, b);
  if (a.is_zero() || b.is_zero()) {
    throw ValidationError("proportionality test on a zero operator");
  }
  if (a.is_exact()) {
    const int k = first_nonzero_exact(a.exact_entries());
    const ExactComplex& bk = b.exact_entries()[static_cast<std::size_t>(k)];
    if (bk.is_zero()) return std::nullopt;
    const ExactComplex q = a.exact_entries()[static_cast<std::size_t>(k)] / bk;
    if (q.im != 0 || q.re <= 0) return std::nullopt;
    for (std::size_t m = 0; m < a.exact_entries().size(); ++m) {
      if (!(a.exact_entries()[m] == ExactComplex(q.re, Rational(0)) * b.exact_entries()[m])) {
        return std::nullopt;
      }
    }
    return Scalar::exact(ExactComplex(q.re, Rational(0)));
  }
  const double na = frobenius_norm(a);
  const double nb = frobenius_norm(b);
  for (std::size_t m = 0; m < a.float_entries().size(); ++m) {
    if (std::abs(a.float_entries()[m] / na - b.float_entries()[m] / nb) > tol.proportionality) {
      return std::nullopt;
    }
  }
  return Scalar::floating(FloatComplex(na / nb, 0.0));
}

bool is_proportional_to_identity(const HermitianOperator& op, const Tolerances& tol) {
  return proportionality_factor(op, HermitianOperator::identity(op.dim(), op.mode()), tol)
      .has_value();
}

RayDedupe dedupe_rays(std::span<const HermitianOperator> ops, const Tolerances& tol) {
  RayDedupe out;
  // Exact mode: the row-major position of the first nonzero entry is a ray
  // invariant, so representatives sharing it are the only candidates.
  std::vector<int> rep_fingerprint;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].is_zero()) {
      throw ValidationError("zero operator at index " + std::to_string(i) +
                            " cannot generate a ray");
    }
    const int fp = ops[i].is_exact() ? first_nonzero_exact(ops[i].exact_entries()) : -1;
    int found = -1;
    for (std::size_t r = 0; r < out.representatives.size(); ++r) {
      if (ops[i].is_exact() && rep_fingerprint[r] != fp) continue;
      if (ops[i].dim() != out.representatives[r].dim()) {
        throw ValidationError("ray dedup over mixed dimensions");
      }
      if (proportionality_factor(ops[i], out.representatives[r], tol).has_value()) {
        found = static_cast<int>(r);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(out.representatives.size());
      out.representatives.push_back(ops[i]);
      rep_fingerprint.push_back(fp);
    }
    out.ray_index.push_back(found);
  }
  return out;
}

}  // namespace loccert
