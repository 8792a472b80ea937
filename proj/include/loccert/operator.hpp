#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "loccert/scalar.hpp"

namespace loccert {

/// Dense Hermitian matrix over exact complex rationals or complex doubles.
///
/// Instances are immutable; copies share storage and are cheap. The scalar
/// mode is fixed per instance and operations never mix modes.
///
/// Exact-mode construction enforces Hermiticity strictly (conjugate-symmetric
/// entries, real diagonal). Float-mode construction admits entry-wise slack
/// up to the given tolerance and then stores the Hermitian part (A + A†)/2,
/// so downstream code can rely on exact conjugate symmetry of the stored
/// doubles.
class HermitianOperator {
 public:
  /// Row-major entries, length dim*dim.
  static HermitianOperator exact_from_entries(int dim, std::vector<ExactComplex> entries);
  static HermitianOperator float_from_entries(int dim, std::vector<FloatComplex> entries,
                                              double hermitian_tol = kDefaultTolerance);

  static HermitianOperator identity(int dim, ScalarMode mode);
  static HermitianOperator exact_diagonal(std::vector<Rational> diagonal);

  /// Outer product v v†, optionally divided by <v,v> so the result has
  /// trace one. The vector must be nonzero.
  static HermitianOperator exact_projector(const std::vector<ExactComplex>& v,
                                           bool normalize = true);
  static HermitianOperator float_projector(const std::vector<FloatComplex>& v,
                                           bool normalize = true);

  ScalarMode mode() const { return s_->mode; }
  int dim() const { return s_->dim; }
  bool is_exact() const { return s_->mode == ScalarMode::Exact; }

  const ExactComplex& exact_at(int i, int j) const { return s_->exact[idx(i, j)]; }
  FloatComplex float_at(int i, int j) const { return s_->flt[idx(i, j)]; }
  Scalar at(int i, int j) const;

  const std::vector<ExactComplex>& exact_entries() const { return s_->exact; }
  const std::vector<FloatComplex>& float_entries() const { return s_->flt; }

  bool is_zero() const;
  Scalar trace() const;

 private:
  struct Storage {
    ScalarMode mode;
    int dim;
    std::vector<ExactComplex> exact;
    std::vector<FloatComplex> flt;
  };

  explicit HermitianOperator(std::shared_ptr<const Storage> s) : s_(std::move(s)) {}
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * s_->dim + j; }

  std::shared_ptr<const Storage> s_;
};

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

/// Kronecker product of the factors, in list order. All factors must share
/// one scalar mode; the result has dimension equal to the product of the
/// factor dimensions.
HermitianOperator tensor_product(std::span<const HermitianOperator> factors);

HermitianOperator operator_add(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator_sub(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator scale(const HermitianOperator& a, const Rational& q);
HermitianOperator scale(const HermitianOperator& a, double q);

/// Entry-wise equality. Exact mode compares exactly; float mode compares
/// bit-equal doubles (use max_abs_diff for tolerant comparison).
bool operator_equal(const HermitianOperator& a, const HermitianOperator& b);

/// Largest entry-wise absolute difference (float mode only).
double max_abs_diff(const HermitianOperator& a, const HermitianOperator& b);

double frobenius_norm(const HermitianOperator& a);

// ---------------------------------------------------------------------------
// Predicates and ray logic
// ---------------------------------------------------------------------------

/// Exact mode: symmetric elimination with diagonal pivoting — positive
/// semidefinite iff all pivots are nonnegative and every zero pivot has a
/// vanishing row. Float mode: smallest eigenvalue >= -tol.psd.
bool is_positive_semidefinite(const HermitianOperator& op, const Tolerances& tol = {});

/// Matrix rank. Exact mode by Gaussian elimination; float mode counts
/// eigenvalues of magnitude above tol.psd.
int operator_rank(const HermitianOperator& op, const Tolerances& tol = {});

/// True iff rank(op) <= 1 (cheaper than a full rank computation).
bool has_rank_at_most_one(const HermitianOperator& op, const Tolerances& tol = {});

/// Returns lambda > 0 with a = lambda * b if the two operators lie on the
/// same ray, otherwise nullopt. Only positive factors count: two nonzero PSD
/// operators cannot be related by a negative scale. Zero input is an error.
///
/// Exact mode decides exactly; float mode normalizes both by Frobenius norm
/// and compares entry-wise within tol.proportionality.
std::optional<Scalar> proportionality_factor(const HermitianOperator& a,
                                             const HermitianOperator& b,
                                             const Tolerances& tol = {});

bool is_proportional_to_identity(const HermitianOperator& op, const Tolerances& tol = {});

struct RayDedupe {
  /// Pairwise non-proportional, first occurrence kept, input order.
  std::vector<HermitianOperator> representatives;
  /// For each input index, the index of its representative.
  std::vector<int> ray_index;
};

/// Groups operators by ray. Deterministic: the first member of each ray
/// class (in input order) becomes its representative.
RayDedupe dedupe_rays(std::span<const HermitianOperator> ops, const Tolerances& tol = {});

}  // namespace loccert
