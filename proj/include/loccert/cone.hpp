#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "loccert/operator.hpp"
#include "loccert/simplex.hpp"

namespace loccert {

/// Constructive answer to a conic-membership query.
struct ConicWitness {
  enum class Kind { Feasible, Infeasible };
  Kind kind = Kind::Infeasible;
  /// Feasible: coefficients lambda_j >= 0 with sum_j lambda_j A_j = B.
  std::vector<Rational> lambda;
  /// Infeasible: real vector y with <y, vec(A_j)> <= 0 for all j and
  /// <y, vec(B)> > 0.
  std::vector<Rational> farkas;
};

/// Linearization of a Hermitian matrix into R^(d^2): the d diagonal entries,
/// then for each i < j the real and imaginary parts of entry (i, j).
/// Linear and injective on Hermitian matrices.
std::vector<Rational> hermitian_to_real_vector_exact(const HermitianOperator& op);
std::vector<double> hermitian_to_real_vector_float(const HermitianOperator& op);

/// Decides whether `target` is a nonnegative combination of `generators`,
/// by exact phase-one simplex over the rationals (Bland's rule, fully
/// deterministic). Exact backend only; float input raises BackendError.
///
/// Every returned witness is re-verified before it leaves this function:
/// feasible coefficients are recombined and compared to the target exactly,
/// and separating vectors are checked strictly. A verification failure is an
/// InternalError (library bug), never bad input.
ConicWitness conic_membership(const HermitianOperator& target,
                              std::span<const HermitianOperator> generators);

/// True iff representatives[index] is NOT a nonnegative combination of the
/// other representatives — i.e. it generates an extreme ray of the cone.
bool is_extreme_ray(std::size_t index, std::span<const HermitianOperator> representatives);

struct ExtremeRayOptions {
  Tolerances tol;
  /// When every ray representative has rank one, all of them are extreme
  /// (rank-one operators are extreme in the full PSD cone, hence in any
  /// subset); this skips the conic programs entirely. Disable to force the
  /// LP route, e.g. for cross-checking.
  bool use_rank1_fast_path = true;
};

/// Per-party extreme-ray census of a finitely generated operator cone.
struct ExtremeRayReport {
  int party = -1;  // filled by callers that know it; -1 otherwise
  std::vector<HermitianOperator> representatives;
  std::vector<int> ray_index;  // input index -> representative index
  std::vector<bool> extreme;   // per representative
  /// Conic witnesses for the non-extreme representatives (exact mode only).
  std::map<std::size_t, ConicWitness> witnesses;
  std::int64_t extreme_count = 0;  // e = number of extreme representatives
  bool used_rank1_fast_path = false;
};

/// Dedupes the input to ray representatives and classifies each one as
/// extreme or not in the cone generated by all of them.
///
/// Float mode is only supported on the rank-one fast path; any float
/// representative of rank >= 2 raises BackendError instructing use of the
/// exact backend.
ExtremeRayReport extreme_ray_set(std::span<const HermitianOperator> ops,
                                 const ExtremeRayOptions& options = {});

}  // namespace loccert
