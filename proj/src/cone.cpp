#include "loccert/cone.hpp"

#include <string>

namespace loccert {

std::vector<Rational> hermitian_to_real_vector_exact(const HermitianOperator& op) {
  if (!op.is_exact()) throw ModeMismatchError("exact vectorization of a float operator");
  const int d = op.dim();
  std::vector<Rational> v;
  v.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) v.push_back(op.exact_at(i, i).re);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      v.push_back(op.exact_at(i, j).re);
      v.push_back(op.exact_at(i, j).im);
    }
  }
  return v;
}

std::vector<double> hermitian_to_real_vector_float(const HermitianOperator& op) {
  if (op.is_exact()) throw ModeMismatchError("float vectorization of an exact operator");
  const int d = op.dim();
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) v.push_back(op.float_at(i, i).real());
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      v.push_back(op.float_at(i, j).real());
      v.push_back(op.float_at(i, j).imag());
    }
  }
  return v;
}

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void verify_witness(const ConicWitness& w, const HermitianOperator& target,
                    std::span<const HermitianOperator> generators,
                    const std::vector<std::vector<Rational>>& columns,
                    const std::vector<Rational>& rhs) {
  if (w.kind == ConicWitness::Kind::Feasible) {
    std::optional<HermitianOperator> combo;
    for (std::size_t j = 0; j < generators.size(); ++j) {
      if (w.lambda[j] < 0) throw InternalError("negative coefficient in feasible witness");
      if (w.lambda[j] == 0) continue;
      HermitianOperator term = scale(generators[j], w.lambda[j]);
      combo = combo ? operator_add(*combo, term) : term;
    }
    const bool ok = combo ? operator_equal(*combo, target) : target.is_zero();
    if (!ok) throw InternalError("feasible witness does not recombine to the target");
  } else {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (dot(w.farkas, columns[j]) > 0) {
        throw InternalError("separating vector fails on generator " + std::to_string(j));
      }
    }
    if (dot(w.farkas, rhs) <= 0) {
      throw InternalError("separating vector does not separate the target");
    }
  }
}

}  // namespace

ConicWitness conic_membership(const HermitianOperator& target,
                              std::span<const HermitianOperator> generators) {
  if (!target.is_exact()) {
    throw BackendError("conic membership requires the exact backend");
  }
  if (generators.empty()) throw ValidationError("conic membership over an empty generator set");
  std::vector<std::vector<Rational>> columns;
  columns.reserve(generators.size());
  for (const auto& g : generators) {
    if (!g.is_exact()) throw BackendError("conic membership requires the exact backend");
    if (g.dim() != target.dim()) throw ValidationError("generator dimension mismatch");
    columns.push_back(hermitian_to_real_vector_exact(g));
  }
  const std::vector<Rational> rhs = hermitian_to_real_vector_exact(target);

  const LpFeasibility lp = solve_nonnegative_combination(columns, rhs);
  ConicWitness w;
  if (lp.feasible) {
    w.kind = ConicWitness::Kind::Feasible;
    w.lambda = lp.solution;
  } else {
    w.kind = ConicWitness::Kind::Infeasible;
    w.farkas = lp.farkas;
  }
  verify_witness(w, target, generators, columns, rhs);
  return w;
}

bool is_extreme_ray(std::size_t index, std::span<const HermitianOperator> representatives) {
  if (index >= representatives.size()) throw ValidationError("representative index out of range");
  std::vector<HermitianOperator> others;
  others.reserve(representatives.size() - 1);
  for (std::size_t j = 0; j < representatives.size(); ++j) {
    if (j != index) others.push_back(representatives[j]);
  }
  if (others.empty()) return true;  // a single nonzero generator spans an extreme ray
  return conic_membership(representatives[index], others).kind ==
         ConicWitness::Kind::Infeasible;
}

ExtremeRayReport extreme_ray_set(std::span<const HermitianOperator> ops,
                                 const ExtremeRayOptions& options) {
  if (ops.empty()) throw ValidationError("extreme ray census of an empty operator list");
  const ScalarMode mode = ops[0].mode();
  for (const auto& op : ops) {
    if (op.mode() != mode) throw ModeMismatchError("operator list mixes scalar modes");
  }

  ExtremeRayReport report;
  RayDedupe dd = dedupe_rays(ops, options.tol);
  report.representatives = std::move(dd.representatives);
  report.ray_index = std::move(dd.ray_index);

  bool all_rank_one = true;
  for (const auto& rep : report.representatives) {
    if (!has_rank_at_most_one(rep, options.tol)) {
      all_rank_one = false;
      break;
    }
  }

  if (all_rank_one && options.use_rank1_fast_path) {
    report.extreme.assign(report.representatives.size(), true);
    report.extreme_count = static_cast<std::int64_t>(report.representatives.size());
    report.used_rank1_fast_path = true;
    return report;
  }
  if (mode == ScalarMode::Float) {
    throw BackendError(
        all_rank_one
            ? "float backend supports only the rank-one fast path; re-enable it or use exact"
            : "representative of rank >= 2 in float mode: extreme-ray classification needs "
              "the exact backend");
  }

  report.extreme.assign(report.representatives.size(), false);
  for (std::size_t r = 0; r < report.representatives.size(); ++r) {
    if (report.representatives.size() == 1) {
      report.extreme[r] = true;
      continue;
    }
    std::vector<HermitianOperator> others;
    others.reserve(report.representatives.size() - 1);
    for (std::size_t j = 0; j < report.representatives.size(); ++j) {
      if (j != r) others.push_back(report.representatives[j]);
    }
    ConicWitness w = conic_membership(report.representatives[r], others);
    if (w.kind == ConicWitness::Kind::Infeasible) {
      report.extreme[r] = true;
    } else {
      // Re-index the witness onto the full representative list: coefficient
      // for the skipped representative r is zero.
      ConicWitness full = w;
      full.lambda.clear();
      full.lambda.reserve(report.representatives.size());
      std::size_t k = 0;
      for (std::size_t j = 0; j < report.representatives.size(); ++j) {
        full.lambda.push_back(j == r ? Rational(0) : w.lambda[k++]);
      }
      report.witnesses.emplace(r, std::move(full));
    }
  }
  for (bool f : report.extreme) report.extreme_count += f ? 1 : 0;
  return report;
}

}  // namespace loccert
