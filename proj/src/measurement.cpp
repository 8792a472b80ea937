#include "loccert/measurement.hpp"

#include <cmath>

namespace loccert {

ScalarMode SeparableMeasurement::mode() const {
  if (elements.empty() || elements[0].factors.empty()) return ScalarMode::Exact;
  return elements[0].factors[0].mode();
}

std::vector<HermitianOperator> SeparableMeasurement::party_factors(int party) const {
  std::vector<HermitianOperator> out;
  out.reserve(elements.size());
  for (const auto& el : elements) out.push_back(el.factors.at(party));
  return out;
}

void validate_measurement(const SeparableMeasurement& m, const Tolerances& tol) {
  if (m.party_count < 1) throw ValidationError("measurement needs at least one party");
  if (static_cast<int>(m.dims.size()) != m.party_count) {
    throw ValidationError("dims list does not match party count");
  }
  if (m.elements.empty()) throw ValidationError("measurement has no elements");
  const ScalarMode mode = m.mode();
  for (std::size_t j = 0; j < m.elements.size(); ++j) {
    const auto& el = m.elements[j];
    if (static_cast<int>(el.factors.size()) != m.party_count) {
      throw ValidationError("element " + std::to_string(j) + " has " +
                            std::to_string(el.factors.size()) + " factors, expected " +
                            std::to_string(m.party_count));
    }
    for (int a = 0; a < m.party_count; ++a) {
      const auto& f = el.factors[a];
      if (f.mode() != mode) {
        throw ValidationError("element " + std::to_string(j) + " mixes scalar modes");
      }
      if (f.dim() != m.dims[a]) {
        throw ValidationError("element " + std::to_string(j) + " factor " + std::to_string(a) +
                              " has dimension " + std::to_string(f.dim()) + ", expected " +
                              std::to_string(m.dims[a]));
      }
      if (f.is_zero()) {
        throw ValidationError("element " + std::to_string(j) + " factor " + std::to_string(a) +
                              " is zero");
      }
      if (!is_positive_semidefinite(f, tol)) {
        throw ValidationError("element " + std::to_string(j) + " factor " + std::to_string(a) +
                              " is not positive semidefinite");
      }
    }
  }
}

namespace {

// Equality of full product operators without forming the Kronecker product:
// (x)A_a == (x)B_a iff A_a = q_a B_a for every party with prod_a q_a == 1.
bool product_elements_equal(const ProductPovmElement& a, const ProductPovmElement& b,
                            const Tolerances& tol) {
  if (a.factors.size() != b.factors.size()) return false;
  if (a.factors.empty()) return true;
  if (a.factors[0].is_exact()) {
    Rational prod = 1;
    for (std::size_t k = 0; k < a.factors.size(); ++k) {
      auto q = proportionality_factor(a.factors[k], b.factors[k], tol);
      if (!q) return false;
      prod *= q->exact_value().re;
    }
    return prod == 1;
  }
  double prod = 1;
  for (std::size_t k = 0; k < a.factors.size(); ++k) {
    auto q = proportionality_factor(a.factors[k], b.factors[k], tol);
    if (!q) return false;
    prod *= q->float_value().real();
  }
  return std::abs(prod - 1.0) <= tol.proportionality * static_cast<double>(a.factors.size());
}

}  // namespace

std::vector<std::pair<int, int>> find_duplicate_elements(const SeparableMeasurement& m,
                                                         const Tolerances& tol) {
  std::vector<std::pair<int, int>> dups;
  for (std::size_t i = 0; i < m.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < m.elements.size(); ++j) {
      if (product_elements_equal(m.elements[i], m.elements[j], tol)) {
        dups.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return dups;
}

int merge_duplicate_elements(SeparableMeasurement& m, const Tolerances& tol) {
  std::vector<ProductPovmElement> kept;
  int dropped = 0;
  for (auto& el : m.elements) {
    bool dup = false;
    for (const auto& k : kept) {
      if (product_elements_equal(el, k, tol)) {
        dup = true;
        break;
      }
    }
    if (dup) {
      ++dropped;
    } else {
      kept.push_back(std::move(el));
    }
  }
  m.elements = std::move(kept);
  return dropped;
}

CompletenessResult completeness_defect(const SeparableMeasurement& m, const Tolerances& tol) {
  validate_measurement(m, tol);
  const ScalarMode mode = m.mode();
  long total = 1;
  for (int d : m.dims) total *= d;
  std::optional<HermitianOperator> sum;
  for (const auto& el : m.elements) {
    HermitianOperator t = tensor_product(el.factors);
    sum = sum ? operator_add(*sum, t) : t;
  }
  HermitianOperator acc =
      operator_sub(*sum, HermitianOperator::identity(static_cast<int>(total), mode));
  bool complete;
  if (mode == ScalarMode::Exact) {
    complete = acc.is_zero();
  } else {
    double mx = 0;
    for (const auto& c : acc.float_entries()) mx = std::max(mx, std::abs(c));
    complete = mx <= tol.completeness;
  }
  return CompletenessResult{std::move(acc), complete};
}

}  // namespace loccert
