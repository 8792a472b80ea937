#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loccert/operator.hpp"

namespace loccert {

/// One product POVM element: an ordered list of local factors, one per party.
struct ProductPovmElement {
  std::vector<HermitianOperator> factors;
  std::string id;  // optional, carried through files and reports
};

/// A separable measurement: P parties with local dimensions dims[i] and N
/// product POVM elements. Completeness (sum of elements = identity) is
/// recorded, never assumed.
struct SeparableMeasurement {
  int party_count = 0;
  std::vector<int> dims;
  std::vector<ProductPovmElement> elements;

  ScalarMode mode() const;
  std::size_t size() const { return elements.size(); }

  /// All factors of one party, in element order.
  std::vector<HermitianOperator> party_factors(int party) const;
};

/// Structural validation: party count and dims consistent, factors nonzero
/// PSD of the right dimension, uniform scalar mode. Throws ValidationError.
void validate_measurement(const SeparableMeasurement& m, const Tolerances& tol = {});

/// Index pairs (i < j) of elements that are equal as full product operators.
/// Product operators are compared factor-wise: equal iff each factor pair is
/// proportional and the proportionality factors multiply to one.
std::vector<std::pair<int, int>> find_duplicate_elements(const SeparableMeasurement& m,
                                                         const Tolerances& tol = {});

/// Removes all but the first occurrence of each duplicated element.
/// Returns the number of elements dropped.
int merge_duplicate_elements(SeparableMeasurement& m, const Tolerances& tol = {});

struct CompletenessResult {
  HermitianOperator defect;  // sum of elements minus identity
  bool is_complete;
};

/// defect = sum_j (x) factors_j  -  identity. Complete iff the defect is
/// zero (exact) or entry-wise within tol.completeness (float).
CompletenessResult completeness_defect(const SeparableMeasurement& m,
                                       const Tolerances& tol = {});

}  // namespace loccert
