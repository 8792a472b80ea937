#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loccert/cone.hpp"
#include "loccert/measurement.hpp"

namespace loccert {

/// delta = max(1/N, 2^-P), exact.
Rational locc_delta(std::int64_t n_elements, int party_count);

/// 2(N - 1).
std::int64_t theorem1_bound(std::int64_t n_elements);

/// 2N - ceil(2N * delta), integer arithmetic throughout.
std::int64_t theorem2_bound(std::int64_t n_elements, int party_count);

enum class Conclusion {
  /// The necessary condition is violated: no finite-round LOCC protocol
  /// implements this measurement.
  NotFiniteRoundLocc,
  /// The necessary condition is satisfied; nothing follows either way.
  Inconclusive,
};

/// Verdict record for one separable measurement. Party indices are 0-based.
struct BoundCertificate {
  std::int64_t n_elements = 0;
  int party_count = 0;
  ScalarMode mode = ScalarMode::Exact;
  /// Parties with at least one local factor not proportional to the
  /// identity; only these enter the sum.
  std::vector<int> participating_parties;
  std::map<int, std::int64_t> e_per_party;  // participating parties only
  std::int64_t sum_e = 0;
  Rational delta;
  std::int64_t theorem1 = 0;
  std::int64_t theorem2 = 0;
  bool violated_t1 = false;
  bool violated_t2 = false;
  bool tight_t2 = false;  // sum_e equals the theorem-2 bound exactly
  bool completeness_warning = false;
  bool single_element_warning = false;  // N < 2: bounds not applicable
  int merged_duplicates = 0;
  Conclusion conclusion = Conclusion::Inconclusive;
  std::map<int, ExtremeRayReport> party_reports;
};

struct CertifyOptions {
  Tolerances tol;
  /// Merge equal product elements instead of rejecting them.
  bool dedupe_elements = false;
  bool use_rank1_fast_path = true;
  /// Keep the per-party ray reports in the certificate (they hold matrices,
  /// so large sweeps may want them dropped).
  bool keep_party_reports = true;
};

/// Evaluates the finite-round-LOCC necessary conditions on a separable
/// measurement: per participating party, dedupe the local factors to rays,
/// count extreme rays, and compare the total against both bounds. A
/// violation of either bound concludes NotFiniteRoundLocc; satisfaction is
/// always Inconclusive (the conditions are necessary, not sufficient).
///
/// Duplicate product elements are an error unless options.dedupe_elements
/// is set. N = 1 never produces a verdict (single_element_warning is set and
/// the violation flags are forced false: the bounds presuppose N >= 2).
BoundCertificate certify(const SeparableMeasurement& m, const CertifyOptions& options = {});

/// Extreme-ray density profile of an ordered element list.
struct DensityReport {
  std::string ordering_id;
  int party_count = 0;
  std::vector<std::int64_t> prefixes;
  /// Per prefix: e for each participating party (0-based), under the
  /// participation rule applied to that prefix alone.
  std::vector<std::map<int, std::int64_t>> e_per_party;
  std::vector<Rational> ratios;  // (sum_a e_a) / N_k, exact
  Rational asymptote;            // 2(1 - 2^-P)
};

/// Evaluates (1/N) sum_a e_aN over the first N_k elements for each requested
/// prefix size. Prefix sizes must be strictly increasing and within range.
DensityReport density_profile(std::span<const ProductPovmElement> elements, int party_count,
                              std::span<const std::int64_t> prefixes,
                              const ExtremeRayOptions& options = {},
                              std::string ordering_id = "input-order");

}  // namespace loccert
