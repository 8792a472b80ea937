#include "loccert/bounds.hpp"

#include <algorithm>
#include <sstream>

namespace loccert {

Rational locc_delta(std::int64_t n_elements, int party_count) {
  if (n_elements < 1) throw ValidationError("delta needs N >= 1");
  if (party_count < 1) throw ValidationError("delta needs P >= 1");
  const Rational inv_n(1, n_elements);
  BigInt pow2 = 1;
  pow2 <<= party_count;
  const Rational inv_2p(BigInt(1), pow2);
  return std::max(inv_n, inv_2p);
}

std::int64_t theorem1_bound(std::int64_t n_elements) {
  if (n_elements < 1) throw ValidationError("bound needs N >= 1");
  return 2 * (n_elements - 1);
}

std::int64_t theorem2_bound(std::int64_t n_elements, int party_count) {
  const Rational two_n_delta = 2 * n_elements * locc_delta(n_elements, party_count);
  const BigInt ceil = ceil_rational(two_n_delta);
  const BigInt bound = 2 * BigInt(n_elements) - ceil;
  return bound.convert_to<std::int64_t>();
}

BoundCertificate certify(const SeparableMeasurement& input, const CertifyOptions& options) {
  SeparableMeasurement m = input;
  validate_measurement(m, options.tol);

  BoundCertificate cert;
  if (options.dedupe_elements) {
    cert.merged_duplicates = merge_duplicate_elements(m, options.tol);
  } else {
    const auto dups = find_duplicate_elements(m, options.tol);
    if (!dups.empty()) {
      std::ostringstream msg;
      msg << "duplicate product elements:";
      for (const auto& [i, j] : dups) msg << " (" << i << "," << j << ")";
      msg << "; pass dedupe to merge them";
      throw ValidationError(msg.str());
    }
  }

  cert.n_elements = static_cast<std::int64_t>(m.elements.size());
  cert.party_count = m.party_count;
  cert.mode = m.mode();
  cert.completeness_warning = !completeness_defect(m, options.tol).is_complete;
  cert.single_element_warning = cert.n_elements < 2;

  ExtremeRayOptions ray_opts{options.tol, options.use_rank1_fast_path};
  for (int a = 0; a < m.party_count; ++a) {
    const std::vector<HermitianOperator> factors = m.party_factors(a);
    const bool participates =
        std::any_of(factors.begin(), factors.end(), [&](const HermitianOperator& f) {
          return !is_proportional_to_identity(f, options.tol);
        });
    if (!participates) continue;
    ExtremeRayReport report = extreme_ray_set(factors, ray_opts);
    report.party = a;
    cert.participating_parties.push_back(a);
    cert.e_per_party[a] = report.extreme_count;
    cert.sum_e += report.extreme_count;
    if (options.keep_party_reports) cert.party_reports.emplace(a, std::move(report));
  }

  cert.delta = locc_delta(std::max<std::int64_t>(cert.n_elements, 1), cert.party_count);
  cert.theorem1 = theorem1_bound(std::max<std::int64_t>(cert.n_elements, 1));
  cert.theorem2 = theorem2_bound(std::max<std::int64_t>(cert.n_elements, 1), cert.party_count);
  if (!cert.single_element_warning) {
    cert.violated_t1 = cert.sum_e > cert.theorem1;
    cert.violated_t2 = cert.sum_e > cert.theorem2;
  }
  cert.tight_t2 = cert.sum_e == cert.theorem2;
  cert.conclusion = (cert.violated_t1 || cert.violated_t2) ? Conclusion::NotFiniteRoundLocc
                                                           : Conclusion::Inconclusive;
  return cert;
}

DensityReport density_profile(std::span<const ProductPovmElement> elements, int party_count,
                              std::span<const std::int64_t> prefixes,
                              const ExtremeRayOptions& options, std::string ordering_id) {
  if (party_count < 1) throw ValidationError("density profile needs P >= 1");
  if (elements.empty()) throw ValidationError("density profile of an empty element list");
  std::int64_t prev = 0;
  for (const auto p : prefixes) {
    if (p <= prev) throw ValidationError("prefix sizes must be strictly increasing");
    if (p > static_cast<std::int64_t>(elements.size())) {
      throw ValidationError("prefix size " + std::to_string(p) + " exceeds element count");
    }
    prev = p;
  }

  DensityReport report;
  report.ordering_id = std::move(ordering_id);
  report.party_count = party_count;
  BigInt pow2 = 1;
  pow2 <<= party_count;
  report.asymptote = 2 * (1 - Rational(BigInt(1), pow2));

  for (const auto n_k : prefixes) {
    report.prefixes.push_back(n_k);
    std::map<int, std::int64_t> e_map;
    std::int64_t sum_e = 0;
    for (int a = 0; a < party_count; ++a) {
      std::vector<HermitianOperator> factors;
      factors.reserve(static_cast<std::size_t>(n_k));
      for (std::int64_t j = 0; j < n_k; ++j) {
        factors.push_back(elements[static_cast<std::size_t>(j)].factors.at(a));
      }
      const bool participates =
          std::any_of(factors.begin(), factors.end(), [&](const HermitianOperator& f) {
            return !is_proportional_to_identity(f, options.tol);
          });
      if (!participates) continue;
      ExtremeRayReport ray = extreme_ray_set(factors, options);
      e_map[a] = ray.extreme_count;
      sum_e += ray.extreme_count;
    }
    report.e_per_party.push_back(std::move(e_map));
    report.ratios.emplace_back(Rational(sum_e, n_k));
  }
  return report;
}

}  // namespace loccert
