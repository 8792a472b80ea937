#pragma once

#include <string>

#include "loccert/bounds.hpp"
#include "loccert/measurement.hpp"
#include "loccert/tree.hpp"

namespace loccert {

/// Measurement documents
/// ---------------------
/// {
///   "parties": 2,
///   "dims": [3, 3],
///   "mode": "exact",                    // or "float"
///   "elements": [
///     {"id": "Psi1", "factors": [ <matrix>, <matrix> ]},
///     ...
///   ]
/// }
/// A matrix is an array of rows. Exact entries are {"re": "p/q", "im": "p/q"}
/// strings (decimal-free); float entries are two-number arrays [re, im].
/// Party indices in all documents are 1-based; element indices are 0-based
/// positions in the "elements" array.
///
/// Tree documents
/// --------------
/// {
///   "parties": 2, "dims": [...], "mode": "exact",
///   "root": {"children": [ {"party": 1, "label": <matrix>,
///                            "children": [...], "element_index": 0}, ...]}
/// }
/// The root carries no party/label; leaves may carry "element_index".

SeparableMeasurement parse_measurement(const std::string& json_text,
                                       const Tolerances& tol = {});
SeparableMeasurement parse_measurement_file(const std::string& path,
                                            const Tolerances& tol = {});
std::string serialize_measurement(const SeparableMeasurement& m);

LoccTree parse_tree(const std::string& json_text, const Tolerances& tol = {});
LoccTree parse_tree_file(const std::string& path, const Tolerances& tol = {});
std::string serialize_tree(const LoccTree& t);

std::string certificate_to_json(const BoundCertificate& c, int detail_party = -1);
std::string certificate_to_text(const BoundCertificate& c, int detail_party = -1);

std::string density_to_json(const DensityReport& r);
std::string density_to_text(const DensityReport& r);

std::string audit_to_json(const TreeAuditReport& r);
std::string audit_to_text(const TreeAuditReport& r);

}  // namespace loccert
