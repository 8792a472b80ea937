#include "loccert/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace loccert {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

ScalarMode parse_mode(const Json& doc, const std::string& where) {
  if (!doc.contains("mode")) return ScalarMode::Exact;
  const std::string m = doc.at("mode").get<std::string>();
  if (m == "exact") return ScalarMode::Exact;
  if (m == "float") return ScalarMode::Float;
  fail(where + ".mode", "expected \"exact\" or \"float\", got \"" + m + "\"");
}

ExactComplex parse_exact_entry(const Json& e, const std::string& where) {
  if (!e.is_object() || !e.contains("re") || !e.contains("im")) {
    fail(where, "exact entries are objects {\"re\": \"p/q\", \"im\": \"p/q\"}");
  }
  if (!e.at("re").is_string() || !e.at("im").is_string()) {
    fail(where, "exact entries must be rational strings, not numbers");
  }
  try {
    return {parse_rational(e.at("re").get<std::string>()),
            parse_rational(e.at("im").get<std::string>())};
  } catch (const ParseError& err) {
    fail(where, err.what());
  }
}

FloatComplex parse_float_entry(const Json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    fail(where, "float entries are two-number arrays [re, im]");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

HermitianOperator parse_matrix(const Json& mx, ScalarMode mode, const std::string& where,
                               const Tolerances& tol) {
  if (!mx.is_array() || mx.empty()) fail(where, "a matrix is a nonempty array of rows");
  const int d = static_cast<int>(mx.size());
  std::vector<ExactComplex> xs;
  std::vector<FloatComplex> fs;
  for (int i = 0; i < d; ++i) {
    const Json& row = mx[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      fail(where + "[" + std::to_string(i) + "]", "matrix rows must all have length " +
                                                      std::to_string(d));
    }
    for (int j = 0; j < d; ++j) {
      const std::string cell = where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (mode == ScalarMode::Exact) {
        xs.push_back(parse_exact_entry(row[static_cast<std::size_t>(j)], cell));
      } else {
        fs.push_back(parse_float_entry(row[static_cast<std::size_t>(j)], cell));
      }
    }
  }
  try {
    return mode == ScalarMode::Exact
               ? HermitianOperator::exact_from_entries(d, std::move(xs))
               : HermitianOperator::float_from_entries(d, std::move(fs), tol.hermitian);
  } catch (const ValidationError& err) {
    fail(where, err.what());
  }
}

Json matrix_to_json(const HermitianOperator& op) {
  Json rows = Json::array();
  for (int i = 0; i < op.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < op.dim(); ++j) {
      if (op.is_exact()) {
        const auto& e = op.exact_at(i, j);
        row.push_back(Json{{"re", rational_to_string(e.re)}, {"im", rational_to_string(e.im)}});
      } else {
        const auto e = op.float_at(i, j);
        row.push_back(Json::array({e.real(), e.imag()}));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void parse_header(const Json& doc, int& parties, std::vector<int>& dims, ScalarMode& mode) {
  if (!doc.contains("parties") || !doc.at("parties").is_number_integer()) {
    fail("parties", "missing integer party count");
  }
  parties = doc.at("parties").get<int>();
  if (!doc.contains("dims") || !doc.at("dims").is_array()) fail("dims", "missing dims array");
  dims.clear();
  for (const auto& d : doc.at("dims")) {
    if (!d.is_number_integer() || d.get<int>() < 1) fail("dims", "dimensions are integers >= 1");
    dims.push_back(d.get<int>());
  }
  if (static_cast<int>(dims.size()) != parties) {
    fail("dims", "expected " + std::to_string(parties) + " entries");
  }
  mode = parse_mode(doc, "");
}

}  // namespace

SeparableMeasurement parse_measurement(const std::string& json_text, const Tolerances& tol) {
  const Json doc = parse_document(json_text);
  SeparableMeasurement m;
  ScalarMode mode;
  parse_header(doc, m.party_count, m.dims, mode);
  if (!doc.contains("elements") || !doc.at("elements").is_array() || doc.at("elements").empty()) {
    fail("elements", "missing nonempty elements array");
  }
  int idx = 0;
  for (const auto& el : doc.at("elements")) {
    const std::string where = "elements[" + std::to_string(idx) + "]";
    if (!el.is_object() || !el.contains("factors") || !el.at("factors").is_array()) {
      fail(where, "an element is an object with a factors array");
    }
    ProductPovmElement out;
    if (el.contains("id")) out.id = el.at("id").get<std::string>();
    int f = 0;
    for (const auto& mx : el.at("factors")) {
      out.factors.push_back(
          parse_matrix(mx, mode, where + ".factors[" + std::to_string(f) + "]", tol));
      ++f;
    }
    m.elements.push_back(std::move(out));
    ++idx;
  }
  validate_measurement(m, tol);
  return m;
}

SeparableMeasurement parse_measurement_file(const std::string& path, const Tolerances& tol) {
  return parse_measurement(read_file(path), tol);
}

std::string serialize_measurement(const SeparableMeasurement& m) {
  Json doc;
  doc["parties"] = m.party_count;
  doc["dims"] = m.dims;
  doc["mode"] = to_string(m.mode());
  Json elements = Json::array();
  for (const auto& el : m.elements) {
    Json e;
    if (!el.id.empty()) e["id"] = el.id;
    Json factors = Json::array();
    for (const auto& f : el.factors) factors.push_back(matrix_to_json(f));
    e["factors"] = std::move(factors);
    elements.push_back(std::move(e));
  }
  doc["elements"] = std::move(elements);
  return doc.dump(2) + "\n";
}

namespace {

TreeNode parse_tree_node(const Json& n, ScalarMode mode, const std::vector<int>& dims,
                         bool is_root, const std::string& where, const Tolerances& tol) {
  if (!n.is_object()) fail(where, "tree nodes are objects");
  TreeNode out;
  if (is_root) {
    if (n.contains("party") || n.contains("label")) {
      fail(where, "the root carries no party or label");
    }
  } else {
    if (!n.contains("party") || !n.at("party").is_number_integer()) {
      fail(where, "missing integer party");
    }
    const int party = n.at("party").get<int>();  // 1-based in documents
    if (party < 1 || party > static_cast<int>(dims.size())) {
      fail(where + ".party", "party out of range 1..P");
    }
    out.party = party - 1;
    if (!n.contains("label")) fail(where, "missing label matrix");
    out.label = parse_matrix(n.at("label"), mode, where + ".label", tol);
    if (out.label->dim() != dims[static_cast<std::size_t>(party - 1)]) {
      fail(where + ".label", "label dimension does not match the party's dimension");
    }
  }
  if (n.contains("element_index")) {
    if (!n.at("element_index").is_number_integer()) {
      fail(where + ".element_index", "element_index is an integer");
    }
    out.leaf_element = n.at("element_index").get<int>();
  }
  if (n.contains("children")) {
    if (!n.at("children").is_array()) fail(where + ".children", "children is an array");
    int i = 0;
    for (const auto& ch : n.at("children")) {
      out.children.push_back(parse_tree_node(
          ch, mode, dims, false, where + ".children[" + std::to_string(i) + "]", tol));
      ++i;
    }
  }
  return out;
}

Json tree_node_to_json(const TreeNode& n, bool is_root) {
  Json out = Json::object();
  if (!is_root) {
    if (n.party) out["party"] = *n.party + 1;  // 1-based in documents
    if (n.label) out["label"] = matrix_to_json(*n.label);
  }
  if (n.leaf_element) out["element_index"] = *n.leaf_element;
  if (!n.children.empty()) {
    Json children = Json::array();
    for (const auto& ch : n.children) children.push_back(tree_node_to_json(ch, false));
    out["children"] = std::move(children);
  }
  return out;
}

}  // namespace

LoccTree parse_tree(const std::string& json_text, const Tolerances& tol) {
  const Json doc = parse_document(json_text);
  LoccTree t;
  ScalarMode mode;
  parse_header(doc, t.party_count, t.dims, mode);
  if (!doc.contains("root")) fail("root", "missing root node");
  t.root = parse_tree_node(doc.at("root"), mode, t.dims, true, "root", tol);
  return t;
}

LoccTree parse_tree_file(const std::string& path, const Tolerances& tol) {
  return parse_tree(read_file(path), tol);
}

std::string serialize_tree(const LoccTree& t) {
  Json doc;
  doc["parties"] = t.party_count;
  doc["dims"] = t.dims;
  ScalarMode mode = ScalarMode::Exact;
  // Mode of the first labeled node; an unlabeled tree defaults to exact.
  auto find_mode = [&](auto&& self, const TreeNode& n) -> const HermitianOperator* {
    if (n.label) return &*n.label;
    for (const auto& ch : n.children) {
      if (const auto* hit = self(self, ch)) return hit;
    }
    return nullptr;
  };
  if (const auto* labeled = find_mode(find_mode, t.root)) mode = labeled->mode();
  doc["mode"] = to_string(mode);
  doc["root"] = tree_node_to_json(t.root, true);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

const char* conclusion_text(Conclusion c) {
  return c == Conclusion::NotFiniteRoundLocc
             ? "not implementable by finite-round LOCC (necessary condition violated)"
             : "inconclusive (necessary condition satisfied)";
}

Json party_report_json(const ExtremeRayReport& r, bool include_witnesses) {
  Json out;
  out["party"] = r.party + 1;
  out["representatives"] = r.representatives.size();
  out["extreme"] = r.extreme_count;
  Json flags = Json::array();
  for (bool f : r.extreme) flags.push_back(f);
  out["extreme_flags"] = std::move(flags);
  Json ray_index = Json::array();
  for (int i : r.ray_index) ray_index.push_back(i);
  out["ray_index"] = std::move(ray_index);
  out["rank1_fast_path"] = r.used_rank1_fast_path;
  if (include_witnesses && !r.witnesses.empty()) {
    Json ws = Json::object();
    for (const auto& [rep, w] : r.witnesses) {
      Json coeffs = Json::array();
      for (const auto& q : w.lambda) coeffs.push_back(rational_to_string(q));
      ws[std::to_string(rep)] = std::move(coeffs);
    }
    out["non_extreme_witnesses"] = std::move(ws);
  }
  return out;
}

}  // namespace

std::string certificate_to_json(const BoundCertificate& c, int detail_party) {
  Json doc;
  doc["n_elements"] = c.n_elements;
  doc["parties"] = c.party_count;
  doc["mode"] = to_string(c.mode);
  Json parts = Json::array();
  for (int p : c.participating_parties) parts.push_back(p + 1);
  doc["participating_parties"] = std::move(parts);
  Json e = Json::object();
  for (const auto& [p, v] : c.e_per_party) e[std::to_string(p + 1)] = v;
  doc["e_per_party"] = std::move(e);
  doc["sum_e"] = c.sum_e;
  doc["delta"] = rational_to_string(c.delta);
  doc["theorem1_bound"] = c.theorem1;
  doc["theorem2_bound"] = c.theorem2;
  doc["violated_t1"] = c.violated_t1;
  doc["violated_t2"] = c.violated_t2;
  doc["tight_t2"] = c.tight_t2;
  doc["completeness_warning"] = c.completeness_warning;
  doc["single_element_warning"] = c.single_element_warning;
  if (c.merged_duplicates > 0) doc["merged_duplicates"] = c.merged_duplicates;
  doc["conclusion"] = c.conclusion == Conclusion::NotFiniteRoundLocc ? "not_finite_round_locc"
                                                                     : "inconclusive";
  doc["conclusion_text"] = conclusion_text(c.conclusion);
  if (!c.party_reports.empty()) {
    Json reports = Json::array();
    for (const auto& [p, r] : c.party_reports) {
      if (detail_party >= 0 && p != detail_party) continue;
      reports.push_back(party_report_json(r, true));
    }
    doc["party_reports"] = std::move(reports);
  }
  return doc.dump(2) + "\n";
}

std::string certificate_to_text(const BoundCertificate& c, int detail_party) {
  std::ostringstream os;
  os << "separable measurement: N=" << c.n_elements << " elements, P=" << c.party_count
     << " parties, mode=" << to_string(c.mode) << "\n";
  if (c.merged_duplicates > 0) {
    os << "note: merged " << c.merged_duplicates << " duplicate element(s)\n";
  }
  if (c.completeness_warning) {
    os << "warning: elements do not sum to the identity (sub-measurement); the verdict below\n"
       << "         applies to the element list as given\n";
  }
  if (c.single_element_warning) {
    os << "warning: N < 2, the bounds presuppose at least two elements; no verdict\n";
  }
  os << "participating parties:";
  if (c.participating_parties.empty()) {
    os << " none";
  } else {
    for (int p : c.participating_parties) os << " " << (p + 1);
  }
  os << "\n";
  for (const auto& [p, e] : c.e_per_party) {
    os << "  e[" << (p + 1) << "] = " << e;
    const auto it = c.party_reports.find(p);
    if (it != c.party_reports.end()) {
      os << "   (" << it->second.representatives.size() << " distinct rays";
      if (it->second.used_rank1_fast_path) os << ", all rank one";
      os << ")";
    }
    os << "\n";
  }
  os << "sum of extreme rays: " << c.sum_e << "\n";
  os << "delta = " << rational_to_string(c.delta) << "\n";
  os << "bound 2(N-1)            = " << c.theorem1 << "   violated: "
     << (c.violated_t1 ? "YES" : "no") << "\n";
  os << "bound 2N - ceil(2N d)   = " << c.theorem2 << "   violated: "
     << (c.violated_t2 ? "YES" : "no") << (c.tight_t2 ? "   (met with equality)" : "") << "\n";
  os << "conclusion: " << conclusion_text(c.conclusion) << "\n";
  if (detail_party >= 0) {
    const auto it = c.party_reports.find(detail_party);
    if (it != c.party_reports.end()) {
      os << "party " << (detail_party + 1) << " ray classification:";
      for (std::size_t r = 0; r < it->second.extreme.size(); ++r) {
        os << " " << (it->second.extreme[r] ? "E" : "-");
      }
      os << "\n";
    }
  }
  return os.str();
}

std::string density_to_json(const DensityReport& r) {
  Json doc;
  doc["ordering"] = r.ordering_id;
  doc["parties"] = r.party_count;
  doc["asymptote"] = rational_to_string(r.asymptote);
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.prefixes.size(); ++k) {
    Json row;
    row["prefix"] = r.prefixes[k];
    Json e = Json::object();
    for (const auto& [p, v] : r.e_per_party[k]) e[std::to_string(p + 1)] = v;
    row["e_per_party"] = std::move(e);
    row["ratio"] = rational_to_string(r.ratios[k]);
    rows.push_back(std::move(row));
  }
  doc["prefixes"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string density_to_text(const DensityReport& r) {
  std::ostringstream os;
  os << "extreme-ray density profile (" << r.ordering_id << "), P=" << r.party_count << "\n";
  os << "asymptote 2(1 - 2^-P) = " << rational_to_string(r.asymptote) << "\n";
  for (std::size_t k = 0; k < r.prefixes.size(); ++k) {
    os << "  N=" << r.prefixes[k] << ":  e =";
    std::int64_t sum = 0;
    for (const auto& [p, v] : r.e_per_party[k]) {
      os << " " << v << "(party " << (p + 1) << ")";
      sum += v;
    }
    os << "  sum " << sum << "  ratio " << rational_to_string(r.ratios[k]) << "\n";
  }
  return os.str();
}

std::string audit_to_json(const TreeAuditReport& r) {
  Json doc;
  Json canonical;
  canonical["is_canonical"] = r.canonical.is_canonical;
  canonical["leaf_count"] = r.canonical.leaf_count;
  canonical["node_count"] = r.canonical.node_count;
  if (!r.canonical.violations.empty()) {
    Json v = Json::array();
    for (const auto& viol : r.canonical.violations) {
      v.push_back(Json{{"path", viol.path}, {"what", viol.what}});
    }
    canonical["violations"] = std::move(v);
  }
  doc["canonical"] = std::move(canonical);
  if (!r.aborted_at.empty()) {
    doc["aborted_at"] = r.aborted_at;
    doc["passed"] = false;
    return doc.dump(2) + "\n";
  }
  doc["n_elements"] = r.n_elements;
  doc["pruned_leaf_count"] = r.pruned_leaf_count;
  doc["prune_changed"] = r.prune_changed;
  Json e = Json::object();
  for (const auto& [p, v] : r.e_per_party) e[std::to_string(p + 1)] = v;
  doc["e_per_party"] = std::move(e);
  doc["sum_e"] = r.sum_e;
  doc["rearrange_swaps"] = r.rearrange_swaps;
  Json dec;
  dec["subtree_count"] = r.decomposition.subtree_count;
  dec["extreme_node_count"] = r.decomposition.extreme_node_count;
  dec["eq21_total"] = r.decomposition.eq21_total;
  Json subtrees = Json::array();
  for (const auto& s : r.decomposition.subtrees) {
    subtrees.push_back(Json{{"root", s.root_path},
                            {"leaves", s.leaf_count},
                            {"nodes", s.node_count},
                            {"height", s.height}});
  }
  dec["subtrees"] = std::move(subtrees);
  dec["full_binary_ok"] = r.decomposition.full_binary_ok;
  dec["branch_rule_ok"] = r.decomposition.branch_rule_ok;
  dec["height_ok"] = r.decomposition.height_ok;
  dec["leaf_bound_ok"] = r.decomposition.leaf_bound_ok;
  doc["decomposition"] = std::move(dec);
  Json lemma;
  lemma["nodes"] = r.lemma1.node_count;
  lemma["leaves"] = r.lemma1.leaf_count;
  lemma["height"] = r.lemma1.height;
  lemma["ratio"] = rational_to_string(r.lemma1.ratio);
  lemma["bound"] = rational_to_string(r.lemma1.bound);
  lemma["holds"] = r.lemma1.holds;
  doc["node_leaf_ratio"] = std::move(lemma);
  doc["chain"] = Json{{"sum_e_le_extreme_nodes", r.link1_ok},
                      {"extreme_nodes_le_2N_minus_S", r.link2_ok},
                      {"S_ge_min_subtrees", r.link3_ok},
                      {"min_subtrees", r.min_subtrees},
                      {"bound", r.eq24_bound},
                      {"tight", r.eq24_tight}};
  doc["same_party_descendant_rule"] = r.lemma5_ok;
  doc["passed"] = r.passed;
  return doc.dump(2) + "\n";
}

std::string audit_to_text(const TreeAuditReport& r) {
  std::ostringstream os;
  auto line = [&](const char* name, bool ok) {
    os << "  [" << (ok ? "pass" : "FAIL") << "] " << name << "\n";
  };
  os << "tree audit: " << r.canonical.node_count << " nodes, " << r.canonical.leaf_count
     << " leaves\n";
  line("canonical form", r.canonical.is_canonical);
  for (const auto& v : r.canonical.violations) {
    os << "         " << v.path << ": " << v.what << "\n";
  }
  if (!r.aborted_at.empty()) {
    os << "audit aborted at " << r.aborted_at << "\n";
    return os.str();
  }
  os << "  pruned to " << r.pruned_leaf_count << " leaves ("
     << (r.prune_changed ? "duplicates removed" : "already one leaf per element") << ")\n";
  os << "  e per party:";
  for (const auto& [p, v] : r.e_per_party) os << "  e[" << (p + 1) << "]=" << v;
  os << "  sum " << r.sum_e << "\n";
  os << "  rearranged with " << r.rearrange_swaps << " payload swap(s)\n";
  os << "  maximal extreme subtrees: S=" << r.decomposition.subtree_count << ", extreme nodes "
     << r.decomposition.extreme_node_count << ", 2*sum(l)-S=" << r.decomposition.eq21_total
     << "\n";
  for (const auto& s : r.decomposition.subtrees) {
    os << "    at " << s.root_path << ": l=" << s.leaf_count << " n=" << s.node_count
       << " h=" << s.height << "\n";
  }
  line("subtrees full binary (n = 2l-1)", r.decomposition.full_binary_ok);
  line("one node per party per branch", r.decomposition.branch_rule_ok);
  line("subtree height <= P-1", r.decomposition.height_ok);
  line("subtree leaves <= 2^(P-1)", r.decomposition.leaf_bound_ok);
  os << "  node/leaf ratio " << rational_to_string(r.lemma1.ratio) << " vs bound "
     << rational_to_string(r.lemma1.bound) << "\n";
  line("node/leaf ratio bound", r.lemma1.holds);
  line("sum_e <= extreme node count", r.link1_ok);
  line("extreme node count <= 2N - S", r.link2_ok);
  line("S >= ceil(N / 2^(P-1))", r.link3_ok);
  os << "  counting bound 2N - ceil(N/2^(P-1)) = " << r.eq24_bound
     << (r.eq24_tight ? " (met with equality)" : "") << "\n";
  line("extreme nodes have no same-party descendants", r.lemma5_ok);
  os << (r.passed ? "AUDIT PASSED" : "AUDIT FAILED") << "\n";
  return os.str();
}

}  // namespace loccert
