#include "loccert/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "loccert/generators.hpp"
#include "loccert/io.hpp"

namespace loccert {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolated = 10;

struct ToleranceFlags {
  std::optional<double> all;
  std::optional<double> herm, prop, psd, comp;

  Tolerances resolve() const {
    Tolerances t = all ? Tolerances::uniform(*all) : Tolerances{};
    if (herm) t.hermitian = *herm;
    if (prop) t.proportionality = *prop;
    if (psd) t.psd = *psd;
    if (comp) t.completeness = *comp;
    return t;
  }
};

void add_tolerance_flags(CLI::App* cmd, ToleranceFlags& tf) {
  cmd->add_option("--tol", tf.all, "set every tolerance at once (default 1e-9)");
  cmd->add_option("--tol-herm", tf.herm, "Hermiticity tolerance");
  cmd->add_option("--tol-prop", tf.prop, "ray-proportionality tolerance");
  cmd->add_option("--tol-psd", tf.psd, "positive-semidefiniteness tolerance");
  cmd->add_option("--tol-comp", tf.comp, "completeness tolerance");
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + out_path + "'");
  f << text;
}

/// Files may omit "mode"; --backend or LOCCERT_BACKEND then select it. A
/// declared float file cannot be promoted to exact; exact files asked to run
/// as float are converted entry-wise.
SeparableMeasurement load_measurement(const std::string& path, const std::string& backend_flag,
                                      const Tolerances& tol) {
  SeparableMeasurement m = parse_measurement_file(path, tol);
  std::string want = backend_flag;
  if (want.empty()) {
    if (const char* env = std::getenv("LOCCERT_BACKEND")) want = env;
  }
  if (want.empty() || want == to_string(m.mode())) return m;
  if (want == "float" && m.mode() == ScalarMode::Exact) {
    for (auto& el : m.elements) {
      for (auto& f : el.factors) {
        std::vector<FloatComplex> entries;
        entries.reserve(f.exact_entries().size());
        for (const auto& c : f.exact_entries()) {
          entries.emplace_back(c.re.convert_to<double>(), c.im.convert_to<double>());
        }
        f = HermitianOperator::float_from_entries(f.dim(), std::move(entries), tol.hermitian);
      }
    }
    return m;
  }
  if (want == "exact") {
    throw BackendError("float entries cannot be promoted to the exact backend");
  }
  throw ValidationError("unknown backend '" + want + "' (expected exact or float)");
}

int cmd_check(const std::string& file, const std::string& backend, const ToleranceFlags& tf,
              bool dedupe, int party_1based, const std::string& format,
              const std::string& out_path, std::ostream& out) {
  const Tolerances tol = tf.resolve();
  SeparableMeasurement m = load_measurement(file, backend, tol);
  CertifyOptions opts;
  opts.tol = tol;
  opts.dedupe_elements = dedupe;
  const BoundCertificate cert = certify(m, opts);
  const int detail = party_1based > 0 ? party_1based - 1 : -1;
  emit(format == "json" ? certificate_to_json(cert, detail) : certificate_to_text(cert, detail),
       out_path, out);
  return cert.conclusion == Conclusion::NotFiniteRoundLocc ? kExitViolated : kExitOk;
}

int cmd_tree_audit(const std::string& tree_file, const std::string& measurement_file,
                   const ToleranceFlags& tf, const std::string& format,
                   const std::string& out_path, std::ostream& out) {
  const Tolerances tol = tf.resolve();
  const LoccTree tree = parse_tree_file(tree_file, tol);
  const SeparableMeasurement m = parse_measurement_file(measurement_file, tol);
  ExtremeRayOptions opts;
  opts.tol = tol;
  const TreeAuditReport report = audit(tree, m, opts);
  emit(format == "json" ? audit_to_json(report) : audit_to_text(report), out_path, out);
  return kExitOk;
}

int cmd_density(const std::string& file, const std::vector<std::int64_t>& prefixes,
                const ToleranceFlags& tf, const std::string& format,
                const std::string& out_path, std::ostream& out) {
  const Tolerances tol = tf.resolve();
  const SeparableMeasurement m = parse_measurement_file(file, tol);
  ExtremeRayOptions opts;
  opts.tol = tol;
  const DensityReport report =
      density_profile(m.elements, m.party_count, prefixes, opts, file);
  emit(format == "json" ? density_to_json(report) : density_to_text(report), out_path, out);
  return kExitOk;
}

int cmd_generate(const std::string& kind, int parties, int n, int omit, int subtrees,
                 const std::vector<double>& angles, const std::string& out_path,
                 const std::string& tree_path, std::ostream& out, std::ostream& err) {
  SeparableMeasurement m;
  std::optional<LoccTree> tree;
  if (kind == "domino") {
    m = domino();
  } else if (kind == "rotated-domino") {
    if (angles.size() != 4) {
      throw ValidationError("rotated-domino needs --angles a,b,c,d (radians)");
    }
    m = rotated_domino({angles[0], angles[1], angles[2], angles[3]});
  } else if (kind == "tight") {
    GeneratedProtocol g = tight_protocol(parties, n);
    m = std::move(g.measurement);
    tree = std::move(g.tree);
  } else if (kind == "tight-omit") {
    GeneratedProtocol g = tight_protocol_with_omissions(parties, n, omit);
    m = std::move(g.measurement);
    tree = std::move(g.tree);
  } else if (kind == "density") {
    GeneratedProtocol g = density_family_truncation(parties, subtrees);
    m = std::move(g.measurement);
    tree = std::move(g.tree);
  } else {
    throw ValidationError("unknown generator '" + kind + "'");
  }
  emit(serialize_measurement(m), out_path, out);
  if (!tree_path.empty()) {
    if (!tree) {
      err << "note: generator '" << kind << "' emits no tree; --out-tree ignored\n";
    } else {
      emit(serialize_tree(*tree), tree_path, out);
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "loccert - separable-measurement certifier for the finite-round LOCC\n"
      "necessary conditions, with protocol-tree audits and family generators"};
  app.require_subcommand(1);

  // check
  std::string check_file, check_backend, check_format = "text", check_out;
  bool check_dedupe = false;
  int check_party = 0;
  ToleranceFlags check_tol;
  auto* check = app.add_subcommand("check", "certify a measurement file against the bounds");
  check->add_option("file", check_file, "measurement document")->required();
  check->add_option("--backend", check_backend, "exact|float (default: file's mode)")
      ->check(CLI::IsMember({"exact", "float"}));
  check->add_flag("--dedupe", check_dedupe, "merge duplicate product elements");
  check->add_option("--party", check_party, "1-based party whose ray detail to print");
  check->add_option("--format", check_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  check->add_option("--out", check_out, "write the certificate here instead of stdout");
  add_tolerance_flags(check, check_tol);

  // tree-audit
  std::string audit_tree, audit_measurement, audit_format = "text", audit_out;
  ToleranceFlags audit_tol;
  auto* tree_audit =
      app.add_subcommand("tree-audit", "run the full counting audit on a protocol tree");
  tree_audit->add_option("tree", audit_tree, "tree document")->required();
  tree_audit->add_option("measurement", audit_measurement, "measurement document")->required();
  tree_audit->add_option("--format", audit_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  tree_audit->add_option("--out", audit_out, "write the report here instead of stdout");
  add_tolerance_flags(tree_audit, audit_tol);

  // density
  std::string density_file, density_format = "text", density_out;
  std::vector<std::int64_t> density_prefixes;
  ToleranceFlags density_tol;
  auto* density = app.add_subcommand(
      "density", "extreme-ray density profile of an ordered measurement file");
  density->add_option("file", density_file, "measurement document (element order matters)")
      ->required();
  density->add_option("--prefixes", density_prefixes, "prefix sizes, e.g. --prefixes 2,4,6")
      ->required()
      ->delimiter(',');
  density->add_option("--format", density_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  density->add_option("--out", density_out, "write the report here instead of stdout");
  add_tolerance_flags(density, density_tol);

  // generate
  std::string gen_kind, gen_out, gen_tree_out;
  int gen_parties = 2, gen_n = 3, gen_omit = 0, gen_subtrees = 1;
  std::vector<double> gen_angles;
  auto* generate = app.add_subcommand("generate", "emit a named measurement/protocol family");
  generate->add_option("kind", gen_kind, "domino|rotated-domino|tight|tight-omit|density")
      ->required()
      ->check(CLI::IsMember({"domino", "rotated-domino", "tight", "tight-omit", "density"}));
  generate->add_option("--parties", gen_parties, "party count P (default 2)");
  generate->add_option("--n", gen_n, "first-round outcome count (tight families, default 3)");
  generate->add_option("--omit", gen_omit, "omission count (tight-omit)");
  generate->add_option("--subtrees", gen_subtrees, "subtree count S (density)");
  generate->add_option("--angles", gen_angles, "four rotation angles in radians, comma separated")
      ->delimiter(',');
  generate->add_option("--out", gen_out, "measurement output path (default stdout)");
  generate->add_option("--out-tree", gen_tree_out, "tree output path (tree-bearing kinds)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (check->parsed()) {
      return cmd_check(check_file, check_backend, check_tol, check_dedupe, check_party,
                       check_format, check_out, out);
    }
    if (tree_audit->parsed()) {
      return cmd_tree_audit(audit_tree, audit_measurement, audit_tol, audit_format, audit_out,
                            out);
    }
    if (density->parsed()) {
      return cmd_density(density_file, density_prefixes, density_tol, density_format,
                         density_out, out);
    }
    if (generate->parsed()) {
      return cmd_generate(gen_kind, gen_parties, gen_n, gen_omit, gen_subtrees, gen_angles,
                          gen_out, gen_tree_out, out, err);
    }
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "error: no subcommand\n";
  return kExitError;
}

}  // namespace loccert
