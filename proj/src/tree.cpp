#include "loccert/tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace loccert {

std::size_t count_nodes(const TreeNode& n) {
  std::size_t c = 1;
  for (const auto& ch : n.children) c += count_nodes(ch);
  return c;
}

std::size_t count_leaves(const TreeNode& n) {
  if (n.is_leaf()) return 1;
  std::size_t c = 0;
  for (const auto& ch : n.children) c += count_leaves(ch);
  return c;
}

std::size_t node_height(const TreeNode& n) {
  std::size_t h = 0;
  for (const auto& ch : n.children) h = std::max(h, 1 + node_height(ch));
  return h;
}

std::string path_to_string(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) os << '.';
    os << path[i];
  }
  return os.str();
}

namespace {

void collect_preorder(TreeNode& n, std::vector<TreeNode*>& out) {
  out.push_back(&n);
  for (auto& ch : n.children) collect_preorder(ch, out);
}

void collect_preorder_const(const TreeNode& n, std::vector<const TreeNode*>& out) {
  out.push_back(&n);
  for (const auto& ch : n.children) collect_preorder_const(ch, out);
}

/// Parent index per pre-order position (-1 for the root).
std::vector<int> preorder_parents(const std::vector<const TreeNode*>& nodes) {
  std::map<const TreeNode*, int> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<int>(i);
  std::vector<int> par(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& ch : nodes[i]->children) par[index.at(&ch)] = static_cast<int>(i);
  }
  return par;
}

void assign_uids(TreeNode& n, int& next) {
  n.uid = next++;
  for (auto& ch : n.children) assign_uids(ch, next);
}

}  // namespace

CanonicalReport validate_canonical(const LoccTree& t, const Tolerances& tol) {
  CanonicalReport report;
  report.node_count = count_nodes(t.root);
  report.leaf_count = count_leaves(t.root);

  std::vector<int> path;
  auto walk = [&](auto&& self, const TreeNode& n) -> void {
    const bool is_root = path.empty();
    if (is_root) {
      if (n.party || n.label) {
        report.violations.push_back({"root", "the root must not carry a party or label"});
      }
    } else {
      if (!n.party || !n.label) {
        report.violations.push_back({path_to_string(path), "node is missing its party or label"});
      } else {
        if (*n.party < 0 || *n.party >= t.party_count) {
          report.violations.push_back({path_to_string(path), "party index out of range"});
        } else if (n.label->dim() != t.dims.at(static_cast<std::size_t>(*n.party))) {
          report.violations.push_back(
              {path_to_string(path), "label dimension does not match the party's dimension"});
        }
        if (n.label->is_zero()) {
          report.violations.push_back({path_to_string(path), "label is zero"});
        }
      }
    }
    if (!n.is_leaf()) {
      if (n.children.size() != 2) {
        report.violations.push_back({path_to_string(path),
                                     "nonleaf node has " + std::to_string(n.children.size()) +
                                         " children, expected exactly 2"});
      } else {
        const auto& a = n.children[0];
        const auto& b = n.children[1];
        if (a.label && b.label && !a.label->is_zero() && !b.label->is_zero() &&
            a.label->dim() == b.label->dim() && a.label->mode() == b.label->mode() &&
            proportionality_factor(*a.label, *b.label, tol).has_value()) {
          report.violations.push_back(
              {path_to_string(path), "sibling labels are proportional to each other"});
        }
      }
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      self(self, n.children[i]);
      path.pop_back();
    }
  };
  walk(walk, t.root);

  if (report.node_count != 2 * report.leaf_count - 1) {
    report.violations.push_back(
        {"root", "node count " + std::to_string(report.node_count) + " differs from 2N-1 = " +
                     std::to_string(2 * report.leaf_count - 1)});
  }
  report.is_canonical = report.violations.empty();
  return report;
}

namespace {

/// Representative index of a node label within its party's ray list, or -1
/// when the label is not proportional to any representative.
int match_representative(const HermitianOperator& label, const ExtremeRayReport& report,
                         const Tolerances& tol) {
  for (std::size_t r = 0; r < report.representatives.size(); ++r) {
    const auto& rep = report.representatives[r];
    if (rep.dim() != label.dim() || rep.mode() != label.mode()) continue;
    if (proportionality_factor(label, rep, tol).has_value()) return static_cast<int>(r);
  }
  return -1;
}

std::map<int, ExtremeRayReport> per_party_ray_reports(const SeparableMeasurement& m,
                                                      const ExtremeRayOptions& options) {
  std::map<int, ExtremeRayReport> reports;
  for (int a = 0; a < m.party_count; ++a) {
    ExtremeRayReport r = extreme_ray_set(m.party_factors(a), options);
    r.party = a;
    reports.emplace(a, std::move(r));
  }
  return reports;
}

}  // namespace

NodeClassification classify_nodes(const LoccTree& t, const SeparableMeasurement& m,
                                  const ExtremeRayOptions& options) {
  if (t.party_count != m.party_count) {
    throw ValidationError("tree and measurement disagree on the party count");
  }
  NodeClassification out;
  out.party_reports = per_party_ray_reports(m, options);

  std::vector<const TreeNode*> nodes;
  collect_preorder_const(t.root, nodes);
  out.extreme.assign(nodes.size(), false);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const TreeNode* n = nodes[i];
    if (!n->party || !n->label) continue;  // only labeled nodes classify
    const auto it = out.party_reports.find(*n->party);
    if (it == out.party_reports.end()) continue;
    const int rep = match_representative(*n->label, it->second, options.tol);
    out.extreme[i] = rep >= 0 && it->second.extreme[static_cast<std::size_t>(rep)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prune
// ---------------------------------------------------------------------------

namespace {

struct AppearanceKey {
  int party;
  int rep;
  friend auto operator<=>(const AppearanceKey&, const AppearanceKey&) = default;
};

/// Counts, over all node labels, the appearances of each extreme ray.
std::map<AppearanceKey, int> appearance_counts(const TreeNode& root,
                                               const std::map<int, ExtremeRayReport>& reports,
                                               const Tolerances& tol) {
  std::map<AppearanceKey, int> counts;
  auto walk = [&](auto&& self, const TreeNode& n) -> void {
    if (n.party && n.label) {
      const auto it = reports.find(*n.party);
      if (it != reports.end()) {
        const int rep = match_representative(*n.label, it->second, tol);
        if (rep >= 0 && it->second.extreme[static_cast<std::size_t>(rep)]) {
          ++counts[{*n.party, rep}];
        }
      }
    }
    for (const auto& ch : n.children) self(self, ch);
  };
  walk(walk, root);
  return counts;
}

TreeNode* node_at(TreeNode& root, const std::vector<int>& path) {
  TreeNode* n = &root;
  for (int i : path) n = &n->children.at(static_cast<std::size_t>(i));
  return n;
}

void leaves_by_element(const TreeNode& n, std::vector<int>& path,
                       std::map<int, std::vector<std::vector<int>>>& out) {
  if (n.is_leaf()) {
    if (!n.leaf_element) {
      throw ValidationError("leaf " + path_to_string(path) + " is not bound to an element");
    }
    out[*n.leaf_element].push_back(path);
    return;
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    leaves_by_element(n.children[i], path, out);
    path.pop_back();
  }
}

bool every_nonleaf_has_two_children(const TreeNode& n) {
  if (n.is_leaf()) return true;
  if (n.children.size() != 2) return false;
  return std::all_of(n.children.begin(), n.children.end(), every_nonleaf_has_two_children);
}

}  // namespace

LoccTree prune(const LoccTree& input, const SeparableMeasurement& m,
               const ExtremeRayOptions& options) {
  LoccTree tree = input;
  int next_uid = 0;
  assign_uids(tree.root, next_uid);
  const bool input_binary = every_nonleaf_has_two_children(tree.root);

  // Input ancestor sets, for the descendant-preservation check.
  std::map<int, std::set<int>> input_ancestors;
  {
    std::vector<int> stack;
    auto walk = [&](auto&& self, const TreeNode& n) -> void {
      input_ancestors[n.uid] = std::set<int>(stack.begin(), stack.end());
      stack.push_back(n.uid);
      for (const auto& ch : n.children) self(self, ch);
      stack.pop_back();
    };
    walk(walk, tree.root);
  }

  validate_measurement(m, options.tol);
  const auto reports = per_party_ray_reports(m, options);

  // Extreme rays that never label a node of the input tree (a party whose
  // outcome on some branch is "never measured", i.e. an identity factor)
  // have no appearance to preserve.
  const std::set<AppearanceKey> protected_keys = [&] {
    std::set<AppearanceKey> keys;
    for (const auto& [key, n] : appearance_counts(tree.root, reports, options.tol)) {
      if (n > 0) keys.insert(key);
    }
    return keys;
  }();

  {
    std::vector<int> path;
    std::map<int, std::vector<std::vector<int>>> by_element;
    leaves_by_element(tree.root, path, by_element);
    for (std::size_t j = 0; j < m.elements.size(); ++j) {
      if (!by_element.count(static_cast<int>(j))) {
        throw ValidationError("element " + std::to_string(j) + " is not realized by any leaf");
      }
    }
    for (const auto& [el, _] : by_element) {
      if (el < 0 || el >= static_cast<int>(m.elements.size())) {
        throw ValidationError("leaf bound to unknown element index " + std::to_string(el));
      }
    }
  }

  for (;;) {
    std::vector<int> path;
    std::map<int, std::vector<std::vector<int>>> by_element;
    leaves_by_element(tree.root, path, by_element);

    int victim_element = -1;
    for (const auto& [el, leaves] : by_element) {
      if (leaves.size() > 1) {
        victim_element = el;
        break;
      }
    }
    if (victim_element < 0) break;

    const auto counts = appearance_counts(tree.root, reports, options.tol);
    auto candidates = by_element.at(victim_element);
    std::sort(candidates.begin(), candidates.end());

    bool removed = false;
    for (const auto& leaf_path : candidates) {
      // Labels that die with this removal: the leaf's own and, when the
      // parent is left with one child and gets contracted, the parent's.
      TreeNode* leaf = node_at(tree.root, leaf_path);
      std::vector<int> parent_path(leaf_path.begin(), leaf_path.end() - 1);
      TreeNode* parent = node_at(tree.root, parent_path);
      const bool contracts = parent->children.size() == 2;
      if (contracts && parent_path.empty()) continue;  // never contract the root away

      std::map<AppearanceKey, int> dying;
      auto note = [&](const TreeNode& n) {
        if (!n.party || !n.label) return;
        const auto it = reports.find(*n.party);
        if (it == reports.end()) return;
        const int rep = match_representative(*n.label, it->second, options.tol);
        if (rep >= 0 && it->second.extreme[static_cast<std::size_t>(rep)]) {
          ++dying[{*n.party, rep}];
        }
      };
      note(*leaf);
      if (contracts) note(*parent);

      bool blocked = false;
      for (const auto& [key, lost] : dying) {
        if (counts.at(key) <= lost) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;

      const int child_index = leaf_path.back();
      parent->children.erase(parent->children.begin() + child_index);
      if (parent->children.size() == 1) {
        TreeNode orphan = std::move(parent->children[0]);
        *parent = std::move(orphan);
      }
      removed = true;
      break;
    }
    if (!removed) {
      throw PruneError("no duplicate leaf of element " + std::to_string(victim_element) +
                       " can be removed without losing the last appearance of an extreme ray");
    }
  }

  // Contract verification.
  {
    std::vector<int> path;
    std::map<int, std::vector<std::vector<int>>> by_element;
    leaves_by_element(tree.root, path, by_element);
    if (by_element.size() != m.elements.size()) {
      throw InternalError("pruned tree does not realize every element exactly once");
    }
    for (const auto& [el, leaves] : by_element) {
      if (leaves.size() != 1) {
        throw InternalError("element " + std::to_string(el) + " still has " +
                            std::to_string(leaves.size()) + " leaves after pruning");
      }
    }
    const auto counts = appearance_counts(tree.root, reports, options.tol);
    for (const auto& key : protected_keys) {
      if (!counts.count(key)) {
        throw PruneError("pruning lost every appearance of an extreme ray of party " +
                         std::to_string(key.party));
      }
    }
    if (input_binary && !every_nonleaf_has_two_children(tree.root)) {
      throw InternalError("pruning broke the full-binary shape");
    }
    std::vector<int> uid_stack;
    auto walk = [&](auto&& self, const TreeNode& n) -> void {
      const auto& allowed = input_ancestors.at(n.uid);
      for (int u : uid_stack) {
        if (!allowed.count(u)) {
          throw InternalError("pruning created a new ancestor/descendant relation");
        }
      }
      uid_stack.push_back(n.uid);
      for (const auto& ch : n.children) self(self, ch);
      uid_stack.pop_back();
    };
    walk(walk, tree.root);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Rearrange
// ---------------------------------------------------------------------------

RearrangeResult rearrange(const LoccTree& input, const std::vector<bool>& extreme_flags) {
  RearrangeResult result;
  result.tree = input;
  result.extreme = extreme_flags;

  std::vector<TreeNode*> nodes;
  collect_preorder(result.tree.root, nodes);
  if (extreme_flags.size() != nodes.size()) {
    throw ValidationError("flag vector length does not match the node count");
  }
  std::map<const TreeNode*, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

  const std::size_t height = node_height(result.tree.root);
  const std::size_t swap_budget = nodes.size() * std::max<std::size_t>(height, 1);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size() && !changed; ++i) {
      if (!result.extreme[i]) continue;
      for (auto& ch : nodes[i]->children) {
        const std::size_t c = index.at(&ch);
        if (result.extreme[c]) continue;
        std::swap(nodes[i]->party, ch.party);
        std::swap(nodes[i]->label, ch.label);
        // std::vector<bool> proxies do not swap through std::swap
        const bool tmp = result.extreme[i];
        result.extreme[i] = result.extreme[c];
        result.extreme[c] = tmp;
        ++result.swap_count;
        if (result.swap_count > swap_budget) {
          throw InternalError("rearrangement exceeded its swap budget");
        }
        changed = true;
        break;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

SubtreeDecomposition extreme_subtree_decomposition(const LoccTree& t,
                                                   const std::vector<bool>& extreme_flags) {
  std::vector<const TreeNode*> nodes;
  collect_preorder_const(t.root, nodes);
  if (extreme_flags.size() != nodes.size()) {
    throw ValidationError("flag vector length does not match the node count");
  }
  const std::vector<int> parents = preorder_parents(nodes);
  std::map<const TreeNode*, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

  // Precondition: extreme nodes have only extreme children (hence only
  // extreme descendants).
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!extreme_flags[i]) continue;
    for (const auto& ch : nodes[i]->children) {
      if (!extreme_flags[index.at(&ch)]) {
        throw ValidationError("input is not rearranged: an extreme node has a non-extreme child");
      }
    }
  }

  // Paths for reporting.
  std::vector<std::string> paths(nodes.size());
  {
    std::vector<int> path;
    std::size_t pos = 0;
    auto walk = [&](auto&& self, const TreeNode& n) -> void {
      paths[pos++] = path_to_string(path);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        self(self, n.children[i]);
        path.pop_back();
      }
    };
    walk(walk, t.root);
  }

  SubtreeDecomposition d;
  d.full_binary_ok = true;
  d.branch_rule_ok = true;
  d.height_ok = true;
  d.leaf_bound_ok = true;

  BigInt leaf_cap = 1;
  leaf_cap <<= std::max(t.party_count - 1, 0);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!extreme_flags[i]) continue;
    const int p = parents[i];
    if (p >= 0 && extreme_flags[static_cast<std::size_t>(p)]) continue;  // interior node

    const TreeNode* root = nodes[i];
    SubtreeStats st;
    st.root_path = paths[i];
    st.node_count = count_nodes(*root);
    st.leaf_count = count_leaves(*root);
    st.height = node_height(*root);
    if (st.node_count != 2 * st.leaf_count - 1) d.full_binary_ok = false;
    if (st.height + 1 > static_cast<std::size_t>(std::max(t.party_count, 1))) d.height_ok = false;
    if (BigInt(st.leaf_count) > leaf_cap) d.leaf_bound_ok = false;

    // At most one node per party along any root-to-leaf branch.
    auto branch_walk = [&](auto&& self, const TreeNode& n, std::map<int, int>& seen) -> void {
      if (n.party) {
        if (++seen[*n.party] > 1) d.branch_rule_ok = false;
      }
      for (const auto& ch : n.children) self(self, ch, seen);
      if (n.party) --seen[*n.party];
    };
    std::map<int, int> seen;
    branch_walk(branch_walk, *root, seen);

    d.extreme_node_count += st.node_count;
    d.leaf_total += st.leaf_count;
    d.subtrees.push_back(std::move(st));
  }
  d.subtree_count = d.subtrees.size();
  d.eq21_total = 2 * static_cast<std::int64_t>(d.leaf_total) -
                 static_cast<std::int64_t>(d.subtree_count);

  std::size_t total_extreme = 0;
  for (bool f : extreme_flags) total_extreme += f ? 1 : 0;
  if (total_extreme != d.extreme_node_count) {
    throw InternalError("maximal extreme subtrees do not partition the extreme nodes");
  }
  return d;
}

// ---------------------------------------------------------------------------
// Node/leaf ratio bound
// ---------------------------------------------------------------------------

Lemma1Result lemma1_check(const LoccTree& t) {
  std::vector<int> path;
  auto walk = [&](auto&& self, const TreeNode& n) -> void {
    if (!n.is_leaf() && n.children.size() < 2) {
      throw ValidationError("nonleaf node " + path_to_string(path) +
                            " has fewer than two children");
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      self(self, n.children[i]);
      path.pop_back();
    }
  };
  walk(walk, t.root);

  Lemma1Result r;
  r.node_count = count_nodes(t.root);
  r.leaf_count = count_leaves(t.root);
  r.height = node_height(t.root);
  r.ratio = Rational(static_cast<std::int64_t>(r.node_count),
                     static_cast<std::int64_t>(r.leaf_count));
  BigInt pw = 1;
  pw <<= r.height;
  r.bound = 2 - Rational(BigInt(1), pw);  // == 2(1 - 2^-(h+1))
  r.holds = r.ratio <= r.bound;
  return r;
}

// ---------------------------------------------------------------------------
// Audit
// ---------------------------------------------------------------------------

namespace {

/// True iff no extreme node has a same-party descendant.
bool no_same_party_extreme_ancestry(const TreeNode& root, const std::vector<bool>& flags) {
  std::vector<const TreeNode*> nodes;
  collect_preorder_const(root, nodes);
  std::map<const TreeNode*, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

  bool ok = true;
  // Stack of parties of extreme ancestors along the current path.
  std::map<int, int> active;
  auto walk = [&](auto&& self, const TreeNode& n) -> void {
    const std::size_t i = index.at(&n);
    if (n.party && active.count(*n.party) && active.at(*n.party) > 0) ok = false;
    const bool push = flags[i] && n.party.has_value();
    if (push) ++active[*n.party];
    for (const auto& ch : n.children) self(self, ch);
    if (push) --active[*n.party];
  };
  walk(walk, root);
  return ok;
}

}  // namespace

TreeAuditReport audit(const LoccTree& t, const SeparableMeasurement& m,
                      const ExtremeRayOptions& options) {
  TreeAuditReport report;
  report.canonical = validate_canonical(t, options.tol);
  report.input_leaf_count = report.canonical.leaf_count;
  report.n_elements = static_cast<std::int64_t>(m.elements.size());
  if (!report.canonical.is_canonical) {
    report.aborted_at = "canonical-validation";
    return report;
  }
  if (!find_duplicate_elements(m, options.tol).empty()) {
    throw ValidationError("audit requires a measurement with distinct product elements");
  }

  const LoccTree pruned = prune(t, m, options);
  report.pruned_leaf_count = count_leaves(pruned.root);
  report.prune_changed = report.pruned_leaf_count != report.input_leaf_count;

  const NodeClassification classification = classify_nodes(pruned, m, options);
  for (int a = 0; a < m.party_count; ++a) {
    const auto factors = m.party_factors(a);
    const bool participates =
        std::any_of(factors.begin(), factors.end(), [&](const HermitianOperator& f) {
          return !is_proportional_to_identity(f, options.tol);
        });
    if (!participates) continue;
    const std::int64_t e = classification.party_reports.at(a).extreme_count;
    report.e_per_party[a] = e;
    report.sum_e += e;
  }

  RearrangeResult rearranged = rearrange(pruned, classification.extreme);
  report.rearrange_swaps = rearranged.swap_count;
  report.decomposition = extreme_subtree_decomposition(rearranged.tree, rearranged.extreme);
  report.lemma1 = lemma1_check(pruned);

  const std::int64_t n = report.n_elements;
  const std::int64_t s = static_cast<std::int64_t>(report.decomposition.subtree_count);
  const std::int64_t extreme_nodes =
      static_cast<std::int64_t>(report.decomposition.extreme_node_count);
  BigInt denom = 1;
  denom <<= std::max(m.party_count - 1, 0);
  report.min_subtrees = ceil_rational(Rational(BigInt(n), denom)).convert_to<std::int64_t>();
  report.eq24_bound = 2 * n - report.min_subtrees;
  report.link1_ok = report.sum_e <= extreme_nodes;
  report.link2_ok = extreme_nodes <= 2 * n - s;
  report.link3_ok = s >= report.min_subtrees;
  report.eq24_tight = report.sum_e == report.eq24_bound;
  report.lemma5_ok = no_same_party_extreme_ancestry(pruned.root, classification.extreme) &&
                     no_same_party_extreme_ancestry(rearranged.tree.root, rearranged.extreme);

  report.passed = report.canonical.is_canonical && report.link1_ok && report.link2_ok &&
                  report.link3_ok && report.decomposition.full_binary_ok &&
                  report.decomposition.branch_rule_ok && report.decomposition.height_ok &&
                  report.decomposition.leaf_bound_ok && report.lemma1.holds && report.lemma5_ok;
  return report;
}

}  // namespace loccert
