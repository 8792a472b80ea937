#include "loccert/generators.hpp"

#include <cmath>
#include <numbers>

namespace loccert {

namespace {

HermitianOperator basis_projector(int dim, int k) {
  std::vector<Rational> d(static_cast<std::size_t>(dim), Rational(0));
  d[static_cast<std::size_t>(k)] = 1;
  return HermitianOperator::exact_diagonal(std::move(d));
}

/// Projector onto (|a> + sign |b>)/sqrt(2); entries are +-1/2.
HermitianOperator pair_projector(int dim, int a, int b, int sign) {
  std::vector<ExactComplex> v(static_cast<std::size_t>(dim));
  v[static_cast<std::size_t>(a)] = ExactComplex(Rational(1));
  v[static_cast<std::size_t>(b)] = ExactComplex(Rational(sign));
  return HermitianOperator::exact_projector(v, true);
}

TreeNode* node_at(TreeNode& root, const std::vector<int>& path) {
  TreeNode* n = &root;
  for (int i : path) n = &n->children.at(static_cast<std::size_t>(i));
  return n;
}

void collect_leaf_paths(const TreeNode& n, std::vector<int>& path,
                        std::vector<std::vector<int>>& out) {
  if (n.is_leaf()) {
    out.push_back(path);
    return;
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_leaf_paths(n.children[i], path, out);
    path.pop_back();
  }
}

/// Binds leaves to element indices in the given order and derives the
/// product element each leaf realizes: for every party, the label of its
/// deepest node along the path, or the identity if the party never measures
/// on that branch.
SeparableMeasurement bind_and_derive(LoccTree& tree,
                                     const std::vector<std::vector<int>>& ordered_leaf_paths,
                                     const std::vector<std::string>& ids) {
  SeparableMeasurement m;
  m.party_count = tree.party_count;
  m.dims = tree.dims;
  for (std::size_t idx = 0; idx < ordered_leaf_paths.size(); ++idx) {
    const auto& path = ordered_leaf_paths[idx];
    TreeNode* leaf = node_at(tree.root, path);
    leaf->leaf_element = static_cast<int>(idx);

    std::vector<std::optional<HermitianOperator>> deepest(
        static_cast<std::size_t>(tree.party_count));
    const TreeNode* n = &tree.root;
    for (int step : path) {
      n = &n->children.at(static_cast<std::size_t>(step));
      if (n->party && n->label) deepest[static_cast<std::size_t>(*n->party)] = n->label;
    }
    ProductPovmElement el;
    el.id = ids[idx];
    for (int p = 0; p < tree.party_count; ++p) {
      el.factors.push_back(deepest[static_cast<std::size_t>(p)]
                               ? *deepest[static_cast<std::size_t>(p)]
                               : HermitianOperator::identity(tree.dims[static_cast<std::size_t>(p)],
                                                             ScalarMode::Exact));
    }
    m.elements.push_back(std::move(el));
  }
  return m;
}

/// Two-outcome rank-one qubit measurement at tan-half-angle t: projectors
/// onto (c, s) and (-s, c) with c = (1-t^2)/(1+t^2), s = 2t/(1+t^2).
std::pair<HermitianOperator, HermitianOperator> qubit_pair(const Rational& t) {
  const Rational den = 1 + t * t;
  const Rational c = (1 - t * t) / den;
  const Rational s = (2 * t) / den;
  HermitianOperator primary =
      HermitianOperator::exact_projector({ExactComplex(c), ExactComplex(s)}, true);
  HermitianOperator complement =
      HermitianOperator::exact_projector({ExactComplex(-s), ExactComplex(c)}, true);
  return {std::move(primary), std::move(complement)};
}

/// Appends the two-outcome layers for parties `party`..P-1 below `node`,
/// consuming one global angle index per measurement context.
void add_qubit_layers(TreeNode& node, int party, int parties, long& next_angle,
                      long total_angles) {
  if (party >= parties) return;
  const Rational t(next_angle, total_angles + 1);
  ++next_angle;
  auto [q0, q1] = qubit_pair(t);
  TreeNode c0;
  c0.party = party;
  c0.label = std::move(q0);
  TreeNode c1;
  c1.party = party;
  c1.label = std::move(q1);
  node.children.push_back(std::move(c0));
  node.children.push_back(std::move(c1));
  add_qubit_layers(node.children[0], party + 1, parties, next_angle, total_angles);
  add_qubit_layers(node.children[1], party + 1, parties, next_angle, total_angles);
}

/// Sum of basis projectors |from><from| + ... + |to-1><to-1| in dimension d.
HermitianOperator basis_range_sum(int dim, int from, int to) {
  std::vector<Rational> d(static_cast<std::size_t>(dim), Rational(0));
  for (int i = from; i < to; ++i) d[static_cast<std::size_t>(i)] = 1;
  return HermitianOperator::exact_diagonal(std::move(d));
}

}  // namespace

SeparableMeasurement domino() {
  const auto p0 = basis_projector(3, 0);
  const auto p1 = basis_projector(3, 1);
  const auto p2 = basis_projector(3, 2);
  const auto plus01 = pair_projector(3, 0, 1, +1);
  const auto minus01 = pair_projector(3, 0, 1, -1);
  const auto plus12 = pair_projector(3, 1, 2, +1);
  const auto minus12 = pair_projector(3, 1, 2, -1);

  SeparableMeasurement m;
  m.party_count = 2;
  m.dims = {3, 3};
  auto add = [&](const char* id, const HermitianOperator& a, const HermitianOperator& b) {
    m.elements.push_back(ProductPovmElement{{a, b}, id});
  };
  add("Psi1", p1, p1);
  add("Psi2", p0, plus01);
  add("Psi3", p0, minus01);
  add("Psi4", p2, plus12);
  add("Psi5", p2, minus12);
  add("Psi6", plus12, p0);
  add("Psi7", minus12, p0);
  add("Psi8", plus01, p2);
  add("Psi9", minus01, p2);
  return m;
}

SeparableMeasurement rotated_domino(const std::array<double, 4>& angles, const Tolerances& tol) {
  for (double a : angles) {
    if (!(a > 0.0 && a < std::numbers::pi / 2)) {
      throw ValidationError("rotation angles must lie strictly inside (0, pi/2)");
    }
  }
  auto fproj = [](std::vector<FloatComplex> v) {
    return HermitianOperator::float_projector(v, true);
  };
  auto fbasis = [&](int k) {
    std::vector<FloatComplex> v(3, FloatComplex(0, 0));
    v[static_cast<std::size_t>(k)] = FloatComplex(1, 0);
    return fproj(v);
  };
  auto rotated = [&](int a, int b, double theta, bool second) {
    std::vector<FloatComplex> v(3, FloatComplex(0, 0));
    if (!second) {
      v[static_cast<std::size_t>(a)] = std::cos(theta);
      v[static_cast<std::size_t>(b)] = std::sin(theta);
    } else {
      v[static_cast<std::size_t>(a)] = std::sin(theta);
      v[static_cast<std::size_t>(b)] = -std::cos(theta);
    }
    return fproj(v);
  };

  const auto p0 = fbasis(0);
  const auto p1 = fbasis(1);
  const auto p2 = fbasis(2);
  SeparableMeasurement m;
  m.party_count = 2;
  m.dims = {3, 3};
  auto add = [&](const char* id, HermitianOperator a, HermitianOperator b) {
    m.elements.push_back(ProductPovmElement{{std::move(a), std::move(b)}, id});
  };
  add("Psi1", p1, p1);
  add("Psi2", p0, rotated(0, 1, angles[0], false));
  add("Psi3", p0, rotated(0, 1, angles[0], true));
  add("Psi4", p2, rotated(1, 2, angles[1], false));
  add("Psi5", p2, rotated(1, 2, angles[1], true));
  add("Psi6", rotated(1, 2, angles[2], false), p0);
  add("Psi7", rotated(1, 2, angles[2], true), p0);
  add("Psi8", rotated(0, 1, angles[3], false), p2);
  add("Psi9", rotated(0, 1, angles[3], true), p2);

  for (int party = 0; party < 2; ++party) {
    if (dedupe_rays(m.party_factors(party), tol).representatives.size() != 7) {
      throw ValidationError(
          "degenerate rotation angles: a party has fewer than seven distinct local rays");
    }
  }
  return m;
}

namespace {

struct TightBuilder {
  int parties;
  int outcomes;
  long next_angle = 1;
  long total_angles;

  TightBuilder(int p, int n) : parties(p), outcomes(n) {
    total_angles = static_cast<long>(n) * ((1L << (p - 1)) - 1);
  }

  TreeNode make_subtree(int s, int dim) {
    TreeNode o;
    o.party = 0;
    o.label = basis_projector(dim, s);
    add_qubit_layers(o, 1, parties, next_angle, total_angles);
    return o;
  }

  /// Chain of two-outcome splits covering first-round outcomes s..n-1; the
  /// interior labels are the coarse-grained remainders.
  TreeNode make_chain(int s, int dim) {
    if (s == outcomes - 1) return make_subtree(s, dim);
    TreeNode rest;
    rest.party = 0;
    rest.label = basis_range_sum(dim, s, dim);
    rest.children.push_back(make_subtree(s, dim));
    rest.children.push_back(make_chain(s + 1, dim));
    return rest;
  }
};

}  // namespace

GeneratedProtocol tight_protocol(int parties, int first_outcomes) {
  if (parties < 2) throw ValidationError("tight protocol needs at least two parties");
  if (first_outcomes < 2) throw ValidationError("tight protocol needs at least two first-round outcomes");

  GeneratedProtocol out;
  out.tree.party_count = parties;
  out.tree.dims.assign(static_cast<std::size_t>(parties), 2);
  out.tree.dims[0] = first_outcomes;
  out.tree.canonical = true;

  TightBuilder b(parties, first_outcomes);
  out.tree.root.children.push_back(b.make_subtree(0, first_outcomes));
  out.tree.root.children.push_back(b.make_chain(1, first_outcomes));

  std::vector<std::vector<int>> leaf_paths;
  std::vector<int> path;
  collect_leaf_paths(out.tree.root, path, leaf_paths);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < leaf_paths.size(); ++i) ids.push_back("e" + std::to_string(i));
  out.measurement = bind_and_derive(out.tree, leaf_paths, ids);
  return out;
}

namespace {

TreeNode* find_by_uid(TreeNode& n, int uid) {
  if (n.uid == uid) return &n;
  for (auto& ch : n.children) {
    if (TreeNode* hit = find_by_uid(ch, uid)) return hit;
  }
  return nullptr;
}

TreeNode* parent_of(TreeNode& root, const TreeNode* target) {
  for (auto& ch : root.children) {
    if (&ch == target) return &root;
    if (TreeNode* hit = parent_of(ch, target)) return hit;
  }
  return nullptr;
}

/// Deepest node (leftmost among the deepest) whose children are all leaves.
TreeNode* deepest_pair_parent(TreeNode& n, int depth, int& best_depth) {
  TreeNode* best = nullptr;
  if (!n.is_leaf()) {
    bool all_leaves = true;
    for (const auto& ch : n.children) all_leaves = all_leaves && ch.is_leaf();
    if (all_leaves && depth > best_depth) {
      best_depth = depth;
      best = &n;
    }
    for (auto& ch : n.children) {
      if (TreeNode* hit = deepest_pair_parent(ch, depth + 1, best_depth)) best = hit;
    }
  }
  return best;
}

void assign_uids_preorder(TreeNode& n, int& next) {
  n.uid = next++;
  for (auto& ch : n.children) assign_uids_preorder(ch, next);
}

void collect_first_round_uids(const TreeNode& n, std::vector<int>& out, const Tolerances& tol) {
  // First-round outcome nodes are the party-0 nodes with rank-one labels.
  if (n.party && *n.party == 0 && n.label && has_rank_at_most_one(*n.label, tol)) {
    out.push_back(n.uid);
    return;  // nothing of party 0 below an outcome node
  }
  for (const auto& ch : n.children) collect_first_round_uids(ch, out, tol);
}

}  // namespace

GeneratedProtocol tight_protocol_with_omissions(int parties, int first_outcomes, int omissions) {
  GeneratedProtocol out = tight_protocol(parties, first_outcomes);
  const long n0 = static_cast<long>(first_outcomes) << (parties - 1);
  if (omissions < 0 || omissions > n0 - 2) {
    throw ValidationError("omission count must lie in [0, " + std::to_string(n0 - 2) + "]");
  }

  LoccTree& tree = out.tree;
  int next_uid = 0;
  assign_uids_preorder(tree.root, next_uid);
  std::vector<int> outcome_uids;
  collect_first_round_uids(tree.root, outcome_uids, Tolerances{});

  for (int step = 0; step < omissions; ++step) {
    // Active subtree: the first surviving first-round outcome; once the
    // first-round layer has been dropped entirely, the whole tree.
    TreeNode* active = nullptr;
    std::size_t active_pos = 0;
    for (std::size_t i = 0; i < outcome_uids.size(); ++i) {
      if (TreeNode* n = find_by_uid(tree.root, outcome_uids[i])) {
        active = n;
        active_pos = i;
        break;
      }
    }

    TreeNode* scope = active ? active : &tree.root;
    if (!scope->is_leaf()) {
      // Omit the last measurement along one branch: drop the deepest
      // leaf pair, its parent becomes a leaf.
      int best_depth = -1;
      TreeNode* pair_parent = deepest_pair_parent(*scope, 0, best_depth);
      if (pair_parent == nullptr) throw InternalError("no removable leaf pair found");
      pair_parent->children.clear();
      pair_parent->leaf_element.reset();
      continue;
    }

    // The active subtree is a bare first-round outcome: merge it into the
    // next surviving outcome's projector and drop its node.
    TreeNode* next_outcome = nullptr;
    for (std::size_t i = active_pos + 1; i < outcome_uids.size(); ++i) {
      if (TreeNode* n = find_by_uid(tree.root, outcome_uids[i])) {
        next_outcome = n;
        break;
      }
    }
    if (next_outcome == nullptr) throw InternalError("no merge target for a consumed subtree");
    next_outcome->label = operator_add(*next_outcome->label, *active->label);

    TreeNode* parent = active == &tree.root ? nullptr : parent_of(tree.root, active);
    if (parent == nullptr) throw InternalError("first-round outcome without a parent");
    for (std::size_t i = 0; i < parent->children.size(); ++i) {
      if (&parent->children[i] == active) {
        parent->children.erase(parent->children.begin() + static_cast<long>(i));
        break;
      }
    }
    if (parent->children.size() == 1) {
      if (parent == &tree.root) {
        // Splice the lone child out: its label is either a coarse chain
        // remainder or, when only one first-round outcome is left, the full
        // identity; neither needs a node of its own.
        TreeNode lone = std::move(parent->children[0]);
        if (lone.is_leaf()) throw InternalError("omissions left a single-leaf tree");
        parent->children = std::move(lone.children);
      } else {
        TreeNode orphan = std::move(parent->children[0]);
        *parent = std::move(orphan);
      }
    }
  }

  std::vector<std::vector<int>> leaf_paths;
  std::vector<int> path;
  collect_leaf_paths(tree.root, path, leaf_paths);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < leaf_paths.size(); ++i) ids.push_back("e" + std::to_string(i));
  out.measurement = bind_and_derive(tree, leaf_paths, ids);
  return out;
}

GeneratedProtocol density_family_truncation(int parties, int subtree_count) {
  if (parties < 2) throw ValidationError("density family needs at least two parties");
  if (subtree_count < 1) throw ValidationError("density family needs at least one subtree");
  const int s_count = subtree_count;
  const int dim0 = s_count + 1;  // one extra direction for the unresolved tail

  GeneratedProtocol out;
  out.tree.party_count = parties;
  out.tree.dims.assign(static_cast<std::size_t>(parties), 2);
  out.tree.dims[0] = dim0;
  out.tree.canonical = true;

  TightBuilder b(parties, s_count);
  // Chain over outcomes 0..S-1 with the tail direction as the final leaf.
  std::vector<TreeNode> subtrees;
  for (int s = 0; s < s_count; ++s) subtrees.push_back(b.make_subtree(s, dim0));
  TreeNode tail;
  tail.party = 0;
  tail.label = basis_projector(dim0, s_count);

  auto make_chain = [&](auto&& self, int s) -> TreeNode {
    if (s == s_count) return std::move(tail);
    TreeNode rest;
    rest.party = 0;
    rest.label = basis_range_sum(dim0, s, dim0);
    rest.children.push_back(std::move(subtrees[static_cast<std::size_t>(s)]));
    rest.children.push_back(self(self, s + 1));
    return rest;
  };
  out.tree.root.children.push_back(std::move(subtrees[0]));
  out.tree.root.children.push_back(make_chain(make_chain, 1));

  // Right-to-left enumeration: whole subtrees from the last outcome down to
  // the first, leaves reversed within each, tail element last.
  std::vector<std::vector<int>> dfs_paths;
  std::vector<int> path;
  collect_leaf_paths(out.tree.root, path, dfs_paths);
  const std::size_t per_subtree = 1ULL << (parties - 1);
  std::vector<std::vector<int>> ordered;
  for (int s = s_count - 1; s >= 0; --s) {
    const std::size_t begin = static_cast<std::size_t>(s) * per_subtree;
    for (std::size_t i = 0; i < per_subtree; ++i) {
      ordered.push_back(dfs_paths[begin + per_subtree - 1 - i]);
    }
  }
  ordered.push_back(dfs_paths.back());  // tail
  std::vector<std::string> ids;
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i) ids.push_back("e" + std::to_string(i));
  ids.push_back("tail");
  out.measurement = bind_and_derive(out.tree, ordered, ids);
  return out;
}

}  // namespace loccert
