#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loccert/bounds.hpp"
#include "loccert/measurement.hpp"

namespace loccert {

/// One measurement-outcome node. The party index and cumulative local label
/// are absent exactly at the root. Leaves of trees bound to a measurement
/// carry the index of the product element they realize.
struct TreeNode {
  std::optional<int> party;  // 0-based
  std::optional<HermitianOperator> label;
  std::vector<TreeNode> children;
  std::optional<int> leaf_element;
  int uid = -1;  // internal bookkeeping (descendant tracking across prune)

  bool is_leaf() const { return children.empty(); }
};

struct LoccTree {
  TreeNode root;
  int party_count = 0;
  std::vector<int> dims;
  bool canonical = false;  // set by generators and by a passing validation
};

// ---------------------------------------------------------------------------
// Shape helpers
// ---------------------------------------------------------------------------

std::size_t count_nodes(const TreeNode& n);
std::size_t count_leaves(const TreeNode& n);
/// Number of edges from this node down to its deepest leaf.
std::size_t node_height(const TreeNode& n);
/// Child-index path from the root, "root" for the root itself, else "0.1.0".
std::string path_to_string(const std::vector<int>& path);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct CanonicalViolation {
  std::string path;
  std::string what;
};

struct CanonicalReport {
  bool is_canonical = false;
  std::size_t leaf_count = 0;
  std::size_t node_count = 0;  // includes the root
  std::vector<CanonicalViolation> violations;
};

/// Checks the canonical-tree invariants: the root carries no party/label,
/// every other node carries both, every nonleaf node has exactly two
/// children whose labels are not proportional to each other, and the node
/// count equals 2N - 1 for N leaves.
CanonicalReport validate_canonical(const LoccTree& t, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Node classification
// ---------------------------------------------------------------------------

struct NodeClassification {
  /// Pre-order flags (root first). A node is extreme iff its label is
  /// proportional to a representative that is extreme in the cone generated
  /// by its party's local factors in the measurement. Labels outside that
  /// cone's ray list - e.g. coarse-grained intermediate outcomes - are
  /// non-extreme. The root is never extreme.
  std::vector<bool> extreme;
  std::map<int, ExtremeRayReport> party_reports;
};

NodeClassification classify_nodes(const LoccTree& t, const SeparableMeasurement& m,
                                  const ExtremeRayOptions& options = {});

// ---------------------------------------------------------------------------
// Prune / rearrange / decompose
// ---------------------------------------------------------------------------

/// Reduces the tree to exactly one leaf per distinct product element while
/// keeping at least one appearance of every extreme local ray among the node
/// labels, and without creating any ancestor/descendant relation that did
/// not hold in the input.
///
/// Duplicate leaves are removed greedily: a duplicate leaf may be deleted
/// only if neither its own label nor a contracted parent's label is the last
/// appearance of an extreme ray; ties are broken by lexicographically
/// smallest node path. When the parent of a removed leaf is left with a
/// single child it is contracted away (restoring the full-binary shape);
/// parents left with two or more children are not touched. Throws PruneError
/// when no admissible removal exists.
LoccTree prune(const LoccTree& t, const SeparableMeasurement& m,
               const ExtremeRayOptions& options = {});

struct RearrangeResult {
  LoccTree tree;
  std::vector<bool> extreme;  // pre-order flags of the rearranged tree
  std::size_t swap_count = 0;
};

/// Repeatedly exchanges the payload (party, label, flag) of an extreme node
/// with a non-extreme child - the first such child when both qualify - until
/// no extreme node has a non-extreme child, so no extreme node has a
/// non-extreme descendant. The tree shape and the payload multiset are
/// preserved; leaf/element bindings are not meaningful afterwards. Performs
/// at most (node count) x (height) swaps.
RearrangeResult rearrange(const LoccTree& t, const std::vector<bool>& extreme_flags);

struct SubtreeStats {
  std::string root_path;
  std::size_t leaf_count = 0;  // l_s
  std::size_t node_count = 0;  // n_s
  std::size_t height = 0;      // h_s
};

struct SubtreeDecomposition {
  std::vector<SubtreeStats> subtrees;
  std::size_t subtree_count = 0;       // S
  std::size_t extreme_node_count = 0;  // == sum of n_s
  std::size_t leaf_total = 0;          // sum of l_s
  std::int64_t eq21_total = 0;         // 2 sum(l_s) - S
  bool full_binary_ok = false;         // every n_s == 2 l_s - 1
  bool branch_rule_ok = false;         // <=1 node per party along any in-subtree branch
  bool height_ok = false;              // every h_s <= P - 1
  bool leaf_bound_ok = false;          // every l_s <= 2^(P-1)
};

/// Identifies the maximal all-extreme subtrees of a rearranged tree (no
/// extreme node with a non-extreme descendant; violating input is an error)
/// and computes the counting identities over them.
SubtreeDecomposition extreme_subtree_decomposition(const LoccTree& t,
                                                   const std::vector<bool>& extreme_flags);

// ---------------------------------------------------------------------------
// Node/leaf ratio bound
// ---------------------------------------------------------------------------

struct Lemma1Result {
  std::size_t node_count = 0;
  std::size_t leaf_count = 0;
  std::size_t height = 0;
  Rational ratio;  // n / l
  Rational bound;  // 2(1 - 2^-(h+1))
  bool holds = false;
};

/// For any finite tree in which every nonleaf node has at least two
/// children: n/l <= 2(1 - 2^-(h+1)). A nonleaf node with a single child is
/// a precondition error; `holds` false on valid input means a library bug.
Lemma1Result lemma1_check(const LoccTree& t);

// ---------------------------------------------------------------------------
// Audit pipeline
// ---------------------------------------------------------------------------

struct TreeAuditReport {
  CanonicalReport canonical;
  std::string aborted_at;  // empty when the pipeline completed

  std::size_t input_leaf_count = 0;
  std::size_t pruned_leaf_count = 0;
  bool prune_changed = false;

  std::map<int, std::int64_t> e_per_party;  // participating parties, 0-based
  std::int64_t sum_e = 0;
  std::int64_t n_elements = 0;

  std::size_t rearrange_swaps = 0;
  SubtreeDecomposition decomposition;
  Lemma1Result lemma1;

  // Chain: sum_e <= extreme node count <= 2N - S <= 2N - ceil(N / 2^(P-1)).
  bool link1_ok = false;
  bool link2_ok = false;
  bool link3_ok = false;  // equivalent to S >= ceil(N / 2^(P-1))
  std::int64_t min_subtrees = 0;    // ceil(N / 2^(P-1))
  std::int64_t eq24_bound = 0;      // 2N - min_subtrees
  bool eq24_tight = false;          // sum_e == eq24_bound

  /// Diagnostic: no extreme node has a descendant of the same party
  /// (checked on the classified pruned tree and on the rearranged tree).
  bool lemma5_ok = false;

  bool passed = false;
};

/// Full pipeline: validate canonical form, prune to one leaf per element,
/// classify nodes, rearrange, decompose into maximal extreme subtrees, check
/// the node/leaf ratio bound and the counting chain. Aborts (with the report
/// stating where) if the tree is not canonical.
TreeAuditReport audit(const LoccTree& t, const SeparableMeasurement& m,
                      const ExtremeRayOptions& options = {});

}  // namespace loccert
