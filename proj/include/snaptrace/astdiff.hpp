#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "snaptrace/jsparse/ast.hpp"
#include "snaptrace/model.hpp"

namespace snaptrace::diff {

/// Identifies a node by post-order index in the source (`a`) or target (`b`) tree.
struct NodeRef {
  enum class Side { Source, Target };
  Side side = Side::Source;
  std::size_t index = 0;

  bool operator==(const NodeRef&) const = default;
  auto operator<=>(const NodeRef&) const = default;
};

enum class EditOpKind { Insert, Delete, Relabel };

struct Label {
  js::NodeKind kind = js::NodeKind::Identifier;
  std::string value;

  bool operator==(const Label&) const = default;
};

// Insert semantics: a new node with `label` is placed at child slot `position`
// of `parent` (or of the top-level forest when parent is empty), adopting the
// `adopt` consecutive children that previously started at that slot.
// Delete semantics: the node is removed and its children take its place.
struct EditOp {
  EditOpKind kind = EditOpKind::Relabel;
  NodeRef node;
  Label label;      // new label for Insert and Relabel
  Label old_label;  // Relabel only
  std::optional<NodeRef> parent;
  std::size_t position = 0;
  std::size_t adopt = 0;

  bool operator==(const EditOp&) const = default;
};

struct EditScript {
  std::vector<EditOp> ops;

  /// Unit costs: the cost is the number of operations.
  [[nodiscard]] std::size_t cost() const { return ops.size(); }
};

struct TreeDiff {
  std::size_t distance = 0;
  EditScript script;
  /// True when the pair exceeded the exact size limit and a top-down matching
  /// produced an upper bound instead.
  bool approximate = false;
};

inline constexpr std::size_t kExactNodeLimit = 2000;

/// Minimal unit-cost edit distance (Zhang-Shasha) with a matching script, for
/// combined sizes up to `exact_limit`; above that, a top-down constrained
/// matching yields an upper bound flagged as approximate.
TreeDiff tree_edit_distance(const js::Node& a, const js::Node& b, std::size_t exact_limit = kExactNodeLimit);

/// Distance only, always exact.
std::size_t exact_distance(const js::Node& a, const js::Node& b);

/// Top-down constrained distance (never below the exact distance).
std::size_t top_down_distance(const js::Node& a, const js::Node& b);

/// Applies a script to `a`. The result is a forest because scripts may delete
/// or insert roots. Throws Error(InconsistentScript) if an op does not fit.
std::vector<js::Node> apply_script(const js::Node& a, const EditScript& script);

// ---------------------------------------------------------------------------
// Classification

enum class EditClass { LiteralChange, IdentifierRename, CallArgChange, ApiCalleeChange, StructuralChange };

std::string_view to_string(EditClass cls);

struct EditClassification {
  std::map<EditClass, std::size_t> counts;

  [[nodiscard]] std::set<EditClass> classes() const;
  [[nodiscard]] bool contains(EditClass cls) const { return counts.count(cls) != 0; }
  [[nodiscard]] bool empty() const { return counts.empty(); }
  void merge(const EditClassification& other);
};

/// Assigns each operation a class. Inserted or deleted nodes whose parent is
/// inserted or deleted by the same script belong to that parent's operation
/// and are not counted again. Throws Error(InconsistentScript) if the script
/// does not turn `a` into `b`.
EditClassification classify_edit(const EditScript& script, const js::Node& a, const js::Node& b);

// ---------------------------------------------------------------------------
// Reverts and line diffs

/// Index of the most recent history entry equal to `candidate`.
std::optional<std::size_t> detect_revert(const std::vector<std::string>& history, std::string_view candidate);

/// LCS line diff. Within each gap between matched lines, paired removals and
/// additions count as changed lines; the surplus counts as added or removed.
LineDelta line_diff(std::string_view a, std::string_view b);

}  // namespace snaptrace::diff
