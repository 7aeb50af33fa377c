#include <algorithm>
#include <set>

#include "flat_tree.hpp"
#include "snaptrace/astdiff.hpp"
#include "snaptrace/error.hpp"
#include "snaptrace/util.hpp"

namespace snaptrace::diff {

namespace {

using js::NodeKind;

std::size_t child_slot(const FlatTree& t, std::size_t i) {
  const auto& sibs = t.children[static_cast<std::size_t>(t.parent[i])];
  return static_cast<std::size_t>(std::find(sibs.begin(), sibs.end(), i) - sibs.begin());
}

// True when `i` is the callee of a call, or sits on the object path of one
// (`wx` and `request` in `wx.request(...)`).
bool in_callee_chain(const FlatTree& t, std::size_t i) {
  while (t.parent[i] >= 0) {
    auto p = static_cast<std::size_t>(t.parent[i]);
    if (child_slot(t, i) != 0) return false;
    auto k = t.node[p]->kind;
    if (k == NodeKind::Call) return true;
    if (k != NodeKind::Member && k != NodeKind::Index) return false;
    i = p;
  }
  return false;
}

// True when `i` lies inside an argument of a call within the same statement.
bool in_call_args(const FlatTree& t, std::size_t i) {
  while (t.parent[i] >= 0) {
    auto p = static_cast<std::size_t>(t.parent[i]);
    if (js::is_statement(t.node[p]->kind)) return false;
    if (t.node[p]->kind == NodeKind::Call && child_slot(t, i) > 0) return true;
    i = p;
  }
  return false;
}

bool renamable(NodeKind k) { return k == NodeKind::Identifier || k == NodeKind::Member || k == NodeKind::Property; }

bool operator_node(NodeKind k) { return k == NodeKind::Binary || k == NodeKind::Unary || k == NodeKind::Assign; }

EditClass classify_relabel(const FlatTree& a, std::size_t x, const Label& to) {
  const auto from = a.node[x]->kind;
  if (js::is_statement(from) || js::is_statement(to.kind)) return EditClass::StructuralChange;
  if (in_callee_chain(a, x)) return EditClass::ApiCalleeChange;
  if (js::is_literal(from) && js::is_literal(to.kind)) return EditClass::LiteralChange;
  if (from == to.kind && renamable(from)) return EditClass::IdentifierRename;
  if (in_call_args(a, x)) return EditClass::CallArgChange;
  if (from == to.kind && operator_node(from)) return EditClass::LiteralChange;
  return EditClass::StructuralChange;
}

EditClass classify_shape(const FlatTree& t, std::size_t i) {
  if (js::is_statement(t.node[i]->kind)) return EditClass::StructuralChange;
  if (in_callee_chain(t, i)) return EditClass::ApiCalleeChange;
  if (in_call_args(t, i)) return EditClass::CallArgChange;
  return EditClass::StructuralChange;
}

}  // namespace

std::string_view to_string(EditClass cls) {
  switch (cls) {
    case EditClass::LiteralChange: return "LiteralChange";
    case EditClass::IdentifierRename: return "IdentifierRename";
    case EditClass::CallArgChange: return "CallArgChange";
    case EditClass::ApiCalleeChange: return "ApiCalleeChange";
    case EditClass::StructuralChange: return "StructuralChange";
  }
  return "?";
}

std::set<EditClass> EditClassification::classes() const {
  std::set<EditClass> out;
  for (const auto& [cls, n] : counts) out.insert(cls);
  return out;
}

void EditClassification::merge(const EditClassification& other) {
  for (const auto& [cls, n] : other.counts) counts[cls] += n;
}

EditClassification classify_edit(const EditScript& script, const js::Node& a, const js::Node& b) {
  auto result = apply_script(a, script);
  if (result.size() != 1 || !js::structurally_equal(result.front(), b)) {
    throw Error(Errc::InconsistentScript, "script does not transform the source into the target");
  }
  FlatTree fa(a), fb(b);
  std::set<std::size_t> deleted, inserted;
  for (const auto& op : script.ops) {
    if (op.kind == EditOpKind::Delete && op.node.side == NodeRef::Side::Source) deleted.insert(op.node.index);
    if (op.kind == EditOpKind::Insert && op.node.side == NodeRef::Side::Target) inserted.insert(op.node.index);
  }

  EditClassification out;
  for (const auto& op : script.ops) {
    const bool source = op.node.side == NodeRef::Side::Source;
    const FlatTree& t = source ? fa : fb;
    const std::size_t i = op.node.index;
    if (i >= t.size()) throw Error(Errc::InconsistentScript, "operation refers to a node outside the tree");
    switch (op.kind) {
      case EditOpKind::Relabel:
        if (!source) throw Error(Errc::InconsistentScript, "relabel must name a source node");
        ++out.counts[classify_relabel(fa, i, op.label)];
        break;
      case EditOpKind::Delete:
      case EditOpKind::Insert: {
        const auto& grouped = op.kind == EditOpKind::Delete ? deleted : inserted;
        if (t.parent[i] >= 0 && grouped.count(static_cast<std::size_t>(t.parent[i])) != 0) break;
        ++out.counts[classify_shape(t, i)];
        break;
      }
    }
  }
  return out;
}

std::optional<std::size_t> detect_revert(const std::vector<std::string>& history, std::string_view candidate) {
  for (std::size_t k = history.size(); k-- > 0;) {
    if (history[k] == candidate) return k;
  }
  return std::nullopt;
}

LineDelta line_diff(std::string_view a, std::string_view b) {
  auto la = split_lines(a);
  auto lb = split_lines(b);
  std::size_t head = 0;
  while (head < la.size() && head < lb.size() && la[head] == lb[head]) ++head;
  std::size_t tail = 0;
  while (tail < la.size() - head && tail < lb.size() - head && la[la.size() - 1 - tail] == lb[lb.size() - 1 - tail]) {
    ++tail;
  }
  const std::size_t n = la.size() - head - tail, m = lb.size() - head - tail;
  auto A = [&](std::size_t i) { return la[head + i]; };
  auto B = [&](std::size_t j) { return lb[head + j]; };

  // lcs[i][j] = LCS length of the suffixes starting at i and j.
  std::vector<std::uint32_t> lcs((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return lcs[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = A(i) == B(j) ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }

  LineDelta out;
  std::uint64_t gap_removed = 0, gap_added = 0;
  auto close_gap = [&] {
    auto paired = std::min(gap_removed, gap_added);
    out.changed += paired;
    out.removed += gap_removed - paired;
    out.added += gap_added - paired;
    gap_removed = gap_added = 0;
  };
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && A(i) == B(j)) {
      close_gap();
      ++i;
      ++j;
    } else if (j == m || (i < n && at(i + 1, j) >= at(i, j + 1))) {
      ++gap_removed;
      ++i;
    } else {
      ++gap_added;
      ++j;
    }
  }
  close_gap();
  return out;
}

}  // namespace snaptrace::diff
