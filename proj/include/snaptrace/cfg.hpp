#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snaptrace/jsparse/ast.hpp"

namespace snaptrace::behavior {

enum class CfgNodeKind { Entry, Exit, Stmt, Branch, LoopHead, Merge };
enum class EdgeLabel { Fallthrough, True, False, Back };

std::string_view to_string(CfgNodeKind kind);
std::string_view to_string(EdgeLabel label);

struct CfgNode {
  std::size_t id = 0;
  CfgNodeKind kind = CfgNodeKind::Stmt;
  /// Condition text for Branch and LoopHead, a short statement rendering for Stmt.
  std::string text;
  js::Span span;
};

struct CfgEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeLabel label = EdgeLabel::Fallthrough;
};

struct Cfg {
  std::string function_name;
  std::vector<CfgNode> nodes;  // nodes[0] is Entry, nodes[1] is Exit
  std::vector<CfgEdge> edges;
  /// Statements that no path from Entry reaches; they are not in `nodes`.
  std::vector<std::string> unreachable;

  [[nodiscard]] std::size_t count(CfgNodeKind kind) const;
  [[nodiscard]] std::size_t out_degree(std::size_t node) const;
  /// Branch and loop conditions in program order.
  [[nodiscard]] std::vector<std::string> conditions() const;
};

/// Builds the graph of one function. Accepts FunctionDecl, FunctionExpr, or an
/// ArrowFunction with a Block body; throws std::invalid_argument otherwise.
Cfg extract_cfg(const js::Node& fn);

/// Named functions in a program: declarations, object-literal methods, and
/// variables initialized with a function. Repeated names get a "#n" suffix.
std::vector<std::pair<std::string, const js::Node*>> named_functions(const js::Node& program);

struct CfgDelta {
  std::int64_t node_count_delta = 0;
  std::int64_t edge_count_delta = 0;
  std::vector<std::pair<std::string, std::string>> changed_branch_conditions;
  std::uint64_t added_loops = 0;
  std::uint64_t removed_loops = 0;
  /// Set when the graphs are not isomorphic even though every count matches.
  bool shape_changed = false;

  [[nodiscard]] bool empty() const {
    return node_count_delta == 0 && edge_count_delta == 0 && changed_branch_conditions.empty() && added_loops == 0 &&
           removed_loops == 0 && !shape_changed;
  }
};

CfgDelta cfg_diff(const Cfg& a, const Cfg& b);

/// Span-free canonical form; equal strings mean isomorphic graphs.
std::string canonical_form(const Cfg& cfg);

}  // namespace snaptrace::behavior
