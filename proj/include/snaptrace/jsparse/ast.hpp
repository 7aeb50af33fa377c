#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snaptrace::js {

enum class NodeKind {
  Program,
  FunctionDecl,
  VarDecl,
  Block,
  If,
  While,
  For,
  Return,
  ExprStmt,
  Assign,
  Binary,
  Unary,
  Call,
  Member,
  Index,
  Identifier,
  NumberLit,
  StringLit,
  BoolLit,
  NullLit,
  ObjectLit,
  ArrayLit,
  FunctionExpr,
  ArrowFunction,
  Property,
};

inline constexpr std::size_t kNodeKindCount = 25;

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

bool is_statement(NodeKind kind);
bool is_literal(NodeKind kind);

struct Span {
  std::uint32_t start_line = 0;
  std::uint32_t start_col = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_col = 0;

  bool operator==(const Span&) const = default;
};

// Shapes (children in order; `value` in brackets):
//   Program        statements...
//   FunctionDecl   [name] params(Identifier)... Block
//   FunctionExpr   [name or ""] params(Identifier)... Block
//   ArrowFunction  params(Identifier)... body (Block or expression)
//   VarDecl        [var|let|const] declarators: Identifier[name] with optional initializer child
//   Block          statements...
//   If             cond then [else]
//   While          cond body
//   For            [mask "ITU": which of init/test/update are present, '-' otherwise]
//                  present parts in order, then body; init is VarDecl or expression
//   Return         [expression]
//   ExprStmt       expression
//   Assign         [op] target value
//   Binary         [op] lhs rhs
//   Unary          [op] operand; postfix forms use op "x++" / "x--", `new` uses op "new"
//   Call           callee args...
//   Member         [property name] object
//   Index          object index
//   Property       [key lexeme] value
//   ObjectLit      Property...
//   ArrayLit       elements...
//   leaves         [identifier name or literal lexeme]
struct Node {
  NodeKind kind = NodeKind::Program;
  std::string value;
  std::vector<Node> children;
  Span span;

  Node() = default;
  Node(NodeKind k, std::string v = {}, std::vector<Node> c = {}, Span s = {})
      : kind(k), value(std::move(v)), children(std::move(c)), span(s) {}

  [[nodiscard]] std::size_t size() const;
};

/// Kind/value/children comparison; spans are ignored.
bool structurally_equal(const Node& a, const Node& b);

/// Hash of kind/value/children (spans ignored), stable across runs.
std::uint64_t structural_hash(const Node& node);

/// S-expression rendering for diagnostics and test messages.
std::string to_sexpr(const Node& node);

}  // namespace snaptrace::js
