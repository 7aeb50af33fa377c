#include "snaptrace/jsparse/ast.hpp"

#include <array>

namespace snaptrace::js {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kNames{
    "Program",  "FunctionDecl", "VarDecl",    "Block",     "If",         "While",        "For",
    "Return",   "ExprStmt",     "Assign",     "Binary",    "Unary",      "Call",         "Member",
    "Index",    "Identifier",   "NumberLit",  "StringLit", "BoolLit",    "NullLit",      "ObjectLit",
    "ArrayLit", "FunctionExpr", "ArrowFunction", "Property",
};

// FNV-1a, 64 bit.
void mix(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
}

void hash_into(std::uint64_t& h, const Node& n) {
  mix(h, "(");
  mix(h, kNames[static_cast<std::size_t>(n.kind)]);
  mix(h, "\x1f");
  mix(h, n.value);
  for (const auto& c : n.children) hash_into(h, c);
  mix(h, ")");
}

void sexpr_into(std::string& out, const Node& n) {
  out += '(';
  out += kNames[static_cast<std::size_t>(n.kind)];
  if (!n.value.empty()) {
    out += ' ';
    out += n.value;
  }
  for (const auto& c : n.children) {
    out += ' ';
    sexpr_into(out, c);
  }
  out += ')';
}

}  // namespace

std::string_view to_string(NodeKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

bool is_statement(NodeKind kind) {
  switch (kind) {
    case NodeKind::FunctionDecl:
    case NodeKind::VarDecl:
    case NodeKind::Block:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::For:
    case NodeKind::Return:
    case NodeKind::ExprStmt:
      return true;
    default:
      return false;
  }
}

bool is_literal(NodeKind kind) {
  return kind == NodeKind::NumberLit || kind == NodeKind::StringLit || kind == NodeKind::BoolLit ||
         kind == NodeKind::NullLit;
}

std::size_t Node::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.value != b.value || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

std::uint64_t structural_hash(const Node& node) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  hash_into(h, node);
  return h;
}

std::string to_sexpr(const Node& node) {
  std::string out;
  sexpr_into(out, node);
  return out;
}

}  // namespace snaptrace::js
