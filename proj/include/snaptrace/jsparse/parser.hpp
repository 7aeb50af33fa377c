#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "snaptrace/jsparse/ast.hpp"

namespace snaptrace::js {

struct ParseError {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::size_t offset = 0;
  std::string message;
  std::string offending_lexeme;

  bool operator==(const ParseError&) const = default;
};

/// Exactly one of a tree or an error per file.
using ParseOutcome = std::variant<Node, ParseError>;

inline bool parsed_ok(const ParseOutcome& o) { return std::holds_alternative<Node>(o); }
inline const Node& tree_of(const ParseOutcome& o) { return std::get<Node>(o); }
inline const ParseError& error_of(const ParseOutcome& o) { return std::get<ParseError>(o); }

struct ParseOptions {
  bool track_spans = true;
  std::size_t max_depth = 512;
};

/// Recursive-descent parse of the logic-layer language. The first error aborts
/// the parse; there is no recovery.
ParseOutcome parse(std::string_view source, const ParseOptions& options = {});

/// Canonical source text for a well-formed tree. Re-parsing the output yields a
/// structurally equal tree.
std::string print_tree(const Node& program);

/// Canonical text of a single expression node (used for branch conditions).
std::string print_expression(const Node& expr);

}  // namespace snaptrace::js
