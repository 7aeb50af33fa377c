#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snaptrace/error.hpp"

namespace snaptrace::js {

enum class TokenKind { Identifier, Number, String, Punct, Keyword, Eof };

std::string_view to_string(TokenKind kind);

struct Position {
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  std::size_t offset = 0;

  bool operator==(const Position&) const = default;
};

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string lexeme;
  Position start;
  Position end;  // one past the last byte

  [[nodiscard]] bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  [[nodiscard]] bool is_punct(std::string_view text) const { return is(TokenKind::Punct, text); }
  [[nodiscard]] bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
};

class LexError : public Error {
 public:
  LexError(Position where, const std::string& message)
      : Error(Errc::LexError, message), where_(where) {}

  [[nodiscard]] Position where() const { return where_; }

 private:
  Position where_;
};

bool is_keyword(std::string_view word);

/// Splits `source` into tokens, skipping whitespace and comments. The last token
/// is always Eof, positioned at the end of input. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

}  // namespace snaptrace::js
