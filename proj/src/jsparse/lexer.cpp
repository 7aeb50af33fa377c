#include "snaptrace/jsparse/lexer.hpp"

#include <array>
#include <cctype>

namespace snaptrace::js {

namespace {

constexpr std::array<std::string_view, 33> kKeywords{
    "var",    "let",      "const",  "function", "if",     "else",   "while",  "for",    "return",
    "true",   "false",    "null",   "this",     "new",    "typeof", "void",   "delete", "in",
    "instanceof", "do",   "break",  "continue", "switch", "case",   "default", "try",   "catch",
    "finally", "throw",   "class",  "yield",    "async",  "await",
};

// Longest first so a greedy scan picks the longest operator.
constexpr std::array<std::string_view, 50> kPuncts{
    ">>>=", "===", "!==", ">>>", "<<=", ">>=", "...", "=>", "==", "!=", "<=", ">=", "&&", "||",
    "++",   "--",  "+=",  "-=",  "*=",  "/=",  "%=",  "&=", "|=", "^=", "<<", ">>", "(",  ")",
    "{",    "}",   "[",   "]",   ";",   ",",   ".",   "<",  ">",  "+",  "-",  "*",  "/",  "%",
    "!",    "=",   ":",   "?",   "~",   "&",  "|",  "^",
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) {
        out.push_back(Token{TokenKind::Eof, "", pos_, pos_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  [[nodiscard]] bool at_end() const { return pos_.offset >= src_.size(); }
  [[nodiscard]] unsigned char peek(std::size_t ahead = 0) const {
    auto i = pos_.offset + ahead;
    return i < src_.size() ? static_cast<unsigned char>(src_[i]) : 0;
  }

  void advance() {
    if (src_[pos_.offset] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++pos_.offset;
  }

  void skip_trivia() {
    while (!at_end()) {
      auto c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        auto start = pos_;
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) throw LexError(start, "unterminated block comment");
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, Position start) {
    return Token{kind, std::string(src_.substr(start.offset, pos_.offset - start.offset)), start, pos_};
  }

  Token next() {
    auto start = pos_;
    auto c = peek();
    if (ident_start(c)) {
      while (!at_end() && ident_part(peek())) advance();
      auto tok = make(TokenKind::Identifier, start);
      if (is_keyword(tok.lexeme)) tok.kind = TokenKind::Keyword;
      return tok;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(peek(1)))) return number(start);
    if (c == '"' || c == '\'') return string(start, static_cast<char>(c));
    for (auto p : kPuncts) {
      if (src_.substr(pos_.offset, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        return make(TokenKind::Punct, start);
      }
    }
    throw LexError(start, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
  }

  Token number(Position start) {
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance();
      advance();
      if (!std::isxdigit(peek())) throw LexError(start, "malformed hex literal");
      while (std::isxdigit(peek())) advance();
    } else {
      while (std::isdigit(peek())) advance();
      if (peek() == '.') {
        advance();
        while (std::isdigit(peek())) advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t k = 1;
        if (peek(1) == '+' || peek(1) == '-') k = 2;
        if (!std::isdigit(peek(k))) throw LexError(pos_, "malformed exponent");
        for (std::size_t i = 0; i < k; ++i) advance();
        while (std::isdigit(peek())) advance();
      }
    }
    if (ident_start(peek())) throw LexError(pos_, "identifier directly after number");
    return make(TokenKind::Number, start);
  }

  Token string(Position start, char quote) {
    advance();
    for (;;) {
      if (at_end() || peek() == '\n') throw LexError(start, "unterminated string");
      auto c = peek();
      if (c == '\\') {
        advance();
        if (at_end()) throw LexError(start, "unterminated string");
        advance();
        continue;
      }
      advance();
      if (c == static_cast<unsigned char>(quote)) break;
    }
    return make(TokenKind::String, start);
  }

  std::string_view src_;
  Position pos_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::Number: return "Number";
    case TokenKind::String: return "String";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Eof: return "EOF";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace snaptrace::js
