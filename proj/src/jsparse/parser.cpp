#include "snaptrace/jsparse/parser.hpp"

#include <array>
#include <vector>

#include "snaptrace/jsparse/lexer.hpp"

namespace snaptrace::js {

namespace {

struct Abort {
  ParseError error;
};

constexpr std::array<std::string_view, 6> kAssignOps{"=", "+=", "-=", "*=", "/=", "%="};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& opts) : toks_(std::move(tokens)), opts_(opts) {}

  Node program() {
    Node prog(NodeKind::Program);
    while (!peek_is_eof()) prog.children.push_back(statement());
    if (opts_.track_spans) {
      const auto& last = toks_.back();
      prog.span = Span{1, 1, last.end.line, last.end.col};
    }
    return prog;
  }

 private:
  // --- token helpers -----------------------------------------------------

  [[nodiscard]] const Token& peek(std::size_t ahead = 0) const {
    auto i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  [[nodiscard]] bool peek_is_eof() const { return peek().kind == TokenKind::Eof; }
  [[nodiscard]] bool at_punct(std::string_view p) const { return peek().is_punct(p); }
  [[nodiscard]] bool at_keyword(std::string_view k) const { return peek().is_keyword(k); }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != TokenKind::Eof) ++pos_;
    return t;
  }

  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const auto& t = peek();
    throw Abort{ParseError{t.start.line, t.start.col, t.start.offset, message,
                           t.kind == TokenKind::Eof ? std::string("<EOF>") : t.lexeme}};
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }

  std::string expect_identifier(const char* what) {
    if (peek().kind != TokenKind::Identifier) fail(std::string("expected ") + what);
    return take().lexeme;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > p.opts_.max_depth) p.fail("nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  // Stamps the span covering tokens [first, pos_).
  Node finish(Node n, std::size_t first) const {
    if (opts_.track_spans) {
      const auto& a = toks_[first];
      const auto& b = toks_[pos_ > first ? pos_ - 1 : first];
      n.span = Span{a.start.line, a.start.col, b.end.line, b.end.col};
    }
    return n;
  }

  Node leaf(NodeKind kind, std::string value) {
    auto first = pos_;
    take();
    return finish(Node(kind, std::move(value)), first);
  }

  // --- statements --------------------------------------------------------

  Node statement() {
    DepthGuard guard(*this);
    const auto& t = peek();
    if (t.kind == TokenKind::Keyword) {
      if (t.lexeme == "var" || t.lexeme == "let" || t.lexeme == "const") {
        auto first = pos_;
        auto decl = var_decl();
        expect_punct(";");
        return finish(std::move(decl), first);
      }
      if (t.lexeme == "function") return function(NodeKind::FunctionDecl);
      if (t.lexeme == "if") return if_statement();
      if (t.lexeme == "while") return while_statement();
      if (t.lexeme == "for") return for_statement();
      if (t.lexeme == "return") return return_statement();
    }
    if (t.is_punct("{")) return block();
    auto first = pos_;
    Node stmt(NodeKind::ExprStmt);
    stmt.children.push_back(expression());
    expect_punct(";");
    return finish(std::move(stmt), first);
  }

  Node var_decl() {
    auto first = pos_;
    Node decl(NodeKind::VarDecl, take().lexeme);
    do {
      auto name_at = pos_;
      Node id(NodeKind::Identifier, expect_identifier("variable name"));
      if (accept_punct("=")) id.children.push_back(assignment());
      decl.children.push_back(finish(std::move(id), name_at));
    } while (accept_punct(","));
    return finish(std::move(decl), first);
  }

  Node function(NodeKind kind) {
    DepthGuard guard(*this);
    auto first = pos_;
    take();  // 'function'
    Node fn(kind);
    if (kind == NodeKind::FunctionDecl) {
      fn.value = expect_identifier("function name");
    } else if (peek().kind == TokenKind::Identifier) {
      fn.value = take().lexeme;
    }
    parameters(fn);
    if (!at_punct("{")) fail("expected '{'");
    fn.children.push_back(block());
    return finish(std::move(fn), first);
  }

  void parameters(Node& fn) {
    expect_punct("(");
    if (!at_punct(")")) {
      do {
        auto at = pos_;
        fn.children.push_back(finish(Node(NodeKind::Identifier, expect_identifier("parameter name")), at));
      } while (accept_punct(","));
    }
    expect_punct(")");
  }

  Node block() {
    DepthGuard guard(*this);
    auto first = pos_;
    expect_punct("{");
    Node blk(NodeKind::Block);
    while (!at_punct("}")) {
      if (peek_is_eof()) fail("expected '}'");
      blk.children.push_back(statement());
    }
    take();
    return finish(std::move(blk), first);
  }

  Node if_statement() {
    auto first = pos_;
    take();
    expect_punct("(");
    Node node(NodeKind::If);
    node.children.push_back(expression());
    expect_punct(")");
    node.children.push_back(statement());
    if (at_keyword("else")) {
      take();
      node.children.push_back(statement());
    }
    return finish(std::move(node), first);
  }

  Node while_statement() {
    auto first = pos_;
    take();
    expect_punct("(");
    Node node(NodeKind::While);
    node.children.push_back(expression());
    expect_punct(")");
    node.children.push_back(statement());
    return finish(std::move(node), first);
  }

  Node for_statement() {
    auto first = pos_;
    take();
    expect_punct("(");
    Node node(NodeKind::For, "---");
    if (!at_punct(";")) {
      node.value[0] = 'I';
      if (at_keyword("var") || at_keyword("let") || at_keyword("const")) {
        node.children.push_back(var_decl());
      } else {
        node.children.push_back(expression());
      }
    }
    expect_punct(";");
    if (!at_punct(";")) {
      node.value[1] = 'T';
      node.children.push_back(expression());
    }
    expect_punct(";");
    if (!at_punct(")")) {
      node.value[2] = 'U';
      node.children.push_back(expression());
    }
    expect_punct(")");
    node.children.push_back(statement());
    return finish(std::move(node), first);
  }

  Node return_statement() {
    auto first = pos_;
    take();
    Node node(NodeKind::Return);
    if (!at_punct(";")) node.children.push_back(expression());
    expect_punct(";");
    return finish(std::move(node), first);
  }

  // --- expressions -------------------------------------------------------

  Node expression() { return assignment(); }

  // Finds the token after the ')' matching the '(' at the current position.
  [[nodiscard]] const Token& after_matching_paren() const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const auto& t = toks_[i];
      if (t.is_punct("(")) ++depth;
      if (t.is_punct(")") && --depth == 0) return toks_[std::min(i + 1, toks_.size() - 1)];
      if (t.kind == TokenKind::Eof) break;
    }
    return toks_.back();
  }

  bool at_arrow() const {
    if (peek().kind == TokenKind::Identifier && peek(1).is_punct("=>")) return true;
    return at_punct("(") && after_matching_paren().is_punct("=>");
  }

  Node arrow() {
    DepthGuard guard(*this);
    auto first = pos_;
    Node fn(NodeKind::ArrowFunction);
    if (peek().kind == TokenKind::Identifier) {
      fn.children.push_back(leaf(NodeKind::Identifier, peek().lexeme));
    } else {
      parameters(fn);
    }
    expect_punct("=>");
    if (at_punct("{")) {
      fn.children.push_back(block());
    } else {
      fn.children.push_back(assignment());
    }
    return finish(std::move(fn), first);
  }

  Node assignment() {
    DepthGuard guard(*this);
    if (at_arrow()) return arrow();
    auto first = pos_;
    auto lhs = logical_or();
    for (auto op : kAssignOps) {
      if (at_punct(op)) {
        if (lhs.kind != NodeKind::Identifier && lhs.kind != NodeKind::Member && lhs.kind != NodeKind::Index) {
          fail("invalid assignment target");
        }
        take();
        Node node(NodeKind::Assign, std::string(op));
        node.children.push_back(std::move(lhs));
        node.children.push_back(assignment());
        return finish(std::move(node), first);
      }
    }
    return lhs;
  }

  template <typename Next>
  Node binary_level(std::initializer_list<std::string_view> ops, Next next, bool keyword_ops = false) {
    auto first = pos_;
    auto lhs = (this->*next)();
    for (;;) {
      const auto& t = peek();
      bool matched = false;
      for (auto op : ops) {
        if ((keyword_ops && t.is_keyword(op)) || t.is_punct(op)) {
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
      Node node(NodeKind::Binary, take().lexeme);
      node.children.push_back(std::move(lhs));
      node.children.push_back((this->*next)());
      lhs = finish(std::move(node), first);
    }
  }

  Node logical_or() { return binary_level({"||"}, &Parser::logical_and); }
  Node logical_and() { return binary_level({"&&"}, &Parser::equality); }
  Node equality() { return binary_level({"===", "!==", "==", "!="}, &Parser::relational); }
  Node relational() {
    return binary_level({"<", ">", "<=", ">=", "instanceof", "in"}, &Parser::additive, true);
  }
  Node additive() { return binary_level({"+", "-"}, &Parser::multiplicative); }
  Node multiplicative() { return binary_level({"*", "/", "%"}, &Parser::unary); }

  Node unary() {
    DepthGuard guard(*this);
    auto first = pos_;
    const auto& t = peek();
    bool prefix = false;
    if (t.kind == TokenKind::Punct) {
      prefix = t.lexeme == "!" || t.lexeme == "-" || t.lexeme == "+" || t.lexeme == "~" || t.lexeme == "++" ||
               t.lexeme == "--";
    } else if (t.kind == TokenKind::Keyword) {
      prefix = t.lexeme == "typeof" || t.lexeme == "void" || t.lexeme == "delete";
    }
    if (prefix) {
      Node node(NodeKind::Unary, take().lexeme);
      node.children.push_back(unary());
      return finish(std::move(node), first);
    }
    if (t.is_keyword("new")) {
      take();
      Node node(NodeKind::Unary, "new");
      node.children.push_back(call_member());
      return finish(std::move(node), first);
    }
    auto operand = call_member();
    if (at_punct("++") || at_punct("--")) {
      Node node(NodeKind::Unary, "x" + take().lexeme);
      node.children.push_back(std::move(operand));
      return finish(std::move(node), first);
    }
    return operand;
  }

  Node call_member() {
    auto first = pos_;
    auto expr = primary();
    for (;;) {
      if (accept_punct(".")) {
        const auto& name = peek();
        if (name.kind != TokenKind::Identifier && name.kind != TokenKind::Keyword) fail("expected property name");
        Node node(NodeKind::Member, take().lexeme);
        node.children.push_back(std::move(expr));
        expr = finish(std::move(node), first);
      } else if (accept_punct("[")) {
        Node node(NodeKind::Index);
        node.children.push_back(std::move(expr));
        node.children.push_back(expression());
        expect_punct("]");
        expr = finish(std::move(node), first);
      } else if (at_punct("(")) {
        take();
        Node node(NodeKind::Call);
        node.children.push_back(std::move(expr));
        if (!at_punct(")")) {
          do {
            node.children.push_back(assignment());
          } while (accept_punct(","));
        }
        expect_punct(")");
        expr = finish(std::move(node), first);
      } else {
        return expr;
      }
    }
  }

  Node primary() {
    DepthGuard guard(*this);
    const auto& t = peek();
    switch (t.kind) {
      case TokenKind::Identifier: return leaf(NodeKind::Identifier, t.lexeme);
      case TokenKind::Number: return leaf(NodeKind::NumberLit, t.lexeme);
      case TokenKind::String: return leaf(NodeKind::StringLit, t.lexeme);
      case TokenKind::Keyword:
        if (t.lexeme == "true" || t.lexeme == "false") return leaf(NodeKind::BoolLit, t.lexeme);
        if (t.lexeme == "null") return leaf(NodeKind::NullLit, t.lexeme);
        if (t.lexeme == "this") return leaf(NodeKind::Identifier, t.lexeme);
        if (t.lexeme == "function") return function(NodeKind::FunctionExpr);
        break;
      case TokenKind::Punct:
        if (t.lexeme == "(") {
          take();
          auto inner = expression();
          expect_punct(")");
          return inner;
        }
        if (t.lexeme == "[") return array_literal();
        if (t.lexeme == "{") return object_literal();
        break;
      case TokenKind::Eof:
        fail("unexpected end of input");
    }
    fail("unexpected token '" + t.lexeme + "'");
  }

  Node array_literal() {
    auto first = pos_;
    take();
    Node node(NodeKind::ArrayLit);
    while (!at_punct("]")) {
      node.children.push_back(assignment());
      if (!accept_punct(",")) break;
    }
    expect_punct("]");
    return finish(std::move(node), first);
  }

  Node object_literal() {
    auto first = pos_;
    take();
    Node node(NodeKind::ObjectLit);
    while (!at_punct("}")) {
      auto prop_at = pos_;
      const auto& key = peek();
      if (key.kind != TokenKind::Identifier && key.kind != TokenKind::Keyword && key.kind != TokenKind::String &&
          key.kind != TokenKind::Number) {
        fail("expected property key");
      }
      Node prop(NodeKind::Property, take().lexeme);
      if (at_punct("(")) {
        // Method shorthand: key(params) { body }.
        auto fn_at = pos_;
        Node fn(NodeKind::FunctionExpr);
        parameters(fn);
        if (!at_punct("{")) fail("expected '{'");
        fn.children.push_back(block());
        prop.children.push_back(finish(std::move(fn), fn_at));
      } else {
        expect_punct(":");
        prop.children.push_back(assignment());
      }
      node.children.push_back(finish(std::move(prop), prop_at));
      if (!accept_punct(",")) break;
    }
    expect_punct("}");
    return finish(std::move(node), first);
  }

  std::vector<Token> toks_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace

ParseOutcome parse(std::string_view source, const ParseOptions& options) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(source);
  } catch (const LexError& e) {
    auto where = e.where();
    std::string lexeme = where.offset < source.size() ? std::string(1, source[where.offset]) : "<EOF>";
    return ParseError{where.line, where.col, where.offset, e.what(), lexeme};
  }
  try {
    Parser parser(std::move(tokens), options);
    return parser.program();
  } catch (const Abort& abort) {
    return abort.error;
  }
}

}  // namespace snaptrace::js
