#include <cctype>
#include <stdexcept>

#include "snaptrace/jsparse/parser.hpp"

namespace snaptrace::js {

namespace {

// Binding strength, loosest first.
enum Prec : int {
  kAssign = 1,
  kOr,
  kAnd,
  kEquality,
  kRelational,
  kAdditive,
  kMultiplicative,
  kUnary,
  kPostfix,
  kCall,
  kPrimary,
};

int binary_prec(const std::string& op) {
  if (op == "||") return kOr;
  if (op == "&&") return kAnd;
  if (op == "==" || op == "!=" || op == "===" || op == "!==") return kEquality;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof" || op == "in") return kRelational;
  if (op == "+" || op == "-") return kAdditive;
  return kMultiplicative;
}

bool is_postfix(const Node& n) { return n.kind == NodeKind::Unary && n.value.size() == 3 && n.value[0] == 'x'; }

int prec_of(const Node& n) {
  switch (n.kind) {
    case NodeKind::Assign:
    case NodeKind::ArrowFunction: return kAssign;
    case NodeKind::Binary: return binary_prec(n.value);
    case NodeKind::Unary: return is_postfix(n) ? kPostfix : kUnary;
    case NodeKind::Call:
    case NodeKind::Member:
    case NodeKind::Index: return kCall;
    default: return kPrimary;
  }
}

bool starts_with_word(const std::string& s, std::string_view word) {
  if (s.compare(0, word.size(), word) != 0) return false;
  if (s.size() == word.size()) return true;
  char c = s[word.size()];
  return !(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$');
}

class Printer {
 public:
  std::string program(const Node& prog) {
    std::string out;
    for (const auto& stmt : prog.children) {
      out += statement(stmt, 0);
      out += '\n';
    }
    return out;
  }

  std::string expr(const Node& n, int indent, int min_prec = kAssign) {
    auto text = raw_expr(n, indent);
    if (prec_of(n) < min_prec) return "(" + text + ")";
    return text;
  }

  std::string statement(const Node& n, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (n.kind) {
      case NodeKind::VarDecl: return pad + var_decl(n, indent) + ";";
      case NodeKind::FunctionDecl: return pad + function(n, indent);
      case NodeKind::Block: return pad + block(n, indent);
      case NodeKind::If: return pad + if_chain(n, indent);
      case NodeKind::While: return pad + "while (" + expr(n.children[0], indent) + ")" + body(n.children[1], indent);
      case NodeKind::For: return pad + for_loop(n, indent);
      case NodeKind::Return:
        if (n.children.empty()) return pad + "return;";
        return pad + "return " + expr(n.children[0], indent) + ";";
      case NodeKind::ExprStmt: {
        auto text = expr(n.children[0], indent);
        // A leading '{' or 'function' would re-parse as a block or declaration.
        if (text.starts_with("{") || starts_with_word(text, "function")) text = "(" + text + ")";
        return pad + text + ";";
      }
      default: throw std::invalid_argument("not a statement: " + std::string(to_string(n.kind)));
    }
  }

 private:
  std::string block(const Node& blk, int indent) {
    if (blk.children.empty()) return "{}";
    std::string out = "{\n";
    for (const auto& stmt : blk.children) {
      out += statement(stmt, indent + 1);
      out += '\n';
    }
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += '}';
    return out;
  }

  // Suffix for a loop/branch header: braces stay on the header line, other
  // statements go on their own indented line.
  std::string body(const Node& stmt, int indent) {
    if (stmt.kind == NodeKind::Block) return " " + block(stmt, indent);
    return "\n" + statement(stmt, indent + 1);
  }

  std::string if_chain(const Node& n, int indent) {
    std::string out = "if (" + expr(n.children[0], indent) + ")" + body(n.children[1], indent);
    if (n.children.size() < 3) return out;
    const Node& alt = n.children[2];
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    out += n.children[1].kind == NodeKind::Block ? " else" : "\n" + pad + "else";
    if (alt.kind == NodeKind::If) return out + " " + if_chain(alt, indent);
    return out + body(alt, indent);
  }

  std::string var_decl(const Node& n, int indent) {
    std::string out = n.value + " ";
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i > 0) out += ", ";
      const auto& d = n.children[i];
      out += d.value;
      if (!d.children.empty()) out += " = " + expr(d.children[0], indent);
    }
    return out;
  }

  std::string for_loop(const Node& n, int indent) {
    std::size_t next = 0;
    std::string out = "for (";
    if (n.value[0] == 'I') {
      const auto& init = n.children[next++];
      out += init.kind == NodeKind::VarDecl ? var_decl(init, indent) : expr(init, indent);
    }
    out += ";";
    if (n.value[1] == 'T') out += " " + expr(n.children[next++], indent);
    out += ";";
    if (n.value[2] == 'U') out += " " + expr(n.children[next++], indent);
    out += ")";
    return out + body(n.children[next], indent);
  }

  std::string params(const Node& fn, std::size_t count) {
    std::string out = "(";
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0) out += ", ";
      out += fn.children[i].value;
    }
    return out + ")";
  }

  std::string function(const Node& fn, int indent) {
    std::string out = "function";
    if (!fn.value.empty()) out += " " + fn.value;
    else out += " ";
    out += params(fn, fn.children.size() - 1);
    return out + " " + block(fn.children.back(), indent);
  }

  std::string raw_expr(const Node& n, int indent) {
    switch (n.kind) {
      case NodeKind::Identifier:
      case NodeKind::NumberLit:
      case NodeKind::StringLit:
      case NodeKind::BoolLit:
      case NodeKind::NullLit: return n.value;
      case NodeKind::Assign:
        return expr(n.children[0], indent, kCall) + " " + n.value + " " + expr(n.children[1], indent, kAssign);
      case NodeKind::Binary: {
        int p = binary_prec(n.value);
        return expr(n.children[0], indent, p) + " " + n.value + " " + expr(n.children[1], indent, p + 1);
      }
      case NodeKind::Unary: {
        if (is_postfix(n)) return expr(n.children[0], indent, kCall) + n.value.substr(1);
        if (n.value == "new") return "new " + expr(n.children[0], indent, kCall);
        auto operand = expr(n.children[0], indent, kUnary);
        if (n.value == "typeof" || n.value == "void" || n.value == "delete") return n.value + " " + operand;
        // Keep "- -x" from fusing into "--x".
        if ((n.value == "-" || n.value == "+" || n.value == "--" || n.value == "++") &&
            (operand.starts_with("-") || operand.starts_with("+"))) {
          return n.value + " " + operand;
        }
        return n.value + operand;
      }
      case NodeKind::Call: {
        std::string out = expr(n.children[0], indent, kCall) + "(";
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          if (i > 1) out += ", ";
          out += expr(n.children[i], indent);
        }
        return out + ")";
      }
      case NodeKind::Member: {
        const auto& obj = n.children[0];
        auto text = expr(obj, indent, kCall);
        if (obj.kind == NodeKind::NumberLit) text = "(" + text + ")";
        return text + "." + n.value;
      }
      case NodeKind::Index:
        return expr(n.children[0], indent, kCall) + "[" + expr(n.children[1], indent) + "]";
      case NodeKind::ArrayLit: {
        std::string out = "[";
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (i > 0) out += ", ";
          out += expr(n.children[i], indent);
        }
        return out + "]";
      }
      case NodeKind::ObjectLit: {
        std::string out = "{";
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (i > 0) out += ", ";
          out += n.children[i].value + ": " + expr(n.children[i].children[0], indent);
        }
        return out + "}";
      }
      case NodeKind::FunctionExpr: return function(n, indent);
      case NodeKind::ArrowFunction: {
        std::string out = params(n, n.children.size() - 1) + " => ";
        const auto& fbody = n.children.back();
        if (fbody.kind == NodeKind::Block) return out + block(fbody, indent);
        auto text = expr(fbody, indent);
        if (text.starts_with("{")) text = "(" + text + ")";
        return out + text;
      }
      default: throw std::invalid_argument("not an expression: " + std::string(to_string(n.kind)));
    }
  }
};

}  // namespace

std::string print_tree(const Node& program) { return Printer().program(program); }

std::string print_expression(const Node& expr) { return Printer().expr(expr, 0); }

}  // namespace snaptrace::js
