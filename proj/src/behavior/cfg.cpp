#include "snaptrace/cfg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "snaptrace/jsparse/parser.hpp"

namespace snaptrace::behavior {

namespace {

using js::Node;
using js::NodeKind;

struct Pending {
  std::size_t from;
  EdgeLabel label;
};

std::string statement_text(const Node& stmt) {
  if (stmt.kind == NodeKind::FunctionDecl) return "function " + stmt.value;
  auto text = js::print_tree(Node(NodeKind::Program, "", {stmt}));
  auto nl = text.find('\n');
  if (nl != std::string::npos) text.resize(nl);
  return text;
}

class Builder {
 public:
  Cfg build(const Node& body) {
    add(CfgNodeKind::Entry, "", {});
    add(CfgNodeKind::Exit, "", {});
    std::vector<Pending> pending{{0, EdgeLabel::Fallthrough}};
    pending = sequence(body, std::move(pending));
    connect(pending, 1);
    return prune();
  }

 private:
  std::size_t add(CfgNodeKind kind, std::string text, js::Span span) {
    cfg_.nodes.push_back(CfgNode{cfg_.nodes.size(), kind, std::move(text), span});
    return cfg_.nodes.size() - 1;
  }

  void connect(const std::vector<Pending>& pending, std::size_t to) {
    for (const auto& p : pending) cfg_.edges.push_back(CfgEdge{p.from, to, p.label});
  }

  std::vector<Pending> sequence(const Node& block, std::vector<Pending> pending) {
    for (const auto& s : block.children) pending = statement(s, std::move(pending));
    return pending;
  }

  std::vector<Pending> statement(const Node& s, std::vector<Pending> pending) {
    switch (s.kind) {
      case NodeKind::Block:
        return sequence(s, std::move(pending));
      case NodeKind::If: {
        auto branch = add(CfgNodeKind::Branch, js::print_expression(s.children[0]), s.span);
        connect(pending, branch);
        auto out = statement(s.children[1], {{branch, EdgeLabel::True}});
        if (s.children.size() > 2) {
          auto other = statement(s.children[2], {{branch, EdgeLabel::False}});
          out.insert(out.end(), other.begin(), other.end());
        } else {
          out.push_back({branch, EdgeLabel::False});
        }
        if (out.empty()) return {};
        auto merge = add(CfgNodeKind::Merge, "", {});
        connect(out, merge);
        return {{merge, EdgeLabel::Fallthrough}};
      }
      case NodeKind::While: {
        auto head = add(CfgNodeKind::LoopHead, js::print_expression(s.children[0]), s.span);
        connect(pending, head);
        close_loop(head, statement(s.children[1], {{head, EdgeLabel::True}}));
        return {{head, EdgeLabel::False}};
      }
      case NodeKind::For: {
        const std::string& mask = s.value;
        std::size_t next = 0;
        const Node* init = mask.size() > 0 && mask[0] == 'I' ? &s.children[next++] : nullptr;
        const Node* test = mask.size() > 1 && mask[1] == 'T' ? &s.children[next++] : nullptr;
        const Node* update = mask.size() > 2 && mask[2] == 'U' ? &s.children[next++] : nullptr;
        const Node& body = s.children[next];
        if (init) {
          auto text = init->kind == NodeKind::VarDecl ? statement_text(*init) : js::print_expression(*init);
          auto n = add(CfgNodeKind::Stmt, std::move(text), init->span);
          connect(pending, n);
          pending = {{n, EdgeLabel::Fallthrough}};
        }
        auto head = add(CfgNodeKind::LoopHead, test ? js::print_expression(*test) : "", s.span);
        connect(pending, head);
        auto out = statement(body, {{head, EdgeLabel::True}});
        if (update) {
          auto n = add(CfgNodeKind::Stmt, js::print_expression(*update), update->span);
          connect(out, n);
          out = {{n, EdgeLabel::Fallthrough}};
        }
        close_loop(head, std::move(out));
        return {{head, EdgeLabel::False}};
      }
      case NodeKind::Return: {
        auto n = add(CfgNodeKind::Stmt, statement_text(s), s.span);
        connect(pending, n);
        cfg_.edges.push_back(CfgEdge{n, 1, EdgeLabel::Fallthrough});
        return {};
      }
      default: {
        auto n = add(CfgNodeKind::Stmt, statement_text(s), s.span);
        connect(pending, n);
        return {{n, EdgeLabel::Fallthrough}};
      }
    }
  }

  // Exactly one back edge per loop: several exits from the body, or an exit
  // that is itself a labelled branch, are joined first.
  void close_loop(std::size_t head, std::vector<Pending> out) {
    if (out.empty()) return;
    std::size_t from = out.front().from;
    if (out.size() > 1 || out.front().label != EdgeLabel::Fallthrough) {
      from = add(CfgNodeKind::Merge, "", {});
      connect(out, from);
    }
    cfg_.edges.push_back(CfgEdge{from, head, EdgeLabel::Back});
  }

  Cfg prune() {
    std::vector<bool> seen(cfg_.nodes.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      for (const auto& e : cfg_.edges) {
        if (e.from == n && !seen[e.to]) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
      }
    }
    seen[1] = true;
    Cfg out;
    std::vector<std::size_t> remap(cfg_.nodes.size(), 0);
    for (const auto& n : cfg_.nodes) {
      if (seen[n.id]) {
        remap[n.id] = out.nodes.size();
        auto copy = n;
        copy.id = out.nodes.size();
        out.nodes.push_back(std::move(copy));
      } else if (n.kind == CfgNodeKind::Stmt || n.kind == CfgNodeKind::Branch || n.kind == CfgNodeKind::LoopHead) {
        out.unreachable.push_back(std::to_string(n.span.start_line) + ":" + std::to_string(n.span.start_col) + " " +
                                  n.text);
      }
    }
    for (const auto& e : cfg_.edges) {
      if (seen[e.from] && seen[e.to]) out.edges.push_back(CfgEdge{remap[e.from], remap[e.to], e.label});
    }
    return out;
  }

  Cfg cfg_;
};

void collect_functions(const Node& n, std::vector<std::pair<std::string, const Node*>>& out) {
  auto is_fn = [](const Node& x) {
    return x.kind == NodeKind::FunctionExpr || x.kind == NodeKind::FunctionDecl ||
           (x.kind == NodeKind::ArrowFunction && x.children.back().kind == NodeKind::Block);
  };
  if (n.kind == NodeKind::FunctionDecl) {
    out.emplace_back(n.value, &n);
  } else if (n.kind == NodeKind::Property && n.children.size() == 1 && is_fn(n.children[0])) {
    out.emplace_back(n.value, &n.children[0]);
    for (const auto& c : n.children[0].children) collect_functions(c, out);
    return;
  } else if (n.kind == NodeKind::VarDecl) {
    for (const auto& d : n.children) {
      if (d.children.size() == 1 && is_fn(d.children[0])) {
        out.emplace_back(d.value, &d.children[0]);
        for (const auto& c : d.children[0].children) collect_functions(c, out);
      } else {
        for (const auto& c : d.children) collect_functions(c, out);
      }
    }
    return;
  }
  for (const auto& c : n.children) collect_functions(c, out);
}

}  // namespace

std::string_view to_string(CfgNodeKind kind) {
  switch (kind) {
    case CfgNodeKind::Entry: return "Entry";
    case CfgNodeKind::Exit: return "Exit";
    case CfgNodeKind::Stmt: return "Stmt";
    case CfgNodeKind::Branch: return "Branch";
    case CfgNodeKind::LoopHead: return "LoopHead";
    case CfgNodeKind::Merge: return "Merge";
  }
  return "?";
}

std::string_view to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Fallthrough: return "fallthrough";
    case EdgeLabel::True: return "true";
    case EdgeLabel::False: return "false";
    case EdgeLabel::Back: return "back";
  }
  return "?";
}

std::size_t Cfg::count(CfgNodeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [&](const CfgNode& n) { return n.kind == kind; }));
}

std::size_t Cfg::out_degree(std::size_t node) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const CfgEdge& e) { return e.from == node; }));
}

std::vector<std::string> Cfg::conditions() const {
  std::vector<std::string> out;
  for (const auto& n : nodes) {
    if (n.kind == CfgNodeKind::Branch || n.kind == CfgNodeKind::LoopHead) out.push_back(n.text);
  }
  return out;
}

Cfg extract_cfg(const Node& fn) {
  const bool accepted = fn.kind == NodeKind::FunctionDecl || fn.kind == NodeKind::FunctionExpr ||
                        fn.kind == NodeKind::ArrowFunction;
  if (!accepted || fn.children.empty() || fn.children.back().kind != NodeKind::Block) {
    throw std::invalid_argument("extract_cfg needs a function with a block body");
  }
  Cfg cfg = Builder().build(fn.children.back());
  cfg.function_name = fn.value;
  return cfg;
}

std::vector<std::pair<std::string, const Node*>> named_functions(const Node& program) {
  std::vector<std::pair<std::string, const Node*>> raw;
  collect_functions(program, raw);
  std::map<std::string, int> seen;
  for (auto& [name, node] : raw) {
    int n = ++seen[name];
    if (n > 1) name += "#" + std::to_string(n);
  }
  return raw;
}

std::string canonical_form(const Cfg& cfg) {
  // Depth-first numbering from Entry; out-edges of a node carry distinct
  // labels, so visiting them in label order makes the numbering canonical.
  std::vector<std::vector<const CfgEdge*>> out(cfg.nodes.size());
  for (const auto& e : cfg.edges) out[e.from].push_back(&e);
  for (auto& list : out) {
    std::sort(list.begin(), list.end(), [](const CfgEdge* a, const CfgEdge* b) { return a->label < b->label; });
  }
  std::vector<long> order(cfg.nodes.size(), -1);
  std::vector<std::size_t> visit;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (order[n] >= 0) continue;
    order[n] = static_cast<long>(visit.size());
    visit.push_back(n);
    for (auto it = out[n].rbegin(); it != out[n].rend(); ++it) stack.push_back((*it)->to);
  }
  std::string text;
  for (auto n : visit) {
    const auto& node = cfg.nodes[n];
    text += std::string(to_string(node.kind));
    if (node.kind == CfgNodeKind::Branch || node.kind == CfgNodeKind::LoopHead) text += "[" + node.text + "]";
    for (const auto* e : out[n]) text += " " + std::string(to_string(e->label)) + ">" + std::to_string(order[e->to]);
    text += "\n";
  }
  return text;
}

CfgDelta cfg_diff(const Cfg& a, const Cfg& b) {
  CfgDelta d;
  d.node_count_delta = static_cast<std::int64_t>(b.nodes.size()) - static_cast<std::int64_t>(a.nodes.size());
  d.edge_count_delta = static_cast<std::int64_t>(b.edges.size()) - static_cast<std::int64_t>(a.edges.size());
  auto ca = a.conditions();
  auto cb = b.conditions();
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
    if (ca[i] != cb[i]) d.changed_branch_conditions.emplace_back(ca[i], cb[i]);
  }
  auto la = a.count(CfgNodeKind::LoopHead);
  auto lb = b.count(CfgNodeKind::LoopHead);
  if (lb > la) d.added_loops = lb - la;
  if (la > lb) d.removed_loops = la - lb;
  d.shape_changed = canonical_form(a) != canonical_form(b) && d.changed_branch_conditions.empty() &&
                    d.node_count_delta == 0 && d.edge_count_delta == 0 && d.added_loops == 0 && d.removed_loops == 0;
  return d;
}

}  // namespace snaptrace::behavior
