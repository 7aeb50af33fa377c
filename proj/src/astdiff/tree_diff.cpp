#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "flat_tree.hpp"
#include "snaptrace/astdiff.hpp"
#include "snaptrace/error.hpp"

namespace snaptrace::diff {

namespace {

using Mapping = std::vector<std::pair<std::size_t, std::size_t>>;

std::uint32_t relabel_cost(const FlatTree& a, std::size_t i, const FlatTree& b, std::size_t j) {
  const auto& x = *a.node[i];
  const auto& y = *b.node[j];
  return (x.kind == y.kind && x.value == y.value) ? 0 : 1;
}

// Zhang & Shasha's keyroot dynamic program. Fills the subtree-distance table
// for every node pair, then recovers one optimal mapping by walking the
// forest-distance tables back from the root pair.
class ZhangShasha {
 public:
  ZhangShasha(const FlatTree& a, const FlatTree& b) : a_(a), b_(b), td_(a.size() * b.size(), 0) {
    for (auto i : keyroots(a_)) {
      for (auto j : keyroots(b_)) forest(i, j);
    }
  }

  [[nodiscard]] std::size_t distance() const { return td(a_.size() - 1, b_.size() - 1); }

  Mapping mapping() {
    Mapping out;
    std::vector<std::pair<std::size_t, std::size_t>> pending{{a_.size() - 1, b_.size() - 1}};
    while (!pending.empty()) {
      auto [i, j] = pending.back();
      pending.pop_back();
      forest(i, j);
      const std::size_t li = a_.lml[i], lj = b_.lml[j];
      const std::size_t cols = j - lj + 2;
      auto at = [&](std::size_t r, std::size_t c) { return fd_[r * cols + c]; };
      std::size_t r = i - li + 1, c = j - lj + 1;
      while (r > 0 || c > 0) {
        if (r > 0 && at(r - 1, c) + 1 == at(r, c)) {
          --r;
        } else if (c > 0 && at(r, c - 1) + 1 == at(r, c)) {
          --c;
        } else {
          const std::size_t x = li + r - 1, y = lj + c - 1;
          if (a_.lml[x] == li && b_.lml[y] == lj) {
            out.emplace_back(x, y);
            --r;
            --c;
          } else {
            pending.emplace_back(x, y);
            r = a_.lml[x] - li;
            c = b_.lml[y] - lj;
          }
        }
      }
    }
    return out;
  }

 private:
  static std::vector<std::size_t> keyroots(const FlatTree& t) {
    std::vector<std::size_t> out;
    std::vector<bool> seen(t.size(), false);
    for (std::size_t k = t.size(); k-- > 0;) {
      if (!seen[t.lml[k]]) {
        seen[t.lml[k]] = true;
        out.push_back(k);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  [[nodiscard]] std::uint32_t td(std::size_t i, std::size_t j) const { return td_[i * b_.size() + j]; }

  void forest(std::size_t i, std::size_t j) {
    const std::size_t li = a_.lml[i], lj = b_.lml[j];
    const std::size_t rows = i - li + 2, cols = j - lj + 2;
    fd_.assign(rows * cols, 0);
    auto at = [&](std::size_t r, std::size_t c) -> std::uint32_t& { return fd_[r * cols + c]; };
    for (std::size_t r = 1; r < rows; ++r) at(r, 0) = at(r - 1, 0) + 1;
    for (std::size_t c = 1; c < cols; ++c) at(0, c) = at(0, c - 1) + 1;
    for (std::size_t r = 1; r < rows; ++r) {
      const std::size_t x = li + r - 1;
      for (std::size_t c = 1; c < cols; ++c) {
        const std::size_t y = lj + c - 1;
        std::uint32_t best = std::min(at(r - 1, c), at(r, c - 1)) + 1;
        if (a_.lml[x] == li && b_.lml[y] == lj) {
          best = std::min(best, at(r - 1, c - 1) + relabel_cost(a_, x, b_, y));
          at(r, c) = best;
          td_[x * b_.size() + y] = best;
        } else {
          best = std::min(best, at(a_.lml[x] - li, b_.lml[y] - lj) + td(x, y));
          at(r, c) = best;
        }
      }
    }
  }

  const FlatTree& a_;
  const FlatTree& b_;
  std::vector<std::uint32_t> td_;
  std::vector<std::uint32_t> fd_;
};

// Top-down constrained matching: roots are matched to roots and children
// sequences are aligned, each child pair recursing. Unmatched subtrees are
// deleted or inserted whole.
class TopDown {
 public:
  TopDown(const FlatTree& a, const FlatTree& b) : a_(a), b_(b) {}

  std::size_t dist(std::size_t i, std::size_t j) {
    auto key = (static_cast<std::uint64_t>(i) << 32) | j;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto table = align(i, j);
    const auto& ca = a_.children[i];
    const auto& cb = b_.children[j];
    std::size_t d = relabel_cost(a_, i, b_, j) + table[ca.size() * (cb.size() + 1) + cb.size()];
    memo_.emplace(key, d);
    return d;
  }

  void mapping(std::size_t i, std::size_t j, Mapping& out) {
    out.emplace_back(i, j);
    auto table = align(i, j);
    const auto& ca = a_.children[i];
    const auto& cb = b_.children[j];
    const std::size_t cols = cb.size() + 1;
    std::size_t r = ca.size(), c = cb.size();
    while (r > 0 || c > 0) {
      if (r > 0 && table[(r - 1) * cols + c] + a_.subtree_size(ca[r - 1]) == table[r * cols + c]) {
        --r;
      } else if (c > 0 && table[r * cols + c - 1] + b_.subtree_size(cb[c - 1]) == table[r * cols + c]) {
        --c;
      } else {
        mapping(ca[r - 1], cb[c - 1], out);
        --r;
        --c;
      }
    }
  }

 private:
  std::vector<std::size_t> align(std::size_t i, std::size_t j) {
    const auto& ca = a_.children[i];
    const auto& cb = b_.children[j];
    const std::size_t cols = cb.size() + 1;
    std::vector<std::size_t> t((ca.size() + 1) * cols, 0);
    for (std::size_t r = 1; r <= ca.size(); ++r) t[r * cols] = t[(r - 1) * cols] + a_.subtree_size(ca[r - 1]);
    for (std::size_t c = 1; c <= cb.size(); ++c) t[c] = t[c - 1] + b_.subtree_size(cb[c - 1]);
    for (std::size_t r = 1; r <= ca.size(); ++r) {
      for (std::size_t c = 1; c <= cb.size(); ++c) {
        t[r * cols + c] = std::min({t[(r - 1) * cols + c] + a_.subtree_size(ca[r - 1]),
                                    t[r * cols + c - 1] + b_.subtree_size(cb[c - 1]),
                                    t[(r - 1) * cols + c - 1] + dist(ca[r - 1], cb[c - 1])});
      }
    }
    return t;
  }

  const FlatTree& a_;
  const FlatTree& b_;
  std::unordered_map<std::uint64_t, std::size_t> memo_;
};

// --- working forest used both to generate and to apply scripts -------------

struct WNode {
  NodeRef id;
  Label label;
  std::vector<WNode> kids;
};

using Forest = std::vector<WNode>;

WNode build_working(const js::Node& n, std::size_t& counter) {
  WNode w;
  for (const auto& c : n.children) w.kids.push_back(build_working(c, counter));
  w.id = NodeRef{NodeRef::Side::Source, counter++};
  w.label = Label{n.kind, n.value};
  return w;
}

// Returns the sibling list holding `id` and its index, or nullptr.
std::pair<std::vector<WNode>*, std::size_t> locate(std::vector<WNode>& list, const NodeRef& id) {
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (list[k].id == id) return {&list, k};
    auto found = locate(list[k].kids, id);
    if (found.first) return found;
  }
  return {nullptr, 0};
}

[[noreturn]] void inconsistent(const std::string& why) { throw Error(Errc::InconsistentScript, why); }

void apply_op(Forest& forest, const EditOp& op) {
  switch (op.kind) {
    case EditOpKind::Relabel: {
      auto [list, k] = locate(forest, op.node);
      if (!list) inconsistent("relabel of missing node");
      if (!((*list)[k].label == op.old_label)) inconsistent("relabel old label mismatch");
      (*list)[k].label = op.label;
      return;
    }
    case EditOpKind::Delete: {
      auto [list, k] = locate(forest, op.node);
      if (!list) inconsistent("delete of missing node");
      auto kids = std::move((*list)[k].kids);
      list->erase(list->begin() + static_cast<std::ptrdiff_t>(k));
      list->insert(list->begin() + static_cast<std::ptrdiff_t>(k), std::make_move_iterator(kids.begin()),
                   std::make_move_iterator(kids.end()));
      return;
    }
    case EditOpKind::Insert: {
      std::vector<WNode>* siblings = &forest;
      if (op.parent) {
        auto [list, k] = locate(forest, *op.parent);
        if (!list) inconsistent("insert under missing parent");
        siblings = &(*list)[k].kids;
      }
      if (op.position + op.adopt > siblings->size()) inconsistent("insert range out of bounds");
      if (locate(forest, op.node).first) inconsistent("inserted node id already present");
      WNode fresh{op.node, op.label, {}};
      auto first = siblings->begin() + static_cast<std::ptrdiff_t>(op.position);
      auto last = first + static_cast<std::ptrdiff_t>(op.adopt);
      fresh.kids.assign(std::make_move_iterator(first), std::make_move_iterator(last));
      siblings->erase(first, last);
      siblings->insert(siblings->begin() + static_cast<std::ptrdiff_t>(op.position), std::move(fresh));
      return;
    }
  }
}

js::Node to_node(const WNode& w) {
  js::Node n(w.label.kind, w.label.value);
  for (const auto& k : w.kids) n.children.push_back(to_node(k));
  return n;
}

void preorder(const FlatTree& t, std::size_t i, std::vector<std::size_t>& out) {
  out.push_back(i);
  for (auto c : t.children[i]) preorder(t, c, out);
}

EditScript script_from_mapping(const FlatTree& a, const FlatTree& b, const Mapping& mapping) {
  std::vector<std::optional<std::size_t>> a_to_b(a.size()), b_to_a(b.size());
  for (auto [x, y] : mapping) {
    a_to_b[x] = y;
    b_to_a[y] = x;
  }

  std::size_t counter = 0;
  Forest work{build_working(*a.node.back(), counter)};
  EditScript script;
  auto emit = [&](EditOp op) {
    apply_op(work, op);
    script.ops.push_back(std::move(op));
  };

  for (auto [x, y] : mapping) {
    Label from{a.node[x]->kind, a.node[x]->value};
    Label to{b.node[y]->kind, b.node[y]->value};
    if (!(from == to)) {
      EditOp op;
      op.kind = EditOpKind::Relabel;
      op.node = {NodeRef::Side::Source, x};
      op.old_label = from;
      op.label = to;
      emit(std::move(op));
    }
  }
  std::sort(script.ops.begin(), script.ops.end(),
            [](const EditOp& l, const EditOp& r) { return l.node.index < r.node.index; });

  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a_to_b[x]) continue;
    EditOp op;
    op.kind = EditOpKind::Delete;
    op.node = {NodeRef::Side::Source, x};
    op.old_label = {a.node[x]->kind, a.node[x]->value};
    emit(std::move(op));
  }

  auto b_index = [&](const WNode& w) -> std::size_t {
    if (w.id.side == NodeRef::Side::Target) return w.id.index;
    return *a_to_b[w.id.index];
  };

  std::vector<std::size_t> order;
  preorder(b, b.size() - 1, order);
  for (auto y : order) {
    if (b_to_a[y]) continue;
    EditOp op;
    op.kind = EditOpKind::Insert;
    op.node = {NodeRef::Side::Target, y};
    op.label = {b.node[y]->kind, b.node[y]->value};
    std::vector<WNode>* siblings = &work;
    if (b.parent[y] >= 0) {
      auto p = static_cast<std::size_t>(b.parent[y]);
      op.parent = b_to_a[p] ? NodeRef{NodeRef::Side::Source, *b_to_a[p]} : NodeRef{NodeRef::Side::Target, p};
      auto [list, k] = locate(work, *op.parent);
      if (!list) throw std::logic_error("insert parent missing while building script");
      siblings = &(*list)[k].kids;
    }
    const std::size_t lo = b.lml[y];
    for (const auto& s : *siblings) {
      auto bi = b_index(s);
      if (bi < lo) ++op.position;
      else if (bi < y) ++op.adopt;
    }
    emit(std::move(op));
  }
  return script;
}

}  // namespace

TreeDiff tree_edit_distance(const js::Node& a, const js::Node& b, std::size_t exact_limit) {
  FlatTree fa(a), fb(b);
  TreeDiff out;
  Mapping mapping;
  if (fa.size() + fb.size() <= exact_limit) {
    ZhangShasha zs(fa, fb);
    out.distance = zs.distance();
    mapping = zs.mapping();
  } else {
    TopDown td(fa, fb);
    out.distance = td.dist(fa.size() - 1, fb.size() - 1);
    td.mapping(fa.size() - 1, fb.size() - 1, mapping);
    out.approximate = true;
  }
  out.script = script_from_mapping(fa, fb, mapping);
  if (out.script.cost() != out.distance) throw std::logic_error("edit script cost disagrees with distance");
  return out;
}

std::size_t exact_distance(const js::Node& a, const js::Node& b) {
  FlatTree fa(a), fb(b);
  return ZhangShasha(fa, fb).distance();
}

std::size_t top_down_distance(const js::Node& a, const js::Node& b) {
  FlatTree fa(a), fb(b);
  return TopDown(fa, fb).dist(fa.size() - 1, fb.size() - 1);
}

std::vector<js::Node> apply_script(const js::Node& a, const EditScript& script) {
  std::size_t counter = 0;
  Forest work{build_working(a, counter)};
  for (const auto& op : script.ops) apply_op(work, op);
  std::vector<js::Node> out;
  for (const auto& w : work) out.push_back(to_node(w));
  return out;
}

}  // namespace snaptrace::diff
