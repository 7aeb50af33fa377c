#pragma once

#include <cstddef>
#include <vector>

#include "snaptrace/jsparse/ast.hpp"

namespace snaptrace::diff {

// Post-order view of a tree: node[i] is the i-th node in post-order.
struct FlatTree {
  std::vector<const js::Node*> node;
  std::vector<std::size_t> lml;  // leftmost leaf descendant
  std::vector<std::ptrdiff_t> parent;
  std::vector<std::vector<std::size_t>> children;

  explicit FlatTree(const js::Node& root) { visit(root); }

  [[nodiscard]] std::size_t size() const { return node.size(); }
  [[nodiscard]] std::size_t subtree_size(std::size_t i) const { return i - lml[i] + 1; }

 private:
  std::size_t visit(const js::Node& n) {
    std::vector<std::size_t> kids;
    kids.reserve(n.children.size());
    for (const auto& c : n.children) kids.push_back(visit(c));
    const std::size_t self = node.size();
    node.push_back(&n);
    lml.push_back(kids.empty() ? self : lml[kids.front()]);
    parent.push_back(-1);
    for (auto k : kids) parent[k] = static_cast<std::ptrdiff_t>(self);
    children.push_back(std::move(kids));
    return self;
  }
};

}  // namespace snaptrace::diff
