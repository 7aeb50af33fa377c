#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace snaptrace::js {

/// An element or a text run in a view-layer (WXML) document.
struct TagNode {
  bool is_text = false;
  std::string name;  // tag name, or the trimmed text for text nodes
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<TagNode> children;

  static TagNode text(std::string content) { return TagNode{true, std::move(content), {}, {}}; }
  static TagNode element(std::string tag, std::vector<TagNode> kids = {}) {
    return TagNode{false, std::move(tag), {}, std::move(kids)};
  }

  bool operator==(const TagNode&) const = default;
};

struct TagTree {
  std::vector<TagNode> roots;

  bool operator==(const TagTree&) const = default;
};

struct ViewError {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::string message;

  bool operator==(const ViewError&) const = default;
};

using ViewOutcome = std::variant<TagTree, ViewError>;

/// Parses WXML-style markup: nested elements with quoted or bare attributes,
/// self-closing tags, comments, and text. Whitespace-only text is dropped.
ViewOutcome parse_view(std::string_view source);

}  // namespace snaptrace::js
