#include "snaptrace/jsparse/view.hpp"

#include <cctype>

namespace snaptrace::js {

namespace {

struct ViewAbort {
  ViewError error;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class ViewParser {
 public:
  explicit ViewParser(std::string_view src) : src_(src) {}

  TagTree run() {
    TagTree tree;
    tree.roots = content("");
    return tree;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::uint32_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ViewAbort{ViewError{line, col, message}};
  }

  [[nodiscard]] bool at_end() const { return pos_ >= src_.size(); }
  [[nodiscard]] bool looking_at(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string name() {
    auto start = pos_;
    while (!at_end() && name_char(src_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(src_.substr(start, pos_ - start));
  }

  // Parses children until the closing tag for `parent` (or end of input at top level).
  std::vector<TagNode> content(const std::string& parent) {
    std::vector<TagNode> kids;
    for (;;) {
      if (at_end()) {
        if (!parent.empty()) fail("unclosed <" + parent + ">");
        return kids;
      }
      if (looking_at("<!--")) {
        auto end = src_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else if (looking_at("</")) {
        pos_ += 2;
        auto closing = name();
        skip_space();
        if (at_end() || src_[pos_] != '>') fail("expected '>'");
        ++pos_;
        if (closing != parent) fail("mismatched </" + closing + ">");
        return kids;
      } else if (src_[pos_] == '<') {
        kids.push_back(element());
      } else {
        auto start = pos_;
        while (!at_end() && src_[pos_] != '<') ++pos_;
        auto text = trim(src_.substr(start, pos_ - start));
        if (!text.empty()) kids.push_back(TagNode::text(std::move(text)));
      }
    }
  }

  TagNode element() {
    ++pos_;  // '<'
    TagNode node = TagNode::element(name());
    for (;;) {
      skip_space();
      if (at_end()) fail("unterminated tag <" + node.name + ">");
      if (looking_at("/>")) {
        pos_ += 2;
        return node;
      }
      if (src_[pos_] == '>') {
        ++pos_;
        node.children = content(node.name);
        return node;
      }
      auto attr = name();
      for (const auto& [existing, _] : node.attributes) {
        if (existing == attr) fail("duplicate attribute '" + attr + "'");
      }
      std::string value;
      skip_space();
      if (!at_end() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (at_end()) fail("expected attribute value");
        char q = src_[pos_];
        if (q == '"' || q == '\'') {
          auto end = src_.find(q, pos_ + 1);
          if (end == std::string_view::npos) fail("unterminated attribute value");
          value = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
          pos_ = end + 1;
        } else {
          auto start = pos_;
          while (!at_end() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '>' &&
                 !looking_at("/>")) {
            ++pos_;
          }
          value = std::string(src_.substr(start, pos_ - start));
        }
      }
      node.attributes.emplace_back(std::move(attr), std::move(value));
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

ViewOutcome parse_view(std::string_view source) {
  try {
    return ViewParser(source).run();
  } catch (const ViewAbort& abort) {
    return abort.error;
  }
}

}  // namespace snaptrace::js
