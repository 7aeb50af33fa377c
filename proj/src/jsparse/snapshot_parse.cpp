#include "snaptrace/jsparse/snapshot_parse.hpp"

#include <stdexcept>

#include "snaptrace/util.hpp"

namespace snaptrace::js {

bool SnapshotParse::logic_ok() const {
  for (const auto& [path, outcome] : logic) {
    if (!parsed_ok(outcome)) return false;
  }
  return true;
}

SnapshotParse parse_snapshot(const Snapshot& snapshot) {
  SnapshotParse out;
  for (const auto& [path, file] : snapshot.files()) {
    if (file.layer == Layer::Logic) {
      out.logic.emplace(path, parse(file.bytes));
    } else if (file.layer == Layer::View) {
      out.view.emplace(path, parse_view(file.bytes));
    }
  }
  return out;
}

std::string structural_snapshot_hash(const SnapshotParse& parsed) {
  std::string buf;
  for (const auto& [path, outcome] : parsed.logic) {
    if (!parsed_ok(outcome)) throw std::invalid_argument("structural hash of unparseable file " + path);
    buf += path;
    buf.push_back('\0');
    buf += print_tree(tree_of(outcome));
    buf.push_back('\0');
  }
  return sha256_hex(buf);
}

}  // namespace snaptrace::js
