#pragma once

#include <map>
#include <string>

#include "snaptrace/jsparse/parser.hpp"
#include "snaptrace/jsparse/view.hpp"
#include "snaptrace/model.hpp"

namespace snaptrace::js {

struct SnapshotParse {
  std::map<std::string, ParseOutcome> logic;
  std::map<std::string, ViewOutcome> view;

  /// True when every logic-layer file parsed (vacuously true with none).
  [[nodiscard]] bool logic_ok() const;
};

/// Parses each logic and view file independently; style and other files are ignored.
SnapshotParse parse_snapshot(const Snapshot& snapshot);

/// Hash over the canonical printing of every logic tree, paths in sorted order.
/// Formatting-only edits leave it unchanged. Requires logic_ok().
std::string structural_snapshot_hash(const SnapshotParse& parsed);

}  // namespace snaptrace::js
