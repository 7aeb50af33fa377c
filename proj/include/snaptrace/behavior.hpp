#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "snaptrace/jsparse/ast.hpp"
#include "snaptrace/model.hpp"

namespace snaptrace::behavior {

/// Looks a snapshot up by id. Expected to throw Error(NotFound) for unknown ids.
using SnapshotResolver = std::function<Snapshot(const std::string& snapshot_id)>;

/// One label per consecutive pair of Save events. Throws Error(EmptySession)
/// when the session has no saves.
BehaviorSequence label_sequence(const SessionRecord& session, const SnapshotResolver& snapshots);

/// One direction per Save event, measured as tree distance to `reference`
/// summed over logic files. Throws Error(ReferenceUnparseable) when a logic
/// file of the reference does not parse.
std::vector<DirectionLabel> annotate_direction(const SessionRecord& session, const SnapshotResolver& snapshots,
                                               const Snapshot& reference);

/// Tree distance between two snapshots' logic layers. Unmatched files cost
/// their node count. `approximate` reports whether any file pair used the
/// upper-bound matcher. Both snapshots must parse.
struct SnapshotDistance {
  std::uint64_t distance = 0;
  bool approximate = false;
};
SnapshotDistance snapshot_distance(const Snapshot& a, const Snapshot& b);

struct ApiStats {
  std::map<std::string, std::uint64_t> calls;
  std::uint64_t total_calls = 0;
};

/// Counts calls whose callee is a member chain rooted at one of `prefixes`
/// (`wx.request(...)` is recorded as "wx.request").
ApiStats api_stats(const std::vector<js::Node>& trees, const std::vector<std::string>& prefixes);

/// Convenience over every parseable logic file of a snapshot.
ApiStats api_stats(const Snapshot& snapshot, const std::vector<std::string>& prefixes);

inline const std::vector<std::string>& default_api_prefixes() {
  static const std::vector<std::string> prefixes{"wx"};
  return prefixes;
}

}  // namespace snaptrace::behavior
