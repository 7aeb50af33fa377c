#include "snaptrace/behavior.hpp"

#include <set>

#include "snaptrace/astdiff.hpp"
#include "snaptrace/error.hpp"
#include "snaptrace/jsparse/snapshot_parse.hpp"

namespace snaptrace::behavior {

namespace {

struct Parsed {
  Snapshot snapshot;
  js::SnapshotParse parse;
  std::string hash;  // empty unless every logic file parsed
};

class ParseCache {
 public:
  explicit ParseCache(const SnapshotResolver& resolve) : resolve_(resolve) {}

  const Parsed& get(const std::string& id) {
    auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    Parsed p{resolve_(id), {}, {}};
    p.parse = js::parse_snapshot(p.snapshot);
    if (p.parse.logic_ok()) p.hash = js::structural_snapshot_hash(p.parse);
    return cache_.emplace(id, std::move(p)).first->second;
  }

 private:
  const SnapshotResolver& resolve_;
  std::map<std::string, Parsed> cache_;
};

std::vector<const DebugEvent*> require_saves(const SessionRecord& session) {
  auto saves = session.saves();
  if (saves.empty()) throw Error(Errc::EmptySession, "session " + session.session_id + " has no saves");
  return saves;
}

// Edit classes between two fully parsed snapshots, file by file.
diff::EditClassification classify_snapshots(const js::SnapshotParse& a, const js::SnapshotParse& b) {
  diff::EditClassification out;
  std::set<std::string> paths;
  for (const auto& [path, _] : a.logic) paths.insert(path);
  for (const auto& [path, _] : b.logic) paths.insert(path);
  for (const auto& path : paths) {
    auto ia = a.logic.find(path);
    auto ib = b.logic.find(path);
    if (ia == a.logic.end() || ib == b.logic.end()) {
      ++out.counts[diff::EditClass::StructuralChange];
      continue;
    }
    const auto& ta = js::tree_of(ia->second);
    const auto& tb = js::tree_of(ib->second);
    auto d = diff::tree_edit_distance(ta, tb);
    if (d.distance != 0) out.merge(diff::classify_edit(d.script, ta, tb));
  }
  return out;
}

std::string describe(const diff::EditClassification& c) {
  std::string out;
  for (const auto& [cls, n] : c.counts) {
    if (!out.empty()) out += ",";
    out += std::string(diff::to_string(cls)) + ":" + std::to_string(n);
  }
  return out;
}

SnapshotDistance parsed_distance(const js::SnapshotParse& a, const js::SnapshotParse& b) {
  SnapshotDistance out;
  std::set<std::string> paths;
  for (const auto& [path, _] : a.logic) paths.insert(path);
  for (const auto& [path, _] : b.logic) paths.insert(path);
  for (const auto& path : paths) {
    auto ia = a.logic.find(path);
    auto ib = b.logic.find(path);
    if (ia == a.logic.end()) {
      out.distance += js::tree_of(ib->second).size();
    } else if (ib == b.logic.end()) {
      out.distance += js::tree_of(ia->second).size();
    } else {
      auto d = diff::tree_edit_distance(js::tree_of(ia->second), js::tree_of(ib->second));
      out.distance += d.distance;
      out.approximate = out.approximate || d.approximate;
    }
  }
  return out;
}

void count_calls(const js::Node& n, const std::set<std::string, std::less<>>& prefixes, ApiStats& out) {
  if (n.kind == js::NodeKind::Call && !n.children.empty() && n.children[0].kind == js::NodeKind::Member) {
    std::vector<std::string> parts;
    const js::Node* cur = &n.children[0];
    while (cur->kind == js::NodeKind::Member) {
      parts.push_back(cur->value);
      cur = &cur->children[0];
    }
    if (cur->kind == js::NodeKind::Identifier && prefixes.count(cur->value) != 0) {
      std::string name = cur->value;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) name += "." + *it;
      ++out.calls[name];
      ++out.total_calls;
    }
  }
  for (const auto& c : n.children) count_calls(c, prefixes, out);
}

}  // namespace

BehaviorSequence label_sequence(const SessionRecord& session, const SnapshotResolver& snapshots) {
  auto saves = require_saves(session);
  ParseCache cache(snapshots);
  BehaviorSequence seq;
  std::vector<std::string> history;  // structural hashes of earlier parseable saves
  {
    const auto& first = cache.get(*saves[0]->snapshot_id);
    if (!first.hash.empty()) history.push_back(first.hash);
  }
  for (std::size_t i = 1; i < saves.size(); ++i) {
    const auto& prev = cache.get(*saves[i - 1]->snapshot_id);
    const auto& cur = cache.get(*saves[i]->snapshot_id);
    BehaviorLabel label;
    label.from_event_id = saves[i - 1]->event_id;
    label.to_event_id = saves[i]->event_id;
    const bool prev_ok = !prev.hash.empty();
    const bool cur_ok = !cur.hash.empty();
    if (prev_ok && cur_ok && prev.hash == cur.hash) {
      label.label = Behavior::NoChange;
    } else if (!prev_ok && !cur_ok) {
      label.label = prev.snapshot.id() == cur.snapshot.id() ? Behavior::NoChange : Behavior::SyntaxBreak;
    } else if (prev_ok && !cur_ok) {
      label.label = Behavior::SyntaxBreak;
    } else if (!prev_ok && cur_ok) {
      label.label = Behavior::SyntaxFix;
    } else if (auto at = diff::detect_revert(history, cur.hash)) {
      label.label = Behavior::Revert;
      label.detail = "matches save #" + std::to_string(*at + 1);
    } else {
      auto cls = classify_snapshots(prev.parse, cur.parse);
      if (cls.contains(diff::EditClass::StructuralChange)) {
        label.label = Behavior::StructEdit;
      } else if (cls.contains(diff::EditClass::ApiCalleeChange)) {
        label.label = Behavior::ApiChange;
      } else {
        label.label = Behavior::ParamTweak;
      }
      label.detail = describe(cls);
    }
    if (cur_ok) history.push_back(cur.hash);
    seq.labels.push_back(std::move(label));
  }
  return seq;
}

std::vector<DirectionLabel> annotate_direction(const SessionRecord& session, const SnapshotResolver& snapshots,
                                               const Snapshot& reference) {
  auto ref = js::parse_snapshot(reference);
  if (!ref.logic_ok()) throw Error(Errc::ReferenceUnparseable, "reference snapshot has unparseable logic files");
  auto saves = require_saves(session);
  ParseCache cache(snapshots);
  std::vector<DirectionLabel> out;
  std::optional<std::uint64_t> previous;
  for (const auto* save : saves) {
    const auto& p = cache.get(*save->snapshot_id);
    DirectionLabel d;
    d.event_id = save->event_id;
    if (p.hash.empty()) {
      d.direction = Direction::Unknown;
    } else {
      auto dist = parsed_distance(p.parse, ref);
      d.distance_to_reference = dist.distance;
      d.approximate = dist.approximate;
      if (!previous || dist.distance == *previous) {
        d.direction = Direction::Neutral;
      } else {
        d.direction = dist.distance < *previous ? Direction::Toward : Direction::Away;
      }
      previous = dist.distance;
    }
    out.push_back(d);
  }
  return out;
}

SnapshotDistance snapshot_distance(const Snapshot& a, const Snapshot& b) {
  auto pa = js::parse_snapshot(a);
  auto pb = js::parse_snapshot(b);
  if (!pa.logic_ok() || !pb.logic_ok()) throw std::invalid_argument("snapshot_distance needs parseable snapshots");
  return parsed_distance(pa, pb);
}

ApiStats api_stats(const std::vector<js::Node>& trees, const std::vector<std::string>& prefixes) {
  if (prefixes.empty()) throw std::invalid_argument("api_stats needs at least one prefix");
  std::set<std::string, std::less<>> set(prefixes.begin(), prefixes.end());
  ApiStats out;
  for (const auto& t : trees) count_calls(t, set, out);
  return out;
}

ApiStats api_stats(const Snapshot& snapshot, const std::vector<std::string>& prefixes) {
  auto parsed = js::parse_snapshot(snapshot);
  std::vector<js::Node> trees;
  for (const auto& [path, outcome] : parsed.logic) {
    if (js::parsed_ok(outcome)) trees.push_back(js::tree_of(outcome));
  }
  return api_stats(trees, prefixes);
}

}  // namespace snaptrace::behavior
