#include <iomanip>
#include <set>
#include <sstream>

#include "snaptrace/astdiff.hpp"
#include "snaptrace/cfg.hpp"
#include "snaptrace/error.hpp"
#include "snaptrace/jsparse/snapshot_parse.hpp"
#include "snaptrace/report.hpp"

namespace snaptrace::report {

namespace {

SessionRecord load_existing(const store::Store& store, const std::string& session_id) {
  try {
    return store.load_session(session_id);
  } catch (const Error& e) {
    if (e.code() == Errc::NotFound) throw Error(Errc::SessionNotFound, "no session " + session_id);
    throw;
  }
}

behavior::SnapshotResolver resolver_for(const store::Store& store) {
  return [&store](const std::string& id) { return store.get_snapshot(id); };
}

std::optional<Snapshot> origin_snapshot(const store::Store& store, const SessionRecord& rec) {
  if (auto q = store.get_question(rec.question_id)) return store.get_snapshot(q->initial_snapshot_id);
  if (auto t = store.get_ticket(rec.question_id)) return store.get_snapshot(t->snapshot_id);
  return std::nullopt;
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

BehaviorSequence session_analysis(const store::Store& store, const SessionRecord& session) {
  if (auto stored = store.read_analysis(session.session_id); stored && stored->contains("analysis")) {
    return behavior_sequence_from_json(stored->at("analysis"));
  }
  BehaviorSequence seq;
  if (!session.latest_save()) return seq;
  auto resolve = resolver_for(store);
  seq = behavior::label_sequence(session, resolve);
  auto q = store.get_question(session.question_id);
  if (q && !q->reference_snapshot_id.empty()) {
    try {
      seq.directions = behavior::annotate_direction(session, resolve, resolve(q->reference_snapshot_id));
    } catch (const Error& e) {
      if (e.code() != Errc::ReferenceUnparseable) throw;
    }
  }
  return seq;
}

json session_report(const store::Store& store, const std::string& session_id,
                    const std::vector<std::string>& api_prefixes) {
  auto rec = load_existing(store, session_id);
  if (rec.state != SessionState::Ended) throw Error(Errc::SessionNotEnded, "session " + session_id + " has not ended");
  auto analysis = session_analysis(store, rec);

  const auto* last = rec.latest_save();
  auto initial = origin_snapshot(store, rec);
  std::optional<Snapshot> final_snap = last ? std::optional(store.get_snapshot(*last->snapshot_id)) : initial;
  if (!initial) initial = final_snap;

  json diffs = json::object();
  json api = {{"calls", json::object()}, {"total_calls", 0}};
  auto cfg_rows = json::array();
  if (initial && final_snap) {
    std::set<std::string> paths;
    for (const auto& [p, _] : initial->files()) paths.insert(p);
    for (const auto& [p, _] : final_snap->files()) paths.insert(p);
    for (const auto& p : paths) {
      auto before = initial->files().count(p) ? initial->files().at(p).bytes : std::string();
      auto after = final_snap->files().count(p) ? final_snap->files().at(p).bytes : std::string();
      diffs[p] = diff::line_diff(before, after);
    }

    auto stats = behavior::api_stats(*final_snap, api_prefixes);
    api = {{"calls", stats.calls}, {"total_calls", stats.total_calls}};

    auto pa = js::parse_snapshot(*initial);
    auto pb = js::parse_snapshot(*final_snap);
    for (const auto& [path, oa] : pa.logic) {
      auto it = pb.logic.find(path);
      if (it == pb.logic.end() || !js::parsed_ok(oa) || !js::parsed_ok(it->second)) continue;
      auto fa = behavior::named_functions(js::tree_of(oa));
      auto fb = behavior::named_functions(js::tree_of(it->second));
      std::map<std::string, const js::Node*> by_name(fb.begin(), fb.end());
      for (const auto& [name, fn] : fa) {
        auto match = by_name.find(name);
        if (match == by_name.end()) continue;
        auto d = behavior::cfg_diff(behavior::extract_cfg(*fn), behavior::extract_cfg(*match->second));
        auto conds = json::array();
        for (const auto& [from, to] : d.changed_branch_conditions) conds.push_back({{"from", from}, {"to", to}});
        cfg_rows.push_back({{"file", path},
                            {"function", name},
                            {"node_count_delta", d.node_count_delta},
                            {"edge_count_delta", d.edge_count_delta},
                            {"changed_branch_conditions", conds},
                            {"added_loops", d.added_loops},
                            {"removed_loops", d.removed_loops},
                            {"shape_changed", d.shape_changed},
                            {"empty", d.empty()}});
      }
    }
  }

  return json{{"session_id", rec.session_id},
              {"user_id", rec.user_id},
              {"question_id", rec.question_id},
              {"mode", to_string(rec.mode)},
              {"completed", rec.completed},
              {"debug_count", rec.debug_count},
              {"elapsed_seconds",
               std::chrono::duration_cast<std::chrono::seconds>(*rec.ended_at - rec.started_at).count()},
              {"initial_snapshot_id", initial ? json(initial->id()) : json(nullptr)},
              {"final_snapshot_id", final_snap ? json(final_snap->id()) : json(nullptr)},
              {"behavior", behavior_sequence_to_json(analysis)},
              {"line_diff", diffs},
              {"api_stats", api},
              {"cfg_diff", cfg_rows}};
}

std::string render_session_report_text(const json& r) {
  std::ostringstream out;
  out << "session " << r.at("session_id").get<std::string>() << " (user " << r.at("user_id").get<std::string>()
      << ", question " << r.at("question_id").get<std::string>() << ", mode " << r.at("mode").get<std::string>()
      << ")\n";
  out << "completed: " << (r.at("completed").get<bool>() ? "yes" : "no")
      << "  debugs: " << r.at("debug_count").get<std::uint64_t>()
      << "  elapsed: " << r.at("elapsed_seconds").get<std::int64_t>() << "s\n\n";

  const auto& b = r.at("behavior");
  out << "behavior labels: " << b.at("label_string").get<std::string>() << "\n";
  for (const auto& l : b.at("labels")) {
    out << "  #" << l.at("from_event_id").get<std::uint64_t>() << " -> #" << l.at("to_event_id").get<std::uint64_t>()
        << "  " << l.at("label").get<std::string>();
    if (!l.at("detail").is_null()) out << "  (" << l.at("detail").get<std::string>() << ")";
    out << "\n";
  }
  if (!b.at("directions").empty()) {
    out << "directions:\n";
    for (const auto& d : b.at("directions")) {
      out << "  #" << d.at("event_id").get<std::uint64_t>() << "  " << d.at("direction").get<std::string>();
      if (!d.at("distance_to_reference").is_null()) {
        out << "  distance " << d.at("distance_to_reference").get<std::uint64_t>();
        if (d.at("approximate").get<bool>()) out << " (approximate)";
      }
      out << "\n";
    }
  }

  out << "\nline diff (final vs initial): file  added  removed  changed\n";
  for (const auto& [path, d] : r.at("line_diff").items()) {
    out << "  " << path << "  " << d.at("added").get<std::uint64_t>() << "  " << d.at("removed").get<std::uint64_t>()
        << "  " << d.at("changed").get<std::uint64_t>() << "\n";
  }

  const auto& api = r.at("api_stats");
  out << "\napi calls in final snapshot: " << api.at("total_calls").get<std::uint64_t>() << "\n";
  for (const auto& [name, n] : api.at("calls").items()) out << "  " << name << "  " << n.get<std::uint64_t>() << "\n";

  out << "\ncontrol flow changes:\n";
  for (const auto& c : r.at("cfg_diff")) {
    out << "  " << c.at("file").get<std::string>() << " " << c.at("function").get<std::string>() << ": ";
    if (c.at("empty").get<bool>()) {
      out << "unchanged\n";
      continue;
    }
    out << "nodes " << std::showpos << c.at("node_count_delta").get<std::int64_t>() << " edges "
        << c.at("edge_count_delta").get<std::int64_t>() << std::noshowpos << " loops +"
        << c.at("added_loops").get<std::uint64_t>() << "/-" << c.at("removed_loops").get<std::uint64_t>();
    if (c.at("shape_changed").get<bool>()) out << " shape changed";
    out << "\n";
    for (const auto& cond : c.at("changed_branch_conditions")) {
      out << "    condition '" << cond.at("from").get<std::string>() << "' -> '" << cond.at("to").get<std::string>()
          << "'\n";
    }
  }
  return out.str();
}

json cluster_report(const store::Store& store, std::size_t k, std::uint64_t seed) {
  std::map<std::string, std::string> labels;
  for (const auto& id : store.list_sessions()) {
    auto rec = store.load_session(id);
    if (rec.state != SessionState::Ended || rec.saves().size() < 2) continue;
    labels[id] = session_analysis(store, rec).label_string();
  }
  auto result = behavior::cluster_sessions(labels, k, seed);
  auto clusters = json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back({{"cluster_id", c.cluster_id},
                        {"medoid_session_id", c.medoid_session_id},
                        {"medoid_labels", labels.at(c.medoid_session_id)},
                        {"member_session_ids", c.member_session_ids},
                        {"intra_mean_distance", c.intra_mean_distance}});
  }
  return json{{"k", k},
              {"seed", seed},
              {"sessions", labels.size()},
              {"cost", result.cost},
              {"silhouette", result.silhouette ? json(*result.silhouette) : json(nullptr)},
              {"clusters", clusters}};
}

std::string render_cluster_report_text(const json& r) {
  std::ostringstream out;
  out << "k=" << r.at("k").get<std::size_t>() << " seed=" << r.at("seed").get<std::uint64_t>()
      << " sessions=" << r.at("sessions").get<std::size_t>() << " cost=" << r.at("cost").get<std::uint64_t>()
      << " silhouette="
      << (r.at("silhouette").is_null() ? std::string("—") : fixed(r.at("silhouette").get<double>(), 4)) << "\n";
  for (const auto& c : r.at("clusters")) {
    out << "cluster " << c.at("cluster_id").get<std::size_t>() << ": medoid "
        << c.at("medoid_session_id").get<std::string>() << " [" << c.at("medoid_labels").get<std::string>() << "] "
        << c.at("member_session_ids").size() << " members, mean distance "
        << fixed(c.at("intra_mean_distance").get<double>(), 4) << "\n";
    for (const auto& m : c.at("member_session_ids")) out << "  " << m.get<std::string>() << "\n";
  }
  return out.str();
}

}  // namespace snaptrace::report
