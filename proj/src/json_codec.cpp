#include "snaptrace/json_codec.hpp"

#include "snaptrace/error.hpp"

namespace snaptrace {

namespace {

template <typename E, typename Parse>
E enum_field(const json& j, const char* key, Parse parse) {
  auto text = j.at(key).get<std::string>();
  auto v = parse(text);
  if (!v) throw Error(Errc::BadRequest, std::string("bad value for ") + key + ": " + text);
  return *v;
}

Timestamp ts_field(const json& j, const char* key) { return from_millis(j.at(key).get<std::int64_t>()); }

}  // namespace

void to_json(json& j, const User& u) {
  j = json{{"id", u.user_id}, {"role", to_string(u.role)}, {"salt", u.secret_salt}, {"hash", u.secret_hash}};
}

void from_json(const json& j, User& u) {
  u.user_id = j.at("id").get<std::string>();
  u.role = enum_field<UserRole>(j, "role", parse_user_role);
  u.secret_salt = j.at("salt").get<std::string>();
  u.secret_hash = j.at("hash").get<std::string>();
}

void to_json(json& j, const Question& q) {
  auto classes = json::array();
  for (auto c : q.error_classes) classes.push_back(to_string(c));
  j = json{{"id", q.question_id},
           {"kind", to_string(q.kind)},
           {"author_id", q.author_id},
           {"title", q.title},
           {"initial_snapshot_id", q.initial_snapshot_id},
           {"reference_snapshot_id", q.reference_snapshot_id},
           {"error_classes", classes},
           {"difficulty", q.difficulty},
           {"published", q.published},
           {"rank_enabled", q.rank_enabled}};
}

void from_json(const json& j, Question& q) {
  q.question_id = j.value("id", std::string());
  q.kind = enum_field<QuestionKind>(j, "kind", parse_question_kind);
  q.author_id = j.value("author_id", std::string());
  q.title = j.value("title", std::string());
  q.initial_snapshot_id = j.value("initial_snapshot_id", std::string());
  q.reference_snapshot_id = j.value("reference_snapshot_id", std::string());
  q.error_classes.clear();
  if (j.contains("error_classes")) {
    for (const auto& c : j.at("error_classes")) {
      auto v = parse_error_class(c.get<std::string>());
      if (!v) throw Error(Errc::BadRequest, "bad error class: " + c.get<std::string>());
      q.error_classes.insert(*v);
    }
  }
  q.difficulty = j.value("difficulty", 1);
  q.published = j.value("published", false);
  q.rank_enabled = j.value("rank_enabled", false);
}

void to_json(json& j, const LineDelta& d) {
  j = json{{"added", d.added}, {"removed", d.removed}, {"changed", d.changed}};
}

void from_json(const json& j, LineDelta& d) {
  d.added = j.at("added").get<std::uint64_t>();
  d.removed = j.at("removed").get<std::uint64_t>();
  d.changed = j.at("changed").get<std::uint64_t>();
}

void to_json(json& j, const HelpTicket& t) {
  j = json{{"id", t.ticket_id},
           {"session_id", t.session_id},
           {"question_id", t.question_id},
           {"asker_id", t.asker_id},
           {"form_text", t.form_text},
           {"snapshot_id", t.snapshot_id},
           {"status", to_string(t.status)},
           {"created_at", to_millis(t.created_at)},
           {"answer", nullptr}};
  if (t.answer) {
    j["answer"] = json{{"answerer_id", t.answer->answerer_id},
                       {"explanation", t.answer->explanation},
                       {"answer_snapshot_id", t.answer->answer_snapshot_id},
                       {"changed_file_diff", t.answer->changed_file_diff}};
  }
}

void from_json(const json& j, HelpTicket& t) {
  t.ticket_id = j.at("id").get<std::string>();
  t.session_id = j.at("session_id").get<std::string>();
  t.question_id = j.at("question_id").get<std::string>();
  t.asker_id = j.at("asker_id").get<std::string>();
  t.form_text = j.at("form_text").get<std::string>();
  t.snapshot_id = j.at("snapshot_id").get<std::string>();
  t.status = enum_field<TicketStatus>(j, "status", parse_ticket_status);
  t.created_at = ts_field(j, "created_at");
  t.answer.reset();
  if (j.contains("answer") && !j.at("answer").is_null()) {
    const auto& a = j.at("answer");
    TicketAnswer ans;
    ans.answerer_id = a.at("answerer_id").get<std::string>();
    ans.explanation = a.at("explanation").get<std::string>();
    ans.answer_snapshot_id = a.at("answer_snapshot_id").get<std::string>();
    ans.changed_file_diff = a.at("changed_file_diff").get<std::map<std::string, LineDelta>>();
    t.answer = std::move(ans);
  }
}

void to_json(json& j, const AuthToken& t) {
  j = json{{"id", t.token},
           {"user_id", t.user_id},
           {"issued_at", to_millis(t.issued_at)},
           {"expires_at", to_millis(t.expires_at)}};
}

void from_json(const json& j, AuthToken& t) {
  t.token = j.at("id").get<std::string>();
  t.user_id = j.at("user_id").get<std::string>();
  t.issued_at = ts_field(j, "issued_at");
  t.expires_at = ts_field(j, "expires_at");
}

void to_json(json& j, const DebugEvent& e) {
  j = json{{"event_id", e.event_id}, {"kind", to_string(e.kind)}, {"at", to_millis(e.at)}};
  j["snapshot_id"] = e.snapshot_id ? json(*e.snapshot_id) : json(nullptr);
  j["compile_ok"] = e.compile_ok ? json(*e.compile_ok) : json(nullptr);
  j["error_log"] = e.error_log ? json(*e.error_log) : json(nullptr);
}

void from_json(const json& j, DebugEvent& e) {
  e.event_id = j.at("event_id").get<std::uint64_t>();
  e.kind = enum_field<EventKind>(j, "kind", parse_event_kind);
  e.at = ts_field(j, "at");
  auto opt_string = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
  };
  e.snapshot_id = opt_string("snapshot_id");
  e.error_log = opt_string("error_log");
  e.compile_ok.reset();
  if (j.contains("compile_ok") && !j.at("compile_ok").is_null()) e.compile_ok = j.at("compile_ok").get<bool>();
}

json session_to_json(const SessionRecord& s, bool include_events) {
  json j{{"session_id", s.session_id},
         {"user_id", s.user_id},
         {"question_id", s.question_id},
         {"mode", to_string(s.mode)},
         {"state", to_string(s.state)},
         {"started_at", to_millis(s.started_at)},
         {"last_activity_at", to_millis(s.last_activity_at)},
         {"ended_at", s.ended_at ? json(to_millis(*s.ended_at)) : json(nullptr)},
         {"completed", s.completed},
         {"debug_count", s.debug_count},
         {"event_count", s.events.size()}};
  if (include_events) j["events"] = s.events;
  return j;
}

json behavior_sequence_to_json(const BehaviorSequence& seq) {
  auto labels = json::array();
  for (const auto& l : seq.labels) {
    labels.push_back({{"label", to_string(l.label)},
                      {"from_event_id", l.from_event_id},
                      {"to_event_id", l.to_event_id},
                      {"detail", l.detail ? json(*l.detail) : json(nullptr)}});
  }
  auto dirs = json::array();
  for (const auto& d : seq.directions) {
    dirs.push_back({{"direction", to_string(d.direction)},
                    {"event_id", d.event_id},
                    {"distance_to_reference", d.distance_to_reference ? json(*d.distance_to_reference) : json(nullptr)},
                    {"approximate", d.approximate}});
  }
  return json{{"labels", labels}, {"directions", dirs}, {"label_string", seq.label_string()}};
}

BehaviorSequence behavior_sequence_from_json(const json& j) {
  BehaviorSequence seq;
  for (const auto& l : j.at("labels")) {
    BehaviorLabel b;
    b.label = enum_field<Behavior>(l, "label", parse_behavior);
    b.from_event_id = l.at("from_event_id").get<std::uint64_t>();
    b.to_event_id = l.at("to_event_id").get<std::uint64_t>();
    if (!l.at("detail").is_null()) b.detail = l.at("detail").get<std::string>();
    seq.labels.push_back(std::move(b));
  }
  for (const auto& d : j.at("directions")) {
    DirectionLabel x;
    x.direction = enum_field<Direction>(d, "direction", parse_direction);
    x.event_id = d.at("event_id").get<std::uint64_t>();
    if (!d.at("distance_to_reference").is_null()) {
      x.distance_to_reference = d.at("distance_to_reference").get<std::uint64_t>();
    }
    x.approximate = d.at("approximate").get<bool>();
    seq.directions.push_back(x);
  }
  return seq;
}

json snapshot_to_json(const Snapshot& s) {
  json j = json::object();
  for (const auto& [path, rec] : s.files()) j[path] = base64_encode(rec.bytes);
  return j;
}

Snapshot snapshot_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::BadRequest, "snapshot must be an object of path to base64 bytes");
  FileMap files;
  for (const auto& [path, value] : j.items()) {
    if (!value.is_string()) throw Error(Errc::BadRequest, "snapshot file " + path + " is not a base64 string");
    try {
      files[path] = base64_decode(value.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw Error(Errc::BadRequest, "snapshot file " + path + " is not valid base64");
    }
  }
  return Snapshot::from_files(std::move(files));
}

}  // namespace snaptrace
