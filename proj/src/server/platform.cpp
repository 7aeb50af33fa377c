#include <algorithm>
#include <set>

#include "snaptrace/astdiff.hpp"
#include "snaptrace/behavior.hpp"
#include "snaptrace/error.hpp"
#include "snaptrace/jsparse/snapshot_parse.hpp"
#include "snaptrace/server.hpp"
#include "snaptrace/util.hpp"

namespace snaptrace::server {

namespace {

bool is_staff(UserRole role) { return role != UserRole::Student; }

std::int64_t whole_seconds(Timestamp from, Timestamp to) {
  return std::chrono::duration_cast<std::chrono::seconds>(to - from).count();
}

// Logic distance zero and every other file byte-identical.
bool same_program(const Snapshot& initial, const Snapshot& reference) {
  if (initial.id() == reference.id()) return true;
  auto parsed = js::parse_snapshot(initial);
  if (!parsed.logic_ok()) return false;
  if (behavior::snapshot_distance(initial, reference).distance != 0) return false;
  std::map<std::string, std::string> a, b;
  for (const auto& [path, rec] : initial.files()) {
    if (layer_for_path(path) != Layer::Logic) a[path] = rec.bytes;
  }
  for (const auto& [path, rec] : reference.files()) {
    if (layer_for_path(path) != Layer::Logic) b[path] = rec.bytes;
  }
  return a == b;
}

}  // namespace

std::string hash_secret(std::string_view salt, std::string_view secret) {
  std::string material(salt);
  material += secret;
  return sha256_hex(material);
}

User make_user(std::string user_id, UserRole role, std::string_view secret) {
  if (!store::valid_record_id(user_id)) throw Error(Errc::BadRequest, "invalid user id: " + user_id);
  User u;
  u.user_id = std::move(user_id);
  u.role = role;
  u.secret_salt = random_hex(16);
  u.secret_hash = hash_secret(u.secret_salt, secret);
  return u;
}

Platform::Platform(store::Store& store, Config config, Clock clock)
    : store_(store), config_(std::move(config)), clock_(std::move(clock)) {
  for (const auto& id : store_.list_sessions()) {
    auto live = std::make_shared<Live>();
    live->record = store_.load_session(id);
    sessions_.emplace(id, std::move(live));
  }
}

Platform::~Platform() = default;

// ---------------------------------------------------------------------------
// Authentication

AuthToken Platform::login(const std::string& user_id, const std::string& secret) {
  auto user = store_.get_user(user_id);
  if (!user || hash_secret(user->secret_salt, secret) != user->secret_hash) {
    throw Error(Errc::AuthFailed, "unknown user or wrong secret");
  }
  AuthToken token;
  token.token = random_hex(32);
  token.user_id = user_id;
  token.issued_at = clock_();
  token.expires_at = token.issued_at + kTokenLifetime;
  store_.put_token(token);
  return token;
}

User Platform::authenticate(const std::string& token) const {
  if (token.empty()) throw Error(Errc::AuthFailed, "missing token");
  auto stored = store::valid_record_id(token) ? store_.get_token(token) : std::nullopt;
  if (!stored) throw Error(Errc::AuthFailed, "unknown token");
  if (clock_() >= stored->expires_at) throw Error(Errc::AuthExpired, "token expired");
  auto user = store_.get_user(stored->user_id);
  if (!user) throw Error(Errc::AuthFailed, "token user no longer exists");
  return *user;
}

// ---------------------------------------------------------------------------
// Sessions

std::shared_ptr<Platform::Live> Platform::find_live(const std::string& session_id) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(Errc::SessionNotFound, "no session " + session_id);
  return it->second;
}

bool Platform::expire_if_idle(Live& live, Timestamp now) {
  auto& rec = live.record;
  if (rec.state != SessionState::Active || now - rec.last_activity_at <= config_.session_timeout) return false;
  store_.append_state(rec.session_id, SessionState::TimedOut, now);
  rec.transition(SessionState::TimedOut, now);
  return true;
}

Question Platform::published_question(const std::string& question_id) const {
  auto q = store::valid_record_id(question_id) ? store_.get_question(question_id) : std::nullopt;
  if (!q || !q->published) throw Error(Errc::QuestionNotFound, "no published question " + question_id);
  return *q;
}

Snapshot Platform::session_origin(const SessionRecord& record) const {
  if (record.question_id.empty()) return Snapshot{};  // free debugging on local code
  if (auto q = store_.get_question(record.question_id)) return store_.get_snapshot(q->initial_snapshot_id);
  if (auto t = store_.get_ticket(record.question_id)) return store_.get_snapshot(t->snapshot_id);
  throw Error(Errc::QuestionNotFound, "session origin " + record.question_id + " is gone");
}

StartResult Platform::start_session(const std::string& token, const std::string& question_id, SessionMode mode) {
  auto user = authenticate(token);
  const auto now = clock_();

  std::string origin_snapshot;
  auto ticket = (mode == SessionMode::FreeDebug || mode == SessionMode::Troubleshoot) &&
                        store::valid_record_id(question_id)
                    ? store_.get_ticket(question_id)
                    : std::nullopt;
  if (mode == SessionMode::Troubleshoot) {
    if (!can_answer_tickets(user.role)) throw Error(Errc::Forbidden, "troubleshooting is for teaching assistants");
    if (!ticket) throw Error(Errc::TicketNotFound, "no ticket " + question_id);
  }
  if (ticket) {
    origin_snapshot = ticket->snapshot_id;
  } else if (mode == SessionMode::FreeDebug && question_id.empty()) {
    // Local code: nothing to hand out, the first save is the starting point.
  } else {
    auto q = published_question(question_id);
    if (mode == SessionMode::Rank && !q.rank_enabled) {
      throw Error(Errc::BadRequest, "question " + question_id + " has no ranking");
    }
    origin_snapshot = q.initial_snapshot_id;
  }
  auto snapshot = origin_snapshot.empty() ? Snapshot{} : store_.get_snapshot(origin_snapshot);

  std::unique_lock lock(sessions_mu_);
  for (auto& [id, live] : sessions_) {
    std::lock_guard session_lock(live->mu);
    const auto& rec = live->record;
    if (rec.user_id != user.user_id || rec.question_id != question_id) continue;
    expire_if_idle(*live, now);
    if (rec.state == SessionState::Active) throw Error(Errc::SessionExists, "session " + id + " is active");
    if (rec.state == SessionState::TimedOut) throw Error(Errc::ResumeAvailable, "session " + id + " can be resumed");
  }

  auto live = std::make_shared<Live>();
  auto& rec = live->record;
  rec.session_id = random_hex(16);
  rec.user_id = user.user_id;
  rec.question_id = question_id;
  rec.mode = mode;
  rec.started_at = now;
  rec.last_activity_at = now;
  store_.create_session(rec);
  sessions_.emplace(rec.session_id, live);
  return StartResult{rec.session_id, std::move(snapshot), 0};
}

std::uint64_t Platform::record_event(const std::string& token, const std::string& session_id,
                                     const EventInput& input) {
  auto user = authenticate(token);
  if (input.kind == EventKind::Save && !input.snapshot) throw Error(Errc::MissingSnapshot, "Save needs a snapshot");
  if ((input.kind == EventKind::Compile) != input.compile_ok.has_value()) {
    throw Error(Errc::BadRequest, "compile_ok must be given exactly for Compile events");
  }
  auto live = find_live(session_id);
  {
    std::lock_guard lock(live->mu);
    if (live->record.user_id != user.user_id) throw Error(Errc::NotOwner, "session belongs to another user");
    if (live->record.state != SessionState::Active) throw Error(Errc::SessionNotActive, "session is not active");
  }
  // Blob writes are idempotent, so they happen outside the session lock.
  std::optional<std::string> snapshot_id;
  if (input.snapshot) snapshot_id = store_.put_snapshot(*input.snapshot);

  std::lock_guard lock(live->mu);
  auto& rec = live->record;
  auto now = clock_();
  expire_if_idle(*live, now);
  if (rec.state != SessionState::Active) throw Error(Errc::SessionNotActive, "session is not active");
  DebugEvent e;
  e.event_id = rec.last_event_id() + 1;
  e.kind = input.kind;
  e.snapshot_id = snapshot_id;
  e.compile_ok = input.compile_ok;
  e.error_log = input.error_log;
  e.at = rec.events.empty() ? now : std::max(now, rec.events.back().at);
  store_.append_event(session_id, e);
  rec.apply(e);
  return e.event_id;
}

std::vector<std::string> Platform::sweep_timeouts() {
  const auto now = clock_();
  std::vector<std::string> moved;
  std::shared_lock lock(sessions_mu_);
  for (auto& [id, live] : sessions_) {
    std::lock_guard session_lock(live->mu);
    if (expire_if_idle(*live, now)) moved.push_back(id);
  }
  return moved;
}

StartResult Platform::resume_session(const std::string& token, const std::string& question_id) {
  auto user = authenticate(token);
  const auto now = clock_();
  std::shared_ptr<Live> chosen;
  {
    std::unique_lock lock(sessions_mu_);
    for (auto& [id, live] : sessions_) {
      std::lock_guard session_lock(live->mu);
      const auto& rec = live->record;
      if (rec.user_id != user.user_id || rec.question_id != question_id) continue;
      expire_if_idle(*live, now);
      if (rec.state == SessionState::TimedOut &&
          (!chosen || rec.started_at > chosen->record.started_at)) {
        chosen = live;
      }
    }
    if (!chosen) throw Error(Errc::NothingToResume, "no timed-out session for " + question_id);
    std::lock_guard session_lock(chosen->mu);
    store_.append_state(chosen->record.session_id, SessionState::Active, now);
    chosen->record.transition(SessionState::Active, now);
  }
  SessionRecord rec;
  {
    std::lock_guard session_lock(chosen->mu);
    rec = chosen->record;
  }
  const auto* save = rec.latest_save();
  auto snapshot = save ? store_.get_snapshot(*save->snapshot_id) : session_origin(rec);
  return StartResult{rec.session_id, std::move(snapshot), rec.last_event_id()};
}

SessionSummary Platform::end_session(const std::string& token, const std::string& session_id, bool completed) {
  auto user = authenticate(token);
  auto live = find_live(session_id);
  SessionRecord rec;
  {
    std::lock_guard lock(live->mu);
    if (live->record.user_id != user.user_id) throw Error(Errc::NotOwner, "session belongs to another user");
    if (live->record.state == SessionState::Ended) throw Error(Errc::AlreadyEnded, "session already ended");
    auto now = std::max(clock_(), live->record.last_activity_at);
    store_.append_state(session_id, SessionState::Ended, now, completed);
    live->record.transition(SessionState::Ended, now, completed);
    rec = live->record;
  }

  // Analysis runs on the copy, outside any lock.
  SessionSummary summary;
  summary.session_id = session_id;
  summary.debug_count = rec.debug_count;
  summary.elapsed_seconds = whole_seconds(rec.started_at, *rec.ended_at);
  if (rec.latest_save()) {
    auto resolver = [this](const std::string& id) { return store_.get_snapshot(id); };
    summary.analysis = behavior::label_sequence(rec, resolver);
    auto q = store_.get_question(rec.question_id);
    if (q && !q->reference_snapshot_id.empty()) {
      try {
        summary.analysis.directions = behavior::annotate_direction(rec, resolver, resolver(q->reference_snapshot_id));
      } catch (const Error& e) {
        if (e.code() != Errc::ReferenceUnparseable) throw;
      }
    }
  }
  store_.write_analysis(session_id, json{{"session_id", session_id},
                                         {"debug_count", summary.debug_count},
                                         {"elapsed_seconds", summary.elapsed_seconds},
                                         {"completed", completed},
                                         {"analysis", behavior_sequence_to_json(summary.analysis)}});
  return summary;
}

SessionRecord Platform::get_session(const std::string& token, const std::string& session_id) const {
  auto user = authenticate(token);
  auto live = find_live(session_id);
  std::lock_guard lock(live->mu);
  if (live->record.user_id != user.user_id && !is_staff(user.role)) {
    throw Error(Errc::NotOwner, "session belongs to another user");
  }
  return live->record;
}

// ---------------------------------------------------------------------------
// Help tickets

std::string Platform::create_help_ticket(const std::string& token, const std::string& session_id,
                                         const std::string& form_text) {
  auto user = authenticate(token);
  auto live = find_live(session_id);
  std::lock_guard lock(live->mu);
  auto& rec = live->record;
  if (rec.user_id != user.user_id) throw Error(Errc::NotOwner, "session belongs to another user");
  const auto* save = rec.latest_save();
  if (!save) throw Error(Errc::NoSnapshotYet, "session has no saved snapshot");

  HelpTicket t;
  t.ticket_id = random_hex(8);
  t.session_id = session_id;
  t.question_id = rec.question_id;
  t.asker_id = user.user_id;
  t.form_text = form_text;
  t.snapshot_id = *save->snapshot_id;
  t.status = TicketStatus::Open;
  t.created_at = clock_();
  store_.put_ticket(t);

  if (rec.state == SessionState::Active) {
    DebugEvent e;
    e.event_id = rec.last_event_id() + 1;
    e.kind = EventKind::Help;
    e.at = std::max(t.created_at, rec.events.back().at);
    store_.append_event(session_id, e);
    rec.apply(e);
  }
  return t.ticket_id;
}

HelpTicket Platform::answer_ticket(const std::string& token, const std::string& ticket_id,
                                   const std::string& explanation, const std::optional<Snapshot>& answer_snapshot) {
  auto user = authenticate(token);
  if (!can_answer_tickets(user.role)) throw Error(Errc::Forbidden, "only teaching assistants answer tickets");
  std::lock_guard lock(tickets_mu_);
  auto ticket = store::valid_record_id(ticket_id) ? store_.get_ticket(ticket_id) : std::nullopt;
  if (!ticket) throw Error(Errc::TicketNotFound, "no ticket " + ticket_id);
  if (ticket->status != TicketStatus::Open) throw Error(Errc::TicketNotOpen, "ticket already answered");

  std::optional<Snapshot> answer = answer_snapshot;
  if (!answer) {
    // Fall back to the latest save of the answerer's troubleshooting session.
    std::shared_lock sessions_lock(sessions_mu_);
    std::optional<std::pair<Timestamp, std::string>> best;
    for (const auto& [id, live] : sessions_) {
      std::lock_guard session_lock(live->mu);
      const auto& rec = live->record;
      if (rec.user_id != user.user_id || rec.question_id != ticket_id || rec.mode != SessionMode::Troubleshoot) {
        continue;
      }
      if (const auto* save = rec.latest_save(); save && (!best || save->at >= best->first)) {
        best = std::make_pair(save->at, *save->snapshot_id);
      }
    }
    if (!best) throw Error(Errc::MissingSnapshot, "no answer snapshot given and no troubleshooting saves");
    answer = store_.get_snapshot(best->second);
  }
  store_.put_snapshot(*answer);

  auto original = store_.get_snapshot(ticket->snapshot_id);
  TicketAnswer a;
  a.answerer_id = user.user_id;
  a.explanation = explanation;
  a.answer_snapshot_id = answer->id();
  std::set<std::string> paths;
  for (const auto& [p, _] : original.files()) paths.insert(p);
  for (const auto& [p, _] : answer->files()) paths.insert(p);
  for (const auto& p : paths) {
    auto before = original.files().count(p) ? original.files().at(p).bytes : std::string();
    auto after = answer->files().count(p) ? answer->files().at(p).bytes : std::string();
    a.changed_file_diff[p] = diff::line_diff(before, after);
  }
  ticket->answer = std::move(a);
  ticket->status = TicketStatus::Answered;
  store_.put_ticket(*ticket);
  return *ticket;
}

std::vector<HelpTicket> Platform::list_tickets(const std::string& token) const {
  authenticate(token);
  auto all = store_.tickets();
  std::sort(all.begin(), all.end(), [](const HelpTicket& a, const HelpTicket& b) {
    return std::tie(a.created_at, a.ticket_id) < std::tie(b.created_at, b.ticket_id);
  });
  return all;
}

// ---------------------------------------------------------------------------
// Questions

std::string Platform::publish_question(const std::string& token, const QuestionDraft& draft) {
  auto user = authenticate(token);
  Question q = draft.question;
  if (!may_publish(user.role, q.kind)) throw Error(Errc::Forbidden, "students may only publish practice questions");
  if (q.kind == QuestionKind::Acceptance) {
    if (!draft.reference) throw Error(Errc::BadRequest, "acceptance questions need a reference snapshot");
    if (!js::parse_snapshot(*draft.reference).logic_ok()) {
      throw Error(Errc::ReferenceUnparseable, "reference logic files do not parse");
    }
    if (same_program(draft.initial, *draft.reference)) {
      throw Error(Errc::NoSeededError, "initial snapshot equals the reference");
    }
  }
  if (q.question_id.empty()) {
    q.question_id = random_hex(8);
  } else if (!store::valid_record_id(q.question_id)) {
    throw Error(Errc::BadRequest, "invalid question id " + q.question_id);
  } else if (auto existing = store_.get_question(q.question_id); existing && existing->author_id != user.user_id) {
    throw Error(Errc::Forbidden, "question " + q.question_id + " belongs to another author");
  }
  q.author_id = user.user_id;
  q.published = true;
  q.initial_snapshot_id = store_.put_snapshot(draft.initial);
  q.reference_snapshot_id = draft.reference ? store_.put_snapshot(*draft.reference) : std::string();
  store_.put_question(q);
  return q.question_id;
}

std::vector<Question> Platform::list_questions(const std::string& token) const {
  auto user = authenticate(token);
  std::vector<Question> out;
  for (auto& q : store_.questions()) {
    if (!q.published) continue;
    if (!is_staff(user.role)) q.reference_snapshot_id.clear();
    out.push_back(std::move(q));
  }
  return out;
}

Question Platform::get_question(const std::string& token, const std::string& question_id) const {
  auto user = authenticate(token);
  auto q = published_question(question_id);
  if (!is_staff(user.role)) q.reference_snapshot_id.clear();  // the solution stays with staff
  return q;
}

Snapshot Platform::initial_snapshot(const std::string& token, const std::string& question_id) const {
  return store_.get_snapshot(get_question(token, question_id).initial_snapshot_id);
}

Leaderboard Platform::leaderboard(const std::string& token, const std::string& question_id) const {
  authenticate(token);
  published_question(question_id);
  Leaderboard board;
  board.question_id = question_id;
  {
    std::shared_lock lock(sessions_mu_);
    for (const auto& [id, live] : sessions_) {
      std::lock_guard session_lock(live->mu);
      const auto& rec = live->record;
      if (rec.question_id != question_id || rec.mode != SessionMode::Rank || rec.state != SessionState::Ended ||
          !rec.completed) {
        continue;
      }
      board.entries.push_back(
          LeaderboardEntry{rec.user_id, rec.debug_count, whole_seconds(rec.started_at, *rec.ended_at), *rec.ended_at});
    }
  }
  std::sort(board.entries.begin(), board.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.debug_count, a.elapsed_seconds, a.user_id, a.completed_at) <
           std::tie(b.debug_count, b.elapsed_seconds, b.user_id, b.completed_at);
  });
  return board;
}

std::vector<report::StatsRow> Platform::stats(const std::string& token, report::StatsGroup group) const {
  authenticate(token);
  return report::compute_stats(store_, group);
}

}  // namespace snaptrace::server
