#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "snaptrace/util.hpp"

namespace snaptrace {

// ---------------------------------------------------------------------------
// Users and roles

enum class UserRole { Student, TeachingAssistant, Teacher };

std::string_view to_string(UserRole role);
std::optional<UserRole> parse_user_role(std::string_view text);

/// Students ask for help; only teaching assistants also answer.
inline bool can_answer_tickets(UserRole role) { return role == UserRole::TeachingAssistant; }
inline bool can_create_tickets(UserRole) { return true; }

struct User {
  std::string user_id;
  UserRole role = UserRole::Student;
  std::string secret_salt;
  std::string secret_hash;  // sha256(salt + secret), hex

  bool operator==(const User&) const = default;
};

// ---------------------------------------------------------------------------
// Snapshots

enum class Layer { Logic, View, Style, Other };

std::string_view to_string(Layer layer);
Layer layer_for_path(std::string_view path);

struct FileRecord {
  Layer layer = Layer::Other;
  std::string bytes;

  bool operator==(const FileRecord&) const = default;
};

using FileMap = std::map<std::string, std::string>;

/// Canonical encoding: entries sorted by path bytes, each written as
/// u64be(len(path)) path u64be(len(bytes)) bytes.
std::string encode_file_set(const FileMap& files);
/// Inverse of encode_file_set. Throws std::invalid_argument on malformed input.
FileMap decode_file_set(std::string_view encoded);

/// SHA-256 hex of the canonical encoding. Throws Error(EmptySnapshot).
std::string compute_snapshot_id(const FileMap& files);

/// One captured multi-file code state. Immutable once built.
class Snapshot {
 public:
  Snapshot() = default;

  /// Throws Error(EmptySnapshot) when `files` is empty.
  static Snapshot from_files(FileMap files, Timestamp captured_at = {});
  /// Throws std::invalid_argument on malformed bytes, Error(EmptySnapshot) on zero entries.
  static Snapshot decode(std::string_view canonical, Timestamp captured_at = {});

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] const std::map<std::string, FileRecord>& files() const { return files_; }
  [[nodiscard]] Timestamp captured_at() const { return captured_at_; }
  [[nodiscard]] FileMap file_map() const;
  [[nodiscard]] std::string canonical_encoding() const;

  /// Structural equality: same id and same files. Capture time is not content.
  bool operator==(const Snapshot& other) const { return id_ == other.id_ && files_ == other.files_; }

 private:
  std::string id_;
  std::map<std::string, FileRecord> files_;
  Timestamp captured_at_{};
};

// ---------------------------------------------------------------------------
// Events and sessions

enum class EventKind { Save, Compile, Run, Help, Reset };
enum class SessionMode { Training, Rank, FreeDebug, Troubleshoot };
enum class SessionState { Active, TimedOut, Ended };

std::string_view to_string(EventKind kind);
std::string_view to_string(SessionMode mode);
std::string_view to_string(SessionState state);
std::optional<EventKind> parse_event_kind(std::string_view text);
std::optional<SessionMode> parse_session_mode(std::string_view text);
std::optional<SessionState> parse_session_state(std::string_view text);

bool is_allowed_transition(SessionState from, SessionState to);

struct DebugEvent {
  std::uint64_t event_id = 0;
  EventKind kind = EventKind::Save;
  std::optional<std::string> snapshot_id;
  std::optional<bool> compile_ok;
  std::optional<std::string> error_log;
  Timestamp at{};

  bool operator==(const DebugEvent&) const = default;
};

/// Checks the per-event shape rules (Save carries a snapshot, compile_ok iff Compile).
/// Returns an explanation when violated.
std::optional<std::string> validate_event_shape(const DebugEvent& event);

struct SessionRecord {
  std::string session_id;
  std::string user_id;
  std::string question_id;
  SessionMode mode = SessionMode::Training;
  SessionState state = SessionState::Active;
  std::vector<DebugEvent> events;
  Timestamp started_at{};
  Timestamp last_activity_at{};
  std::optional<Timestamp> ended_at;
  bool completed = false;
  std::uint64_t debug_count = 0;

  /// Appends an event and refreshes derived fields. Throws std::logic_error when
  /// event ids or timestamps go backwards.
  void apply(const DebugEvent& event);
  /// Applies a lifecycle transition. Throws std::logic_error on a disallowed one.
  void transition(SessionState to, Timestamp at, bool completed_flag = false);

  [[nodiscard]] std::uint64_t last_event_id() const { return events.empty() ? 0 : events.back().event_id; }
  [[nodiscard]] const DebugEvent* latest_save() const;
  [[nodiscard]] std::vector<const DebugEvent*> saves() const;

  bool operator==(const SessionRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Questions and tickets

enum class QuestionKind { Practice, Acceptance };
enum class ErrorClass { ParameterError, AttributeError, SyntaxError, FunctionalError };

std::string_view to_string(QuestionKind kind);
std::string_view to_string(ErrorClass cls);
std::optional<QuestionKind> parse_question_kind(std::string_view text);
std::optional<ErrorClass> parse_error_class(std::string_view text);

struct Question {
  std::string question_id;
  QuestionKind kind = QuestionKind::Practice;
  std::string author_id;
  std::string title;
  std::string initial_snapshot_id;
  std::string reference_snapshot_id;
  std::set<ErrorClass> error_classes;
  int difficulty = 1;
  bool published = false;
  /// Rank mode records a leaderboard; training mode on the same question does not.
  bool rank_enabled = false;

  bool operator==(const Question&) const = default;
};

/// Acceptance questions need staff; practice questions may come from anyone.
bool may_publish(UserRole role, QuestionKind kind);

struct LineDelta {
  std::uint64_t added = 0;
  std::uint64_t removed = 0;
  std::uint64_t changed = 0;

  [[nodiscard]] bool empty() const { return added == 0 && removed == 0 && changed == 0; }
  bool operator==(const LineDelta&) const = default;
};

enum class TicketStatus { Open, Answered };
std::string_view to_string(TicketStatus status);
std::optional<TicketStatus> parse_ticket_status(std::string_view text);

struct TicketAnswer {
  std::string answerer_id;
  std::string explanation;
  std::string answer_snapshot_id;
  std::map<std::string, LineDelta> changed_file_diff;

  bool operator==(const TicketAnswer&) const = default;
};

struct HelpTicket {
  std::string ticket_id;
  std::string session_id;
  std::string question_id;
  std::string asker_id;
  std::string form_text;
  std::string snapshot_id;
  TicketStatus status = TicketStatus::Open;
  std::optional<TicketAnswer> answer;
  Timestamp created_at{};

  bool operator==(const HelpTicket&) const = default;
};

struct AuthToken {
  std::string token;  // 64 hex chars
  std::string user_id;
  Timestamp issued_at{};
  Timestamp expires_at{};

  bool operator==(const AuthToken&) const = default;
};

inline constexpr std::chrono::hours kTokenLifetime{24};

// ---------------------------------------------------------------------------
// Analysis labels

enum class Behavior { NoChange, ParamTweak, ApiChange, StructEdit, Revert, SyntaxBreak, SyntaxFix };
enum class Direction { Toward, Away, Neutral, Unknown };

std::string_view to_string(Behavior behavior);
std::string_view to_string(Direction direction);
std::optional<Behavior> parse_behavior(std::string_view text);
std::optional<Direction> parse_direction(std::string_view text);

/// One-letter code per behavior, used for label strings in clustering.
char behavior_symbol(Behavior behavior);

struct BehaviorLabel {
  Behavior label = Behavior::NoChange;
  std::uint64_t from_event_id = 0;
  std::uint64_t to_event_id = 0;
  std::optional<std::string> detail;

  bool operator==(const BehaviorLabel&) const = default;
};

struct DirectionLabel {
  Direction direction = Direction::Unknown;
  std::uint64_t event_id = 0;
  /// Absent when the snapshot could not be parsed.
  std::optional<std::uint64_t> distance_to_reference;
  /// Set when some file pair exceeded the exact tree-distance size limit.
  bool approximate = false;

  bool operator==(const DirectionLabel&) const = default;
};

struct BehaviorSequence {
  std::vector<BehaviorLabel> labels;
  std::vector<DirectionLabel> directions;

  [[nodiscard]] std::string label_string() const;
  bool operator==(const BehaviorSequence&) const = default;
};

}  // namespace snaptrace
