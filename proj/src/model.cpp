#include "snaptrace/model.hpp"

#include <array>
#include <stdexcept>
#include <utility>

#include "snaptrace/error.hpp"

namespace snaptrace {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view text) {
  for (const auto& [v, name] : table) {
    if (name == text) return v;
  }
  return std::nullopt;
}

constexpr NameTable<UserRole, 3> kRoles{{
    {UserRole::Student, "Student"},
    {UserRole::TeachingAssistant, "TeachingAssistant"},
    {UserRole::Teacher, "Teacher"},
}};
constexpr NameTable<Layer, 4> kLayers{{
    {Layer::Logic, "Logic"}, {Layer::View, "View"}, {Layer::Style, "Style"}, {Layer::Other, "Other"},
}};
constexpr NameTable<EventKind, 5> kEventKinds{{
    {EventKind::Save, "Save"},
    {EventKind::Compile, "Compile"},
    {EventKind::Run, "Run"},
    {EventKind::Help, "Help"},
    {EventKind::Reset, "Reset"},
}};
constexpr NameTable<SessionMode, 4> kModes{{
    {SessionMode::Training, "Training"},
    {SessionMode::Rank, "Rank"},
    {SessionMode::FreeDebug, "FreeDebug"},
    {SessionMode::Troubleshoot, "Troubleshoot"},
}};
constexpr NameTable<SessionState, 3> kStates{{
    {SessionState::Active, "Active"}, {SessionState::TimedOut, "TimedOut"}, {SessionState::Ended, "Ended"},
}};
constexpr NameTable<QuestionKind, 2> kQuestionKinds{{
    {QuestionKind::Practice, "Practice"}, {QuestionKind::Acceptance, "Acceptance"},
}};
constexpr NameTable<ErrorClass, 4> kErrorClasses{{
    {ErrorClass::ParameterError, "ParameterError"},
    {ErrorClass::AttributeError, "AttributeError"},
    {ErrorClass::SyntaxError, "SyntaxError"},
    {ErrorClass::FunctionalError, "FunctionalError"},
}};
constexpr NameTable<TicketStatus, 2> kTicketStatus{{
    {TicketStatus::Open, "Open"}, {TicketStatus::Answered, "Answered"},
}};
constexpr NameTable<Behavior, 7> kBehaviors{{
    {Behavior::NoChange, "NoChange"},
    {Behavior::ParamTweak, "ParamTweak"},
    {Behavior::ApiChange, "ApiChange"},
    {Behavior::StructEdit, "StructEdit"},
    {Behavior::Revert, "Revert"},
    {Behavior::SyntaxBreak, "SyntaxBreak"},
    {Behavior::SyntaxFix, "SyntaxFix"},
}};
constexpr NameTable<Direction, 4> kDirections{{
    {Direction::Toward, "Toward"},
    {Direction::Away, "Away"},
    {Direction::Neutral, "Neutral"},
    {Direction::Unknown, "Unknown"},
}};

void put_u64be(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::uint64_t get_u64be(std::string_view in, std::size_t& pos) {
  if (in.size() - pos < 8) throw std::invalid_argument("truncated length field");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(in[pos + i]);
  pos += 8;
  return v;
}

std::string_view get_chunk(std::string_view in, std::size_t& pos) {
  auto len = get_u64be(in, pos);
  if (len > in.size() - pos) throw std::invalid_argument("truncated body");
  auto chunk = in.substr(pos, len);
  pos += len;
  return chunk;
}

}  // namespace

std::string_view to_string(UserRole role) { return name_of(kRoles, role); }
std::optional<UserRole> parse_user_role(std::string_view text) { return value_of(kRoles, text); }
std::string_view to_string(Layer layer) { return name_of(kLayers, layer); }
std::string_view to_string(EventKind kind) { return name_of(kEventKinds, kind); }
std::string_view to_string(SessionMode mode) { return name_of(kModes, mode); }
std::string_view to_string(SessionState state) { return name_of(kStates, state); }
std::optional<EventKind> parse_event_kind(std::string_view text) { return value_of(kEventKinds, text); }
std::optional<SessionMode> parse_session_mode(std::string_view text) { return value_of(kModes, text); }
std::optional<SessionState> parse_session_state(std::string_view text) { return value_of(kStates, text); }
std::string_view to_string(QuestionKind kind) { return name_of(kQuestionKinds, kind); }
std::string_view to_string(ErrorClass cls) { return name_of(kErrorClasses, cls); }
std::optional<QuestionKind> parse_question_kind(std::string_view text) { return value_of(kQuestionKinds, text); }
std::optional<ErrorClass> parse_error_class(std::string_view text) { return value_of(kErrorClasses, text); }
std::string_view to_string(TicketStatus status) { return name_of(kTicketStatus, status); }
std::optional<TicketStatus> parse_ticket_status(std::string_view text) { return value_of(kTicketStatus, text); }
std::string_view to_string(Behavior behavior) { return name_of(kBehaviors, behavior); }
std::string_view to_string(Direction direction) { return name_of(kDirections, direction); }
std::optional<Behavior> parse_behavior(std::string_view text) { return value_of(kBehaviors, text); }
std::optional<Direction> parse_direction(std::string_view text) { return value_of(kDirections, text); }

Layer layer_for_path(std::string_view path) {
  auto dot = path.rfind('.');
  auto slash = path.rfind('/');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash)) return Layer::Other;
  auto ext = path.substr(dot);
  if (ext == ".js") return Layer::Logic;
  if (ext == ".wxml") return Layer::View;
  if (ext == ".wxss") return Layer::Style;
  return Layer::Other;
}

std::string encode_file_set(const FileMap& files) {
  std::string out;
  for (const auto& [path, bytes] : files) {
    put_u64be(out, path.size());
    out += path;
    put_u64be(out, bytes.size());
    out += bytes;
  }
  return out;
}

FileMap decode_file_set(std::string_view encoded) {
  FileMap files;
  std::size_t pos = 0;
  std::string previous;
  bool first = true;
  while (pos < encoded.size()) {
    std::string path(get_chunk(encoded, pos));
    std::string bytes(get_chunk(encoded, pos));
    if (!first && !(previous < path)) throw std::invalid_argument("paths not in canonical order");
    previous = path;
    first = false;
    files.emplace(std::move(path), std::move(bytes));
  }
  return files;
}

std::string compute_snapshot_id(const FileMap& files) {
  if (files.empty()) throw Error(Errc::EmptySnapshot, "snapshot has no files");
  return sha256_hex(encode_file_set(files));
}

Snapshot Snapshot::from_files(FileMap files, Timestamp captured_at) {
  Snapshot s;
  s.id_ = compute_snapshot_id(files);
  s.captured_at_ = captured_at;
  for (auto& [path, bytes] : files) {
    s.files_.emplace(path, FileRecord{layer_for_path(path), std::move(bytes)});
  }
  return s;
}

Snapshot Snapshot::decode(std::string_view canonical, Timestamp captured_at) {
  return from_files(decode_file_set(canonical), captured_at);
}

FileMap Snapshot::file_map() const {
  FileMap out;
  for (const auto& [path, rec] : files_) out.emplace(path, rec.bytes);
  return out;
}

std::string Snapshot::canonical_encoding() const { return encode_file_set(file_map()); }

bool is_allowed_transition(SessionState from, SessionState to) {
  switch (from) {
    case SessionState::Active: return to == SessionState::TimedOut || to == SessionState::Ended;
    case SessionState::TimedOut: return to == SessionState::Active || to == SessionState::Ended;
    case SessionState::Ended: return false;
  }
  return false;
}

std::optional<std::string> validate_event_shape(const DebugEvent& event) {
  if (event.kind == EventKind::Save && !event.snapshot_id) return "Save event without snapshot";
  if ((event.kind == EventKind::Compile) != event.compile_ok.has_value()) {
    return "compile_ok must be present exactly for Compile events";
  }
  return std::nullopt;
}

void SessionRecord::apply(const DebugEvent& event) {
  if (event.event_id <= last_event_id()) throw std::logic_error("event ids must strictly increase");
  if (!events.empty() && event.at < events.back().at) throw std::logic_error("event timestamps went backwards");
  events.push_back(event);
  if (event.kind == EventKind::Compile) ++debug_count;
  if (event.at > last_activity_at) last_activity_at = event.at;
}

void SessionRecord::transition(SessionState to, Timestamp at, bool completed_flag) {
  if (!is_allowed_transition(state, to)) {
    throw std::logic_error("illegal session transition " + std::string(to_string(state)) + " -> " +
                           std::string(to_string(to)));
  }
  state = to;
  if (to == SessionState::Active && at > last_activity_at) last_activity_at = at;
  if (to == SessionState::Ended) {
    ended_at = at;
    completed = completed_flag;
  }
}

const DebugEvent* SessionRecord::latest_save() const {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    if (it->kind == EventKind::Save) return &*it;
  }
  return nullptr;
}

std::vector<const DebugEvent*> SessionRecord::saves() const {
  std::vector<const DebugEvent*> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::Save) out.push_back(&e);
  }
  return out;
}

bool may_publish(UserRole role, QuestionKind kind) {
  return kind == QuestionKind::Practice || role != UserRole::Student;
}

char behavior_symbol(Behavior behavior) {
  switch (behavior) {
    case Behavior::NoChange: return 'N';
    case Behavior::ParamTweak: return 'P';
    case Behavior::ApiChange: return 'A';
    case Behavior::StructEdit: return 'S';
    case Behavior::Revert: return 'R';
    case Behavior::SyntaxBreak: return 'B';
    case Behavior::SyntaxFix: return 'F';
  }
  return '?';
}

std::string BehaviorSequence::label_string() const {
  std::string out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(behavior_symbol(l.label));
  return out;
}

}  // namespace snaptrace
