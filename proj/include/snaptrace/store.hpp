#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snaptrace/json_codec.hpp"
#include "snaptrace/model.hpp"

namespace snaptrace::store {

inline constexpr std::string_view kFormatVersion = "1";

// On-disk layout under the root:
//   meta/version                     "1"
//   blobs/<2 hex>/<digest>           canonical snapshot encoding
//   sessions/<id>.log                framed event log, one record per line
//   sessions/<id>.analysis.json      end-of-session analysis
//   records/<kind>.db                JSON lines, the last line per id wins
//
// Log lines are framed as "<decimal payload length> <payload>\n". The payload
// is space-separated key=value pairs with '%', ' ', '=', and control bytes
// percent-escaped. A final line without its full payload and newline is a torn
// write and is dropped (and truncated away when the log is next appended to).

/// Simulated crash for durability tests: the Nth event append across the
/// store writes only `bytes` bytes of its line and terminates the process.
struct CrashPoint {
  std::uint64_t on_append = 0;
  std::size_t bytes = 0;
};

struct StoreOptions {
  bool create_if_missing = true;
  bool sync = true;
  std::optional<CrashPoint> crash;
};

// Percent-escaped key=value payload codec.
std::string encode_fields(const std::vector<std::pair<std::string, std::string>>& fields);
std::vector<std::pair<std::string, std::string>> decode_fields(std::string_view payload);

/// Frames a payload as one log line.
std::string frame_line(std::string_view payload);

struct ParsedLog {
  std::vector<std::string> payloads;
  /// Bytes covered by complete lines; anything after is a torn tail.
  std::size_t complete_bytes = 0;
  bool torn = false;
};
/// Throws Error(CorruptLog) for a malformed complete line.
ParsedLog parse_log(std::string_view bytes);

class RecordFile;

class Store {
 public:
  /// Opens or creates the store. Throws Error(FormatVersion) on a version
  /// mismatch, Error(StoreUnreadable) when the root is missing and creation is
  /// off, Error(IoError) on filesystem failures.
  explicit Store(std::filesystem::path root, StoreOptions options = {});
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  [[nodiscard]] const std::filesystem::path& root() const { return root_; }

  // Blobs
  std::string put_snapshot(const Snapshot& snapshot);
  /// Throws Error(NotFound) or Error(CorruptBlob).
  [[nodiscard]] Snapshot get_snapshot(const std::string& snapshot_id) const;
  [[nodiscard]] bool has_snapshot(const std::string& snapshot_id) const;
  [[nodiscard]] std::vector<std::string> list_snapshots() const;
  [[nodiscard]] std::filesystem::path blob_path(const std::string& snapshot_id) const;

  // Sessions
  /// Writes the header line of a new log. Throws Error(SessionExists) if present.
  void create_session(const SessionRecord& header);
  /// Throws Error(SequenceGap) unless event_id is one past the last stored id,
  /// Error(NotFound) for an unknown session.
  void append_event(const std::string& session_id, const DebugEvent& event);
  void append_state(const std::string& session_id, SessionState state, Timestamp at, bool completed = false);
  /// Replays the log. Throws Error(NotFound) or Error(CorruptLog).
  [[nodiscard]] SessionRecord load_session(const std::string& session_id) const;
  [[nodiscard]] bool has_session(const std::string& session_id) const;
  [[nodiscard]] std::vector<std::string> list_sessions() const;
  [[nodiscard]] std::filesystem::path log_path(const std::string& session_id) const;

  void write_analysis(const std::string& session_id, const json& analysis);
  [[nodiscard]] std::optional<json> read_analysis(const std::string& session_id) const;

  // Records
  void put_user(const User& user);
  [[nodiscard]] std::optional<User> get_user(const std::string& user_id) const;
  [[nodiscard]] std::vector<User> users() const;

  void put_question(const Question& question);
  [[nodiscard]] std::optional<Question> get_question(const std::string& question_id) const;
  [[nodiscard]] std::vector<Question> questions() const;

  void put_ticket(const HelpTicket& ticket);
  [[nodiscard]] std::optional<HelpTicket> get_ticket(const std::string& ticket_id) const;
  [[nodiscard]] std::vector<HelpTicket> tickets() const;

  void put_token(const AuthToken& token);
  [[nodiscard]] std::optional<AuthToken> get_token(const std::string& token) const;

 private:
  struct SessionLog {
    std::mutex mu;
    std::uint64_t last_event_id = 0;
    bool checked = false;  // torn tail handled and last id known
  };

  SessionLog& log_state(const std::string& session_id);
  void prepare_log(const std::string& session_id, SessionLog& log);
  void append_line(const std::string& session_id, const std::string& payload, bool is_event);
  void write_file_atomic(const std::filesystem::path& target, std::string_view bytes);

  std::filesystem::path root_;
  StoreOptions options_;
  std::mutex logs_mu_;
  std::map<std::string, std::unique_ptr<SessionLog>> logs_;
  std::atomic<std::uint64_t> event_appends_{0};
  std::unique_ptr<RecordFile> users_, questions_, tickets_, tokens_;
};

/// Ids usable as file names: non-empty [A-Za-z0-9_-], at most 128 characters.
bool valid_record_id(std::string_view id);

}  // namespace snaptrace::store
