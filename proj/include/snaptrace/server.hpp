#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "snaptrace/error.hpp"
#include "snaptrace/json_codec.hpp"
#include "snaptrace/model.hpp"
#include "snaptrace/report.hpp"
#include "snaptrace/store.hpp"

namespace snaptrace::server {

inline constexpr std::string_view kApiBase = "/api/v1";

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store_root = "snaptrace-data";
  std::chrono::milliseconds session_timeout = std::chrono::minutes(30);
  std::vector<std::string> api_prefixes = {"wx"};
  std::size_t threads = 64;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the JSON config file (if given) and then applies environment
/// overrides: SNAPTRACE_LISTEN (host:port), SNAPTRACE_STORE,
/// SNAPTRACE_SESSION_TIMEOUT (seconds), SNAPTRACE_API_PREFIXES (comma list),
/// SNAPTRACE_THREADS. Throws Error(BadRequest) on malformed values.
Config load_config(const std::optional<std::string>& path, const EnvLookup& env);
EnvLookup process_env();

using Clock = std::function<Timestamp()>;

/// sha256(salt + secret), hex.
std::string hash_secret(std::string_view salt, std::string_view secret);
User make_user(std::string user_id, UserRole role, std::string_view secret);

struct StartResult {
  std::string session_id;
  Snapshot snapshot;
  std::uint64_t last_event_id = 0;
};

struct EventInput {
  EventKind kind = EventKind::Save;
  std::optional<Snapshot> snapshot;
  std::optional<bool> compile_ok;
  std::optional<std::string> error_log;
};

struct SessionSummary {
  std::string session_id;
  std::uint64_t debug_count = 0;
  std::int64_t elapsed_seconds = 0;
  BehaviorSequence analysis;
};

struct LeaderboardEntry {
  std::string user_id;
  std::uint64_t debug_count = 0;
  std::int64_t elapsed_seconds = 0;
  Timestamp completed_at{};

  bool operator==(const LeaderboardEntry&) const = default;
};

struct Leaderboard {
  std::string question_id;
  std::vector<LeaderboardEntry> entries;
};

struct QuestionDraft {
  Question question;
  Snapshot initial;
  std::optional<Snapshot> reference;
};

/// The platform service logic, independent of transport. Every method taking
/// a token authenticates it before touching any state.
class Platform {
 public:
  Platform(store::Store& store, Config config, Clock clock = system_now);
  ~Platform();

  AuthToken login(const std::string& user_id, const std::string& secret);
  /// Returns the token's user. Throws Error(AuthFailed) or Error(AuthExpired).
  User authenticate(const std::string& token) const;

  StartResult start_session(const std::string& token, const std::string& question_id, SessionMode mode);
  std::uint64_t record_event(const std::string& token, const std::string& session_id, const EventInput& input);
  std::vector<std::string> sweep_timeouts();
  StartResult resume_session(const std::string& token, const std::string& question_id);
  SessionSummary end_session(const std::string& token, const std::string& session_id, bool completed);
  SessionRecord get_session(const std::string& token, const std::string& session_id) const;

  std::string create_help_ticket(const std::string& token, const std::string& session_id, const std::string& form_text);
  HelpTicket answer_ticket(const std::string& token, const std::string& ticket_id, const std::string& explanation,
                           const std::optional<Snapshot>& answer_snapshot);
  std::vector<HelpTicket> list_tickets(const std::string& token) const;

  std::string publish_question(const std::string& token, const QuestionDraft& draft);
  std::vector<Question> list_questions(const std::string& token) const;
  Question get_question(const std::string& token, const std::string& question_id) const;
  Snapshot initial_snapshot(const std::string& token, const std::string& question_id) const;
  Leaderboard leaderboard(const std::string& token, const std::string& question_id) const;

  std::vector<report::StatsRow> stats(const std::string& token, report::StatsGroup group) const;

  [[nodiscard]] const Config& config() const { return config_; }

 private:
  struct Live {
    mutable std::mutex mu;
    SessionRecord record;
  };

  std::shared_ptr<Live> find_live(const std::string& session_id) const;
  bool expire_if_idle(Live& live, Timestamp now);
  Snapshot session_origin(const SessionRecord& record) const;
  Question published_question(const std::string& question_id) const;

  store::Store& store_;
  Config config_;
  Clock clock_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
  std::mutex tickets_mu_;
};

/// HTTP+JSON transport over a Platform.
class HttpServer {
 public:
  explicit HttpServer(Platform& platform);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and starts serving on a background thread. Port 0 picks a free
  /// port. Returns the bound port. Throws Error(IoError) if binding fails.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

/// HTTP status used for each error code.
int http_status(Errc code);

}  // namespace snaptrace::server
