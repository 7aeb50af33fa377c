#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snaptrace/behavior.hpp"
#include "snaptrace/cluster.hpp"
#include "snaptrace/json_codec.hpp"
#include "snaptrace/store.hpp"

namespace snaptrace::report {

// ---------------------------------------------------------------------------
// Statistics table

enum class StatsGroup { Question, QuestionKind };
std::optional<StatsGroup> parse_stats_group(std::string_view text);

struct StatsRow {
  std::string group;
  std::uint64_t total_users = 0;
  std::uint64_t total_sessions = 0;
  std::uint64_t total_debugs = 0;  // Compile events
  std::uint64_t completions = 0;   // Compile events that succeeded

  /// total_debugs / completions, absent when there are no completions.
  [[nodiscard]] std::optional<double> avg_debugs_per_completion() const;
  bool operator==(const StatsRow&) const = default;
};

inline constexpr std::string_view kStatsFormula =
    "avg debugs per completion = total debugs / completions; a debug is a Compile event, a completion is a "
    "Compile event with compile_ok = true";

/// One row per group, from the session logs alone. Sessions whose question is
/// not in the store group under their question id (or "Other" by kind), and
/// free debugging on local code groups as "FreeDebug".
std::vector<StatsRow> compute_stats(const store::Store& store, StatsGroup group);
/// Aligned text table; the average prints with four decimals or "—".
std::string render_stats_text(const std::vector<StatsRow>& rows);
json stats_to_json(const std::vector<StatsRow>& rows);

// ---------------------------------------------------------------------------
// Timeline

/// Self-contained SVG: time axis, one lane per file path with the saves that
/// touched it, an event lane for compiles and other events, and a direction
/// lane when directions are present. Output depends only on the inputs.
std::string render_timeline_svg(const SessionRecord& session, const BehaviorSequence& analysis,
                                const behavior::SnapshotResolver& snapshots);

/// The stored end-of-session analysis, or a fresh one when none was stored.
BehaviorSequence session_analysis(const store::Store& store, const SessionRecord& session);

// ---------------------------------------------------------------------------
// Per-session analysis document

/// Throws Error(SessionNotFound) or Error(SessionNotEnded).
json session_report(const store::Store& store, const std::string& session_id,
                    const std::vector<std::string>& api_prefixes = behavior::default_api_prefixes());
std::string render_session_report_text(const json& report);

// ---------------------------------------------------------------------------
// Cluster report

/// Clusters the ended sessions that have at least two saves. Throws
/// Error(KTooLarge) when fewer than k such sessions exist.
json cluster_report(const store::Store& store, std::size_t k, std::uint64_t seed);
std::string render_cluster_report_text(const json& report);

// ---------------------------------------------------------------------------
// Load test

struct LoadTestResult {
  std::uint64_t sent = 0;
  std::uint64_t succeeded = 0;
  std::uint64_t failed = 0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
  double elapsed_seconds = 0.0;
  /// No request succeeded and at least one failed to connect.
  bool unreachable = false;
};

struct LoadTestOptions {
  std::string url;  // e.g. http://127.0.0.1:8080
  std::uint64_t total_requests = 1000;
  double duration_seconds = 1.0;
  std::string token;
  std::size_t senders = 32;
};

/// Paces GET /api/v1/questions evenly over the duration from concurrent
/// senders. Every request counts as exactly one success or failure.
LoadTestResult run_loadtest(const LoadTestOptions& options);
/// Nearest-rank percentile over an unsorted sample; 0 for an empty one.
double percentile(std::vector<double> sample, double p);
std::string render_loadtest_text(const LoadTestResult& r);
json loadtest_to_json(const LoadTestResult& r);

}  // namespace snaptrace::report
