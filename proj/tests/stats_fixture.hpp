#pragma once

#include <filesystem>
#include <string>

#include "snaptrace/store.hpp"

namespace testsupport {

struct StatsTotals {
  std::uint64_t users = 0;
  std::uint64_t sessions = 0;
  std::uint64_t compiles = 0;
  std::uint64_t completions = 0;
};

/// Writes sessions for one question spreading the totals as evenly as
/// possible: session i belongs to user i mod users, compiles and successful
/// compiles are dealt round-robin, and each session's successes come last.
inline void write_stats_store(const std::filesystem::path& root, const std::string& question_id,
                              const StatsTotals& t) {
  using namespace snaptrace;
  store::StoreOptions opts;
  opts.sync = false;
  store::Store s(root, opts);
  Question q;
  q.question_id = question_id;
  q.kind = QuestionKind::Practice;
  q.title = question_id;
  q.published = true;
  s.put_question(q);
  for (std::uint64_t i = 0; i < t.sessions; ++i) {
    SessionRecord r;
    r.session_id = "s" + std::to_string(i);
    r.user_id = "u" + std::to_string(i % t.users);
    r.question_id = question_id;
    r.started_at = from_millis(static_cast<std::int64_t>(i) * 1000);
    r.last_activity_at = r.started_at;
    s.create_session(r);
    const auto compiles = t.compiles / t.sessions + (i < t.compiles % t.sessions ? 1 : 0);
    const auto successes = t.completions / t.sessions + (i < t.completions % t.sessions ? 1 : 0);
    for (std::uint64_t c = 1; c <= compiles; ++c) {
      DebugEvent e;
      e.event_id = c;
      e.kind = EventKind::Compile;
      e.compile_ok = c + successes > compiles;
      e.at = r.started_at + std::chrono::milliseconds(c);
      s.append_event(r.session_id, e);
    }
  }
}

}  // namespace testsupport
