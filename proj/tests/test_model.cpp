#include <random>

#include "doctest.h"
#include "snaptrace/error.hpp"
#include "snaptrace/model.hpp"

using namespace snaptrace;

TEST_CASE("snapshot id is independent of insertion order") {
  FileMap a;
  a["pages/index/index.js"] = "var x = 1;";
  a["app.js"] = "App({});";
  a["pages/index/index.wxml"] = "<view/>";
  FileMap b;
  b["pages/index/index.wxml"] = "<view/>";
  b["app.js"] = "App({});";
  b["pages/index/index.js"] = "var x = 1;";
  CHECK(compute_snapshot_id(a) == compute_snapshot_id(b));
}

TEST_CASE("snapshot id changes with content") {
  CHECK(compute_snapshot_id({{"a.js", "x"}}) != compute_snapshot_id({{"a.js", "y"}}));
}

TEST_CASE("snapshot id golden values") {
  // Pinned from Python's hashlib over struct.pack('>Q', len) framing.
  CHECK(compute_snapshot_id({{"a.js", ""}}) == "7855adede1e67cb536a655ee428e097568f872e5ed133eca13a2bb4b9cd2c970");
  CHECK(compute_snapshot_id({{"a.js", "x"}, {"p/b.wxml", "<a>"}}) ==
        "03c81a981ffa3b64cb91645e566243d3a71f23d96c13e437c10cd59c0c7bf9a8");
}

TEST_CASE("empty snapshot is rejected") {
  try {
    compute_snapshot_id({});
    FAIL("expected EmptySnapshot");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptySnapshot);
  }
  CHECK_THROWS_AS(Snapshot::from_files({}), Error);
}

TEST_CASE("canonical encoding round-trips and rejects garbage") {
  auto s = Snapshot::from_files({{"a.js", std::string("\0\x01\xff", 3)}, {"b.wxss", ".a{}"}});
  auto back = Snapshot::decode(s.canonical_encoding());
  CHECK(back == s);
  CHECK_THROWS_AS(decode_file_set("abc"), std::invalid_argument);
  auto enc = s.canonical_encoding();
  CHECK_THROWS_AS(decode_file_set(enc.substr(0, enc.size() - 1)), std::invalid_argument);
}

TEST_CASE("layer is derived from the extension") {
  CHECK(layer_for_path("pages/a/a.js") == Layer::Logic);
  CHECK(layer_for_path("a.wxml") == Layer::View);
  CHECK(layer_for_path("app.wxss") == Layer::Style);
  CHECK(layer_for_path("app.json") == Layer::Other);
  CHECK(layer_for_path("dir.js/README") == Layer::Other);
  CHECK(layer_for_path("Makefile") == Layer::Other);
  auto s = Snapshot::from_files({{"x.js", "1;"}, {"y.wxml", ""}, {"z.png", ""}});
  CHECK(s.files().at("x.js").layer == Layer::Logic);
  CHECK(s.files().at("y.wxml").layer == Layer::View);
  CHECK(s.files().at("z.png").layer == Layer::Other);
}

TEST_CASE("role rules") {
  CHECK(can_answer_tickets(UserRole::TeachingAssistant));
  CHECK_FALSE(can_answer_tickets(UserRole::Student));
  CHECK(can_create_tickets(UserRole::Student));
  CHECK(may_publish(UserRole::Student, QuestionKind::Practice));
  CHECK_FALSE(may_publish(UserRole::Student, QuestionKind::Acceptance));
  CHECK(may_publish(UserRole::Teacher, QuestionKind::Acceptance));
  CHECK(may_publish(UserRole::TeachingAssistant, QuestionKind::Acceptance));
}

TEST_CASE("session state machine") {
  using S = SessionState;
  CHECK(is_allowed_transition(S::Active, S::TimedOut));
  CHECK(is_allowed_transition(S::Active, S::Ended));
  CHECK(is_allowed_transition(S::TimedOut, S::Active));
  CHECK(is_allowed_transition(S::TimedOut, S::Ended));
  CHECK_FALSE(is_allowed_transition(S::Ended, S::Active));
  CHECK_FALSE(is_allowed_transition(S::Ended, S::TimedOut));
  CHECK_FALSE(is_allowed_transition(S::Active, S::Active));

  SessionRecord r;
  r.transition(S::Ended, from_millis(5), true);
  CHECK(r.completed);
  CHECK_THROWS_AS(r.transition(S::Active, from_millis(6)), std::logic_error);
}

TEST_CASE("event shape rules") {
  DebugEvent save{1, EventKind::Save, std::nullopt, std::nullopt, std::nullopt, {}};
  CHECK(validate_event_shape(save).has_value());
  save.snapshot_id = "abc";
  CHECK_FALSE(validate_event_shape(save).has_value());
  DebugEvent compile{2, EventKind::Compile, std::nullopt, std::nullopt, std::nullopt, {}};
  CHECK(validate_event_shape(compile).has_value());
  compile.compile_ok = false;
  CHECK_FALSE(validate_event_shape(compile).has_value());
  DebugEvent run{3, EventKind::Run, std::nullopt, true, std::nullopt, {}};
  CHECK(validate_event_shape(run).has_value());
}

TEST_CASE("replaying events reproduces derived fields") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    SessionRecord live;
    live.started_at = from_millis(1000);
    live.last_activity_at = live.started_at;
    std::int64_t t = 1000;
    std::uint64_t compiles = 0;
    std::vector<DebugEvent> log;
    int n = static_cast<int>(rng() % 30);
    for (int i = 1; i <= n; ++i) {
      t += static_cast<std::int64_t>(rng() % 5000);
      DebugEvent e;
      e.event_id = static_cast<std::uint64_t>(i);
      e.kind = static_cast<EventKind>(rng() % 5);
      e.at = from_millis(t);
      if (e.kind == EventKind::Save) e.snapshot_id = "s";
      if (e.kind == EventKind::Compile) {
        e.compile_ok = (rng() % 2) == 0;
        ++compiles;
      }
      live.apply(e);
      log.push_back(e);
    }
    SessionRecord replay;
    replay.started_at = from_millis(1000);
    replay.last_activity_at = replay.started_at;
    for (const auto& e : log) replay.apply(e);
    CHECK(replay.debug_count == compiles);
    CHECK(replay.debug_count == live.debug_count);
    CHECK(replay.last_activity_at == live.last_activity_at);
    CHECK(replay.last_activity_at == from_millis(t));
  }
}

TEST_CASE("event ids must increase") {
  SessionRecord r;
  DebugEvent e{1, EventKind::Run, std::nullopt, std::nullopt, std::nullopt, from_millis(10)};
  r.apply(e);
  CHECK_THROWS_AS(r.apply(e), std::logic_error);
  e.event_id = 2;
  e.at = from_millis(5);
  CHECK_THROWS_AS(r.apply(e), std::logic_error);
}
