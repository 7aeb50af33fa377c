#pragma once

#include <atomic>
#include <fstream>
#include <memory>

#include "snaptrace/server.hpp"
#include "support.hpp"

namespace testsupport {

using namespace snaptrace;

inline Snapshot program(const std::string& logic, const std::string& view = "<view>{{title}}</view>\n") {
  return Snapshot::from_files({{"pages/index/index.js", logic}, {"pages/index/index.wxml", view}});
}

inline const std::string kBuggy =
    "Page({\n  onLoad: function () {\n    wx.request({ url: 'https://api.example.com/v1', data: 1 });\n  }\n});\n";
inline const std::string kFixed =
    "Page({\n  onLoad: function () {\n    wx.request({ url: 'https://api.example.com/v1', data: 2 });\n  }\n});\n";

/// A store with four users and one published question, a platform on a
/// controllable clock, and helpers for common flows.
struct PlatformFixture {
  TempDir dir;
  std::unique_ptr<store::Store> store;
  std::shared_ptr<std::atomic<std::int64_t>> now = std::make_shared<std::atomic<std::int64_t>>(1'700'000'000'000);
  server::Config config;
  std::unique_ptr<server::Platform> platform;
  std::string question_id = "q-request";
  std::string rank_question_id = "q-rank";

  PlatformFixture() {
    store = std::make_unique<store::Store>(dir.path());
    store->put_user(server::make_user("alice", UserRole::Student, "alice-pw"));
    store->put_user(server::make_user("bob", UserRole::Student, "bob-pw"));
    store->put_user(server::make_user("tara", UserRole::TeachingAssistant, "tara-pw"));
    store->put_user(server::make_user("tom", UserRole::Teacher, "tom-pw"));
    restart();
    auto teacher = token("tom");
    server::QuestionDraft draft{Question{}, program(kBuggy), program(kFixed)};
    draft.question.question_id = question_id;
    draft.question.kind = QuestionKind::Acceptance;
    draft.question.title = "Fix the request payload";
    draft.question.error_classes = {ErrorClass::ParameterError};
    platform->publish_question(teacher, draft);
    draft.question.question_id = rank_question_id;
    draft.question.rank_enabled = true;
    platform->publish_question(teacher, draft);
  }

  /// Simulates a server restart over the same directory.
  void restart() {
    platform.reset();
    store = std::make_unique<store::Store>(dir.path());
    auto clock = now;
    platform = std::make_unique<server::Platform>(*store, config, [clock] { return from_millis(clock->load()); });
  }

  void advance(std::chrono::milliseconds d) { *now += d.count(); }

  std::string token(const std::string& user) { return platform->login(user, user + "-pw").token; }

  std::uint64_t save(const std::string& tok, const std::string& session, const Snapshot& s) {
    advance(std::chrono::seconds(5));
    return platform->record_event(tok, session, server::EventInput{EventKind::Save, s, std::nullopt, std::nullopt});
  }

  std::uint64_t compile(const std::string& tok, const std::string& session, bool ok) {
    advance(std::chrono::seconds(5));
    return platform->record_event(
        tok, session,
        server::EventInput{EventKind::Compile, std::nullopt, ok, ok ? std::nullopt : std::optional<std::string>("boom")});
  }
};

/// Code of the Error thrown by f, or kNoError when it returns normally.
inline constexpr auto kNoError = static_cast<Errc>(-1);

template <typename F>
Errc error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return kNoError;
}

}  // namespace testsupport
