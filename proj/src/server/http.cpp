#include "httplib.h"
#include "snaptrace/error.hpp"
#include "snaptrace/server.hpp"

namespace snaptrace::server {

int http_status(Errc code) {
  switch (code) {
    case Errc::BadRequest:
    case Errc::MissingSnapshot:
    case Errc::EmptySnapshot:
    case Errc::SequenceGap:
      return 400;
    case Errc::AuthFailed:
    case Errc::AuthExpired:
      return 401;
    case Errc::Forbidden:
    case Errc::NotOwner:
      return 403;
    case Errc::NotFound:
    case Errc::QuestionNotFound:
    case Errc::SessionNotFound:
    case Errc::TicketNotFound:
      return 404;
    case Errc::SessionExists:
    case Errc::ResumeAvailable:
    case Errc::SessionNotActive:
    case Errc::NothingToResume:
    case Errc::AlreadyEnded:
    case Errc::TicketNotOpen:
    case Errc::NoSnapshotYet:
    case Errc::SessionNotEnded:
      return 409;
    case Errc::ReferenceUnparseable:
    case Errc::NoSeededError:
    case Errc::EmptySession:
    case Errc::KTooLarge:
      return 422;
    default:
      return 500;
  }
}

namespace {

using httplib::Request;
using httplib::Response;

std::string bearer(const Request& req) {
  auto h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.rfind(prefix, 0) == 0) h.erase(0, prefix.size());
  return h;
}

json body_of(const Request& req) {
  if (req.body.empty()) return json::object();
  auto j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::BadRequest, "request body must be a JSON object");
  return j;
}

template <typename E, typename Parse>
E enum_arg(const json& j, const char* key, Parse parse) {
  if (!j.contains(key) || !j.at(key).is_string()) throw Error(Errc::BadRequest, std::string("missing ") + key);
  auto v = parse(j.at(key).get<std::string>());
  if (!v) throw Error(Errc::BadRequest, std::string("bad ") + key);
  return *v;
}

std::string string_arg(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw Error(Errc::BadRequest, std::string("missing ") + key);
  return j.at(key).get<std::string>();
}

// A present, non-null field; absent and null are treated alike.
const json* optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

// A default snapshot (no id) means there is nothing to hand out.
json snapshot_payload(const Snapshot& s) {
  if (s.id().empty()) return json{{"snapshot_id", nullptr}, {"snapshot", nullptr}};
  return json{{"snapshot_id", s.id()}, {"snapshot", snapshot_to_json(s)}};
}

json leaderboard_to_json(const Leaderboard& b) {
  auto entries = json::array();
  std::size_t rank = 0;
  for (const auto& e : b.entries) {
    entries.push_back({{"rank", ++rank},
                       {"user_id", e.user_id},
                       {"debug_count", e.debug_count},
                       {"elapsed_seconds", e.elapsed_seconds},
                       {"completed_at", to_millis(e.completed_at)}});
  }
  return json{{"question_id", b.question_id}, {"entries", entries}};
}

}  // namespace

struct HttpServer::Impl {
  Platform& platform;
  httplib::Server svr;

  explicit Impl(Platform& p) : platform(p) {
    const auto threads = p.config().threads;
    svr.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    svr.set_keep_alive_max_count(1000);
    routes();
  }

  template <typename F>
  auto wrap(F fn, int ok_status = 200) {
    return [fn, ok_status](const Request& req, Response& res) {
      try {
        json out = fn(req);
        res.status = ok_status;
        res.set_content(out.dump(), "application/json");
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(json{{"error", e.name()}, {"message", e.what()}}.dump(), "application/json");
      } catch (const json::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", "BadRequest"}, {"message", e.what()}}.dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(json{{"error", "Internal"}, {"message", e.what()}}.dump(), "application/json");
      }
    };
  }

  void routes() {
    const std::string base(kApiBase);
    auto& p = platform;

    svr.Post(base + "/login", wrap([&p](const Request& req) {
               auto body = body_of(req);
               auto t = p.login(string_arg(body, "user_id"), string_arg(body, "secret"));
               return json{{"token", t.token}, {"user_id", t.user_id}, {"expires_at", to_millis(t.expires_at)}};
             }));

    svr.Get(base + "/questions", wrap([&p](const Request& req) {
              return json(p.list_questions(bearer(req)));
            }));
    auto publish = [&p](const Request& req) {
      auto token = bearer(req);
      p.authenticate(token);
      auto body = body_of(req);
      if (!body.contains("question") || !body.contains("initial_snapshot")) {
        throw Error(Errc::BadRequest, "need question and initial_snapshot");
      }
      QuestionDraft draft{body.at("question").get<Question>(), snapshot_from_json(body.at("initial_snapshot")),
                          std::nullopt};
      if (auto ref = optional_field(body, "reference_snapshot")) draft.reference = snapshot_from_json(*ref);
      return json{{"question_id", p.publish_question(token, draft)}};
    };
    svr.Post(base + "/questions", wrap(publish, 201));
    svr.Get(base + R"(/questions/([A-Za-z0-9_-]+))", wrap([&p](const Request& req) {
              return json(p.get_question(bearer(req), req.matches[1]));
            }));
    svr.Get(base + R"(/questions/([A-Za-z0-9_-]+)/initial-snapshot)", wrap([&p](const Request& req) {
              return snapshot_payload(p.initial_snapshot(bearer(req), req.matches[1]));
            }));
    svr.Get(base + R"(/questions/([A-Za-z0-9_-]+)/leaderboard)", wrap([&p](const Request& req) {
              return leaderboard_to_json(p.leaderboard(bearer(req), req.matches[1]));
            }));

    auto start = [&p](const Request& req) {
      auto token = bearer(req);
      p.authenticate(token);
      auto body = body_of(req);
      auto mode = body.contains("mode") ? enum_arg<SessionMode>(body, "mode", parse_session_mode) : SessionMode::Training;
      auto question = body.contains("question_id") && !body.at("question_id").is_null()
                          ? string_arg(body, "question_id")
                          : std::string();
      auto r = p.start_session(token, question, mode);
      auto out = snapshot_payload(r.snapshot);
      out["session_id"] = r.session_id;
      return out;
    };
    svr.Post(base + "/sessions", wrap(start, 201));
    svr.Post(base + "/sessions/resume", wrap([&p](const Request& req) {
               auto token = bearer(req);
               p.authenticate(token);
               auto r = p.resume_session(token, string_arg(body_of(req), "question_id"));
               auto out = snapshot_payload(r.snapshot);
               out["session_id"] = r.session_id;
               out["last_event_id"] = r.last_event_id;
               return out;
             }));
    auto record = [&p](const Request& req) {
      auto token = bearer(req);
      p.authenticate(token);
      auto body = body_of(req);
      EventInput in;
      in.kind = enum_arg<EventKind>(body, "kind", parse_event_kind);
      if (auto snap = optional_field(body, "snapshot")) in.snapshot = snapshot_from_json(*snap);
      if (auto ok = optional_field(body, "compile_ok")) in.compile_ok = ok->get<bool>();
      if (auto log = optional_field(body, "error_log")) in.error_log = log->get<std::string>();
      return json{{"event_id", p.record_event(token, req.matches[1], in)}};
    };
    svr.Post(base + R"(/sessions/([A-Za-z0-9_-]+)/events)", wrap(record, 201));
    svr.Post(base + R"(/sessions/([A-Za-z0-9_-]+)/end)", wrap([&p](const Request& req) {
               auto token = bearer(req);
               p.authenticate(token);
               auto body = body_of(req);
               bool completed = body.contains("completed") && body.at("completed").get<bool>();
               auto s = p.end_session(token, req.matches[1], completed);
               return json{{"session_id", s.session_id},
                           {"debug_count", s.debug_count},
                           {"elapsed_seconds", s.elapsed_seconds},
                           {"analysis", behavior_sequence_to_json(s.analysis)}};
             }));
    svr.Get(base + R"(/sessions/([A-Za-z0-9_-]+))", wrap([&p](const Request& req) {
              return session_to_json(p.get_session(bearer(req), req.matches[1]));
            }));

    svr.Get(base + "/tickets", wrap([&p](const Request& req) { return json(p.list_tickets(bearer(req))); }));
    auto open_ticket = [&p](const Request& req) {
      auto token = bearer(req);
      p.authenticate(token);
      auto body = body_of(req);
      auto id = p.create_help_ticket(token, string_arg(body, "session_id"), body.value("form_text", std::string()));
      return json{{"ticket_id", id}};
    };
    svr.Post(base + "/tickets", wrap(open_ticket, 201));
    svr.Post(base + R"(/tickets/([A-Za-z0-9_-]+)/answer)", wrap([&p](const Request& req) {
               auto token = bearer(req);
               p.authenticate(token);
               auto body = body_of(req);
               std::optional<Snapshot> answer;
               if (auto snap = optional_field(body, "answer_snapshot")) answer = snapshot_from_json(*snap);
               return json(p.answer_ticket(token, req.matches[1], body.value("explanation", std::string()), answer));
             }));

    svr.Get(base + "/stats", wrap([&p](const Request& req) {
              auto token = bearer(req);
              auto group_text = req.has_param("group") ? req.get_param_value("group") : std::string("question");
              auto group = report::parse_stats_group(group_text);
              if (!group) throw Error(Errc::BadRequest, "group must be question or question-kind");
              return report::stats_to_json(p.stats(token, *group));
            }));
  }
};

HttpServer::HttpServer(Platform& platform) : impl_(std::make_unique<Impl>(platform)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->svr.bind_to_any_port(host);
    if (bound < 0) throw Error(Errc::IoError, "cannot bind " + host);
  } else if (!impl_->svr.bind_to_port(host, port)) {
    throw Error(Errc::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { impl_->svr.listen_after_bind(); });
  impl_->svr.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  if (!impl_->svr.listen(host, port)) throw Error(Errc::IoError, "cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
  impl_->svr.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace snaptrace::server
