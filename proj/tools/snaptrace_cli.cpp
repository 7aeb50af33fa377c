// snaptrace: analyst command line over a store and a running server.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "snaptrace/error.hpp"
#include "snaptrace/jsparse/bench.hpp"
#include "snaptrace/report.hpp"
#include "snaptrace/server.hpp"

using namespace snaptrace;
namespace fs = std::filesystem;

namespace {

// Exit codes; see the README table.
int exit_code(Errc code) {
  switch (code) {
    case Errc::StoreUnreadable:
    case Errc::FormatVersion:
      return 3;
    case Errc::SessionNotFound:
      return 4;
    case Errc::SessionNotEnded:
      return 5;
    case Errc::KTooLarge:
      return 6;
    case Errc::BenchError:
      return 7;
    case Errc::ServerUnreachable:
      return 8;
    default:
      return 9;
  }
}
constexpr int kLoadFailures = 10;

store::Store open_existing(const std::string& root) {
  store::StoreOptions opts;
  opts.create_if_missing = false;
  try {
    return store::Store(root, opts);
  } catch (const Error& e) {
    if (e.code() == Errc::IoError) throw Error(Errc::StoreUnreadable, e.what());
    throw;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << text;
}

// Prints the human form, or the JSON twin with --json; --json-out also writes the twin.
void emit(const std::string& text, const json& twin, bool as_json, const std::string& json_out) {
  std::cout << (as_json ? twin.dump(2) + "\n" : text);
  if (!json_out.empty()) write_text(json_out, twin.dump(2) + "\n");
}

std::vector<std::string> read_corpus(const std::string& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".js") files.push_back(entry.path());
  }
  if (ec) throw Error(Errc::BenchError, "cannot read corpus directory " + dir);
  std::sort(files.begin(), files.end());
  std::vector<std::string> sources;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    sources.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return sources;
}

std::string login_token(const std::string& url, const std::string& user, const std::string& secret) {
  httplib::Client client(url);
  client.set_connection_timeout(2, 0);
  auto res = client.Post("/api/v1/login", json{{"user_id", user}, {"secret", secret}}.dump(), "application/json");
  if (!res) throw Error(Errc::ServerUnreachable, "cannot reach " + url);
  if (res->status != 200) throw Error(Errc::AuthFailed, "login failed: " + res->body);
  return json::parse(res->body).at("token").get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snaptrace analyst tool"};
  app.require_subcommand(1);

  std::string store_root = "snaptrace-data";
  bool as_json = false;
  std::string json_out;
  auto common = [&](CLI::App* sub, bool needs_store) {
    if (needs_store) sub->add_option("--store", store_root, "store root")->capture_default_str();
    sub->add_flag("--json", as_json, "print the machine-readable form");
    sub->add_option("--json-out", json_out, "also write the machine-readable form to this file");
  };

  auto* stats = app.add_subcommand("stats", "per-group user, session, debug and completion totals");
  std::string group = "question";
  stats->add_option("--group", group, "question or question-kind")
      ->check(CLI::IsMember({"question", "question-kind"}))
      ->capture_default_str();
  common(stats, true);

  auto* timeline = app.add_subcommand("timeline", "render a session timeline as SVG");
  std::string session_id, out_path;
  timeline->add_option("--store", store_root, "store root")->capture_default_str();
  timeline->add_option("--session", session_id, "session id")->required();
  timeline->add_option("--out", out_path, "output SVG path")->required();

  auto* cluster = app.add_subcommand("cluster", "cluster ended sessions by behavior label strings");
  std::size_t k = behavior::kDefaultClusterCount;
  std::uint64_t seed = 1;
  cluster->add_option("-k", k, "cluster count")->capture_default_str();
  cluster->add_option("--seed", seed, "medoid seed")->capture_default_str();
  common(cluster, true);

  auto* bench = app.add_subcommand("bench", "time the parser over a corpus directory");
  std::string corpus_dir;
  int frames = 5;
  bench->add_option("--corpus", corpus_dir, "directory of .js files")->required();
  bench->add_option("--frames", frames, "timed passes per configuration")->capture_default_str();
  common(bench, false);

  auto* loadtest = app.add_subcommand("loadtest", "paced GET load against a running server");
  report::LoadTestOptions lt;
  lt.url = "http://127.0.0.1:8080";
  std::string lt_user, lt_secret;
  loadtest->add_option("--url", lt.url, "server base URL")->capture_default_str();
  loadtest->add_option("--requests", lt.total_requests, "total requests")->capture_default_str();
  loadtest->add_option("--duration", lt.duration_seconds, "seconds to spread them over")->capture_default_str();
  loadtest->add_option("--senders", lt.senders, "concurrent senders")->capture_default_str();
  loadtest->add_option("--token", lt.token, "auth token");
  loadtest->add_option("--user", lt_user, "log in as this user instead of --token");
  loadtest->add_option("--secret", lt_secret, "secret for --user");
  common(loadtest, false);

  auto* session_report = app.add_subcommand("session-report", "analysis document for an ended session");
  std::vector<std::string> prefixes = behavior::default_api_prefixes();
  session_report->add_option("--session", session_id, "session id")->required();
  session_report->add_option("--api-prefix", prefixes, "API namespace prefixes")->capture_default_str();
  common(session_report, true);

  auto* admin = app.add_subcommand("admin", "user provisioning");
  admin->require_subcommand(1);
  auto* add_user = admin->add_subcommand("add-user", "create or replace a user");
  std::string user_id, role_text, secret;
  add_user->add_option("--store", store_root, "store root")->capture_default_str();
  add_user->add_option("--id", user_id, "user id")->required();
  add_user->add_option("--role", role_text, "Student, TeachingAssistant or Teacher")->required();
  add_user->add_option("--secret", secret, "login secret")->required();
  auto* list_users = admin->add_subcommand("list-users", "list user ids and roles");
  list_users->add_option("--store", store_root, "store root")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help or the usage error
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*stats) {
      auto s = open_existing(store_root);
      auto rows = report::compute_stats(s, *report::parse_stats_group(group));
      emit(report::render_stats_text(rows), report::stats_to_json(rows), as_json, json_out);
    } else if (*timeline) {
      auto s = open_existing(store_root);
      SessionRecord rec;
      try {
        rec = s.load_session(session_id);
      } catch (const Error& e) {
        if (e.code() == Errc::NotFound) throw Error(Errc::SessionNotFound, "no session " + session_id);
        throw;
      }
      auto analysis = report::session_analysis(s, rec);
      write_text(out_path, report::render_timeline_svg(rec, analysis, [&](const std::string& id) {
                   return s.get_snapshot(id);
                 }));
    } else if (*cluster) {
      auto s = open_existing(store_root);
      auto r = report::cluster_report(s, k, seed);
      emit(report::render_cluster_report_text(r), r, as_json, json_out);
    } else if (*bench) {
      auto sources = read_corpus(corpus_dir);
      std::vector<js::BenchRow> rows;
      for (const auto& config : js::default_bench_configs()) rows.push_back(js::bench_parse(sources, frames, config));
      emit(js::render_bench_table(rows), json::parse(js::render_bench_json(rows)), as_json, json_out);
    } else if (*loadtest) {
      if (!lt_user.empty()) lt.token = login_token(lt.url, lt_user, lt_secret);
      auto r = report::run_loadtest(lt);
      emit(report::render_loadtest_text(r), report::loadtest_to_json(r), as_json, json_out);
      if (r.unreachable) return exit_code(Errc::ServerUnreachable);
      return r.failed == 0 ? 0 : kLoadFailures;
    } else if (*session_report) {
      auto s = open_existing(store_root);
      auto r = report::session_report(s, session_id, prefixes);
      emit(report::render_session_report_text(r), r, as_json, json_out);
    } else if (*add_user) {
      auto role = parse_user_role(role_text);
      if (!role) throw Error(Errc::BadRequest, "unknown role " + role_text);
      store::Store s(store_root);
      s.put_user(server::make_user(user_id, *role, secret));
      std::cout << "user " << user_id << " (" << to_string(*role) << ") saved\n";
    } else if (*list_users) {
      auto s = open_existing(store_root);
      for (const auto& u : s.users()) std::cout << u.user_id << "  " << to_string(u.role) << "\n";
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
}
