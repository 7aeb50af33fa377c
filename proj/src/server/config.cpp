#include <cstdlib>
#include <fstream>

#include "snaptrace/error.hpp"
#include "snaptrace/server.hpp"

namespace snaptrace::server {

namespace {

void apply_listen(Config& c, const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) throw Error(Errc::BadRequest, "listen must be host:port, got " + text);
  try {
    std::size_t used = 0;
    int port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || port < 0 || port > 65535) throw std::invalid_argument("port");
    c.host = text.substr(0, colon);
    c.port = port;
  } catch (const std::exception&) {
    throw Error(Errc::BadRequest, "bad port in listen address " + text);
  }
}

std::int64_t parse_positive(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(text, &used);
    if (used == text.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw Error(Errc::BadRequest, std::string(what) + " must be a positive integer, got " + text);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

Config load_config(const std::optional<std::string>& path, const EnvLookup& env) {
  Config c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(Errc::IoError, "cannot read config " + *path);
    json j;
    try {
      j = json::parse(in);
      if (j.contains("listen")) apply_listen(c, j.at("listen").get<std::string>());
      if (j.contains("store_root")) c.store_root = j.at("store_root").get<std::string>();
      if (j.contains("session_timeout_seconds")) {
        auto s = j.at("session_timeout_seconds").get<std::int64_t>();
        if (s <= 0) throw Error(Errc::BadRequest, "session_timeout_seconds must be positive");
        c.session_timeout = std::chrono::seconds(s);
      }
      if (j.contains("api_prefixes")) c.api_prefixes = j.at("api_prefixes").get<std::vector<std::string>>();
      if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
    } catch (const json::exception& e) {
      throw Error(Errc::BadRequest, "config " + *path + ": " + e.what());
    }
  }
  if (auto v = env("SNAPTRACE_LISTEN")) apply_listen(c, *v);
  if (auto v = env("SNAPTRACE_STORE")) c.store_root = *v;
  if (auto v = env("SNAPTRACE_SESSION_TIMEOUT")) {
    c.session_timeout = std::chrono::seconds(parse_positive(*v, "SNAPTRACE_SESSION_TIMEOUT"));
  }
  if (auto v = env("SNAPTRACE_API_PREFIXES")) c.api_prefixes = split_commas(*v);
  if (auto v = env("SNAPTRACE_THREADS")) c.threads = static_cast<std::size_t>(parse_positive(*v, "SNAPTRACE_THREADS"));
  if (c.threads == 0) throw Error(Errc::BadRequest, "threads must be positive");
  return c;
}

}  // namespace snaptrace::server
