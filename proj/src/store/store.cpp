#include "snaptrace/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "snaptrace/error.hpp"
#include "snaptrace/util.hpp"

namespace snaptrace::store {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_fail(const std::string& what, const fs::path& p) {
  throw Error(Errc::IoError, what + " " + p.string() + ": " + std::strerror(errno));
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) io_fail("cannot read", p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(int fd, std::string_view data, const fs::path& p) {
  while (!data.empty()) {
    auto n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("cannot write", p);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_dir(const fs::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

bool needs_escape(unsigned char c) { return c == '%' || c == ' ' || c == '=' || c < 0x20 || c == 0x7f; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string escape(std::string_view s) {
  static const char* digits = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (needs_escape(c)) {
      out += '%';
      out += digits[c >> 4];
      out += digits[c & 0xF];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) throw Error(Errc::CorruptLog, "truncated escape");
    int hi = hex_value(s[i + 1]), lo = hex_value(s[i + 2]);
    if (hi < 0 || lo < 0) throw Error(Errc::CorruptLog, "bad escape");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

std::int64_t to_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(Errc::CorruptLog, "bad integer for " + std::string(what) + ": " + std::string(s));
  }
  return v;
}

}  // namespace

bool valid_record_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

std::string encode_fields(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out;
  for (const auto& [k, v] : fields) {
    if (!out.empty()) out += ' ';
    out += escape(k);
    out += '=';
    out += escape(v);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> decode_fields(std::string_view payload) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t start = 0;
  while (start <= payload.size()) {
    auto end = payload.find(' ', start);
    if (end == std::string_view::npos) end = payload.size();
    auto item = payload.substr(start, end - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::CorruptLog, "field without '='");
    out.emplace_back(unescape(item.substr(0, eq)), unescape(item.substr(eq + 1)));
    start = end + 1;
  }
  return out;
}

std::string frame_line(std::string_view payload) {
  return std::to_string(payload.size()) + " " + std::string(payload) + "\n";
}

ParsedLog parse_log(std::string_view bytes) {
  ParsedLog out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t digits_end = pos;
    while (digits_end < bytes.size() && bytes[digits_end] >= '0' && bytes[digits_end] <= '9') ++digits_end;
    if (digits_end == bytes.size()) {
      out.torn = true;  // length prefix cut short
      break;
    }
    if (digits_end == pos || bytes[digits_end] != ' ' || digits_end - pos > 12) {
      throw Error(Errc::CorruptLog, "bad frame header at byte " + std::to_string(pos));
    }
    std::size_t len = 0;
    std::from_chars(bytes.data() + pos, bytes.data() + digits_end, len);
    const std::size_t payload_start = digits_end + 1;
    if (payload_start + len + 1 > bytes.size()) {
      out.torn = true;
      break;
    }
    if (bytes[payload_start + len] != '\n') {
      throw Error(Errc::CorruptLog, "frame length mismatch at byte " + std::to_string(pos));
    }
    out.payloads.emplace_back(bytes.substr(payload_start, len));
    pos = payload_start + len + 1;
    out.complete_bytes = pos;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Record files

class RecordFile {
 public:
  RecordFile(fs::path path, bool sync) : path_(std::move(path)), sync_(sync) {
    if (!fs::exists(path_)) return;
    auto bytes = read_all(path_);
    std::size_t pos = 0, line_no = 0;
    while (pos < bytes.size()) {
      auto nl = bytes.find('\n', pos);
      if (nl == std::string::npos) {
        // Torn final line: drop it so later appends start on a fresh line.
        fs::resize_file(path_, pos);
        break;
      }
      ++line_no;
      auto line = std::string_view(bytes).substr(pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      try {
        auto j = json::parse(line);
        auto id = j.at("id").get<std::string>();
        rows_[id] = std::move(j);
      } catch (const json::exception& e) {
        throw Error(Errc::CorruptLog, path_.string() + " line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }

  void put(const json& row) {
    std::lock_guard lock(mu_);
    auto line = row.dump() + "\n";
    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) io_fail("cannot open", path_);
    try {
      write_all(fd, line, path_);
      if (sync_ && ::fdatasync(fd) != 0) io_fail("cannot sync", path_);
    } catch (...) {
      ::close(fd);
      throw;
    }
    ::close(fd);
    rows_[row.at("id").get<std::string>()] = row;
  }

  [[nodiscard]] std::optional<json> get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = rows_.find(id);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::vector<json> all() const {
    std::lock_guard lock(mu_);
    std::vector<json> out;
    for (const auto& [id, row] : rows_) out.push_back(row);
    return out;
  }

 private:
  fs::path path_;
  bool sync_;
  mutable std::mutex mu_;
  std::map<std::string, json> rows_;
};

// ---------------------------------------------------------------------------
// Store

Store::Store(fs::path root, StoreOptions options) : root_(std::move(root)), options_(options) {
  std::error_code ec;
  if (!fs::exists(root_, ec)) {
    if (!options_.create_if_missing) throw Error(Errc::StoreUnreadable, "no store at " + root_.string());
  }
  const auto version_file = root_ / "meta" / "version";
  if (fs::exists(version_file, ec)) {
    auto v = read_all(version_file);
    while (!v.empty() && (v.back() == '\n' || v.back() == '\r')) v.pop_back();
    if (v != kFormatVersion) {
      throw Error(Errc::FormatVersion, "store format " + v + " is not supported (expected " +
                                           std::string(kFormatVersion) + ")");
    }
  } else {
    if (!options_.create_if_missing) throw Error(Errc::StoreUnreadable, "no store version file in " + root_.string());
    for (const char* dir : {"meta", "blobs", "sessions", "records"}) {
      fs::create_directories(root_ / dir, ec);
      if (ec) throw Error(Errc::IoError, "cannot create " + (root_ / dir).string() + ": " + ec.message());
    }
    write_file_atomic(version_file, std::string(kFormatVersion) + "\n");
  }
  for (const char* dir : {"blobs", "sessions", "records"}) fs::create_directories(root_ / dir, ec);
  users_ = std::make_unique<RecordFile>(root_ / "records" / "users.db", options_.sync);
  questions_ = std::make_unique<RecordFile>(root_ / "records" / "questions.db", options_.sync);
  tickets_ = std::make_unique<RecordFile>(root_ / "records" / "tickets.db", options_.sync);
  tokens_ = std::make_unique<RecordFile>(root_ / "records" / "tokens.db", options_.sync);
}

Store::~Store() = default;

void Store::write_file_atomic(const fs::path& target, std::string_view bytes) {
  auto tmp = target.parent_path() / (".tmp-" + random_hex(8));
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  try {
    write_all(fd, bytes, tmp);
    if (options_.sync && ::fsync(fd) != 0) io_fail("cannot sync", tmp);
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), target.c_str()) != 0) {
    ::unlink(tmp.c_str());
    io_fail("cannot rename into", target);
  }
  if (options_.sync) sync_dir(target.parent_path());
}

// --- blobs ------------------------------------------------------------------

fs::path Store::blob_path(const std::string& id) const {
  if (id.size() != 64 || !std::all_of(id.begin(), id.end(), [](char c) { return hex_value(c) >= 0; })) {
    throw Error(Errc::NotFound, "not a snapshot id: " + id);
  }
  return root_ / "blobs" / id.substr(0, 2) / id;
}

std::string Store::put_snapshot(const Snapshot& snapshot) {
  const auto& id = snapshot.id();
  auto path = blob_path(id);
  std::error_code ec;
  if (fs::exists(path, ec)) {
    if (sha256_hex(read_all(path)) != id) throw Error(Errc::CorruptBlob, "blob " + id + " fails its digest check");
    return id;
  }
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  write_file_atomic(path, snapshot.canonical_encoding());
  return id;
}

Snapshot Store::get_snapshot(const std::string& id) const {
  auto path = blob_path(id);
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(Errc::NotFound, "no snapshot " + id);
  auto bytes = read_all(path);
  if (sha256_hex(bytes) != id) throw Error(Errc::CorruptBlob, "blob " + id + " fails its digest check");
  try {
    return Snapshot::decode(bytes);
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::CorruptBlob, "blob " + id + " is not a file set: " + e.what());
  }
}

bool Store::has_snapshot(const std::string& id) const {
  try {
    std::error_code ec;
    return fs::exists(blob_path(id), ec);
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::string> Store::list_snapshots() const {
  std::vector<std::string> out;
  for (const auto& shard : fs::directory_iterator(root_ / "blobs")) {
    if (!shard.is_directory()) continue;
    for (const auto& f : fs::directory_iterator(shard.path())) {
      auto name = f.path().filename().string();
      if (name.size() == 64) out.push_back(name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- sessions ---------------------------------------------------------------

fs::path Store::log_path(const std::string& session_id) const {
  if (!valid_record_id(session_id)) throw Error(Errc::NotFound, "not a session id: " + session_id);
  return root_ / "sessions" / (session_id + ".log");
}

Store::SessionLog& Store::log_state(const std::string& session_id) {
  std::lock_guard lock(logs_mu_);
  auto& slot = logs_[session_id];
  if (!slot) slot = std::make_unique<SessionLog>();
  return *slot;
}

// Drops a torn tail and learns the last event id. Caller holds log.mu.
void Store::prepare_log(const std::string& session_id, SessionLog& log) {
  if (log.checked) return;
  auto path = log_path(session_id);
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(Errc::NotFound, "no session " + session_id);
  auto bytes = read_all(path);
  auto parsed = parse_log(bytes);
  if (parsed.torn) {
    fs::resize_file(path, parsed.complete_bytes, ec);
    if (ec) throw Error(Errc::IoError, "cannot truncate " + path.string() + ": " + ec.message());
  }
  std::uint64_t last = 0;
  for (const auto& payload : parsed.payloads) {
    auto fields = decode_fields(payload);
    std::map<std::string, std::string> m(fields.begin(), fields.end());
    if (m["type"] == "event") last = static_cast<std::uint64_t>(to_int(m["seq"], "seq"));
  }
  log.last_event_id = last;
  log.checked = true;
}

void Store::append_line(const std::string& session_id, const std::string& payload, bool is_event) {
  auto path = log_path(session_id);
  auto line = frame_line(payload);
  int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
  if (fd < 0) io_fail("cannot open", path);
  if (is_event && options_.crash) {
    auto n = ++event_appends_;
    if (n == options_.crash->on_append) {
      auto cut = std::min(options_.crash->bytes, line.size() - 1);
      (void)::write(fd, line.data(), cut);
      ::fsync(fd);
      std::_Exit(77);
    }
  }
  try {
    write_all(fd, line, path);
    if (options_.sync && ::fdatasync(fd) != 0) io_fail("cannot sync", path);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

void Store::create_session(const SessionRecord& header) {
  auto path = log_path(header.session_id);
  auto& log = log_state(header.session_id);
  std::lock_guard lock(log.mu);
  auto payload = encode_fields({{"type", "session"},
                                {"id", header.session_id},
                                {"user", header.user_id},
                                {"question", header.question_id},
                                {"mode", std::string(to_string(header.mode))},
                                {"started", std::to_string(to_millis(header.started_at))}});
  // The header goes in through a temp file and link(), so a log never exists
  // without its header line.
  auto tmp = path.parent_path() / (".tmp-" + random_hex(8));
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  try {
    write_all(fd, frame_line(payload), tmp);
    if (options_.sync && ::fsync(fd) != 0) io_fail("cannot sync", tmp);
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::link(tmp.c_str(), path.c_str()) != 0) {
    auto err = errno;
    ::unlink(tmp.c_str());
    if (err == EEXIST) throw Error(Errc::SessionExists, "session " + header.session_id + " already exists");
    errno = err;
    io_fail("cannot create", path);
  }
  ::unlink(tmp.c_str());
  if (options_.sync) sync_dir(path.parent_path());
  log.last_event_id = 0;
  log.checked = true;
}

void Store::append_event(const std::string& session_id, const DebugEvent& event) {
  auto& log = log_state(session_id);
  std::lock_guard lock(log.mu);
  prepare_log(session_id, log);
  if (event.event_id != log.last_event_id + 1) {
    throw Error(Errc::SequenceGap, "session " + session_id + " expects event " +
                                       std::to_string(log.last_event_id + 1) + ", got " +
                                       std::to_string(event.event_id));
  }
  std::vector<std::pair<std::string, std::string>> fields{{"type", "event"},
                                                          {"seq", std::to_string(event.event_id)},
                                                          {"kind", std::string(to_string(event.kind))},
                                                          {"at", std::to_string(to_millis(event.at))}};
  if (event.snapshot_id) fields.emplace_back("snapshot", *event.snapshot_id);
  if (event.compile_ok) fields.emplace_back("ok", *event.compile_ok ? "1" : "0");
  if (event.error_log) fields.emplace_back("log", *event.error_log);
  append_line(session_id, encode_fields(fields), true);
  log.last_event_id = event.event_id;
}

void Store::append_state(const std::string& session_id, SessionState state, Timestamp at, bool completed) {
  auto& log = log_state(session_id);
  std::lock_guard lock(log.mu);
  prepare_log(session_id, log);
  append_line(session_id,
              encode_fields({{"type", "state"},
                             {"state", std::string(to_string(state))},
                             {"at", std::to_string(to_millis(at))},
                             {"completed", completed ? "1" : "0"}}),
              false);
}

SessionRecord Store::load_session(const std::string& session_id) const {
  auto path = log_path(session_id);
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(Errc::NotFound, "no session " + session_id);
  auto parsed = parse_log(read_all(path));
  SessionRecord rec;
  bool have_header = false;
  for (std::size_t i = 0; i < parsed.payloads.size(); ++i) {
    auto fields = decode_fields(parsed.payloads[i]);
    std::map<std::string, std::string> m(fields.begin(), fields.end());
    const auto where = session_id + " line " + std::to_string(i + 1);
    const auto& type = m["type"];
    if (!have_header) {
      if (type != "session") throw Error(Errc::CorruptLog, where + ": missing session header");
      rec.session_id = m["id"];
      rec.user_id = m["user"];
      rec.question_id = m["question"];
      auto mode = parse_session_mode(m["mode"]);
      if (!mode) throw Error(Errc::CorruptLog, where + ": bad mode");
      rec.mode = *mode;
      rec.started_at = from_millis(to_int(m["started"], "started"));
      rec.last_activity_at = rec.started_at;
      have_header = true;
      continue;
    }
    try {
      if (type == "event") {
        DebugEvent e;
        e.event_id = static_cast<std::uint64_t>(to_int(m["seq"], "seq"));
        if (e.event_id != rec.last_event_id() + 1) throw Error(Errc::CorruptLog, where + ": event ids not consecutive");
        auto kind = parse_event_kind(m["kind"]);
        if (!kind) throw Error(Errc::CorruptLog, where + ": bad event kind");
        e.kind = *kind;
        e.at = from_millis(to_int(m["at"], "at"));
        if (m.count("snapshot")) e.snapshot_id = m["snapshot"];
        if (m.count("ok")) e.compile_ok = m["ok"] == "1";
        if (m.count("log")) e.error_log = m["log"];
        rec.apply(e);
      } else if (type == "state") {
        auto state = parse_session_state(m["state"]);
        if (!state) throw Error(Errc::CorruptLog, where + ": bad state");
        rec.transition(*state, from_millis(to_int(m["at"], "at")), m["completed"] == "1");
      } else {
        throw Error(Errc::CorruptLog, where + ": unknown record type '" + type + "'");
      }
    } catch (const std::logic_error& e) {
      throw Error(Errc::CorruptLog, where + ": " + e.what());
    }
  }
  if (!have_header) throw Error(Errc::CorruptLog, session_id + ": empty log");
  return rec;
}

bool Store::has_session(const std::string& session_id) const {
  if (!valid_record_id(session_id)) return false;
  std::error_code ec;
  return fs::exists(log_path(session_id), ec);
}

std::vector<std::string> Store::list_sessions() const {
  std::vector<std::string> out;
  for (const auto& f : fs::directory_iterator(root_ / "sessions")) {
    if (f.path().extension() == ".log") out.push_back(f.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Store::write_analysis(const std::string& session_id, const json& analysis) {
  auto path = log_path(session_id);
  path.replace_extension(".analysis.json");
  write_file_atomic(path, analysis.dump(2) + "\n");
}

std::optional<json> Store::read_analysis(const std::string& session_id) const {
  auto path = log_path(session_id);
  path.replace_extension(".analysis.json");
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  try {
    return json::parse(read_all(path));
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptLog, path.string() + ": " + e.what());
  }
}

// --- records ----------------------------------------------------------------

void Store::put_user(const User& user) { users_->put(json(user)); }

std::optional<User> Store::get_user(const std::string& id) const {
  auto row = users_->get(id);
  if (!row) return std::nullopt;
  return row->get<User>();
}

std::vector<User> Store::users() const {
  std::vector<User> out;
  for (const auto& row : users_->all()) out.push_back(row.get<User>());
  return out;
}

void Store::put_question(const Question& q) { questions_->put(json(q)); }

std::optional<Question> Store::get_question(const std::string& id) const {
  auto row = questions_->get(id);
  if (!row) return std::nullopt;
  return row->get<Question>();
}

std::vector<Question> Store::questions() const {
  std::vector<Question> out;
  for (const auto& row : questions_->all()) out.push_back(row.get<Question>());
  return out;
}

void Store::put_ticket(const HelpTicket& t) { tickets_->put(json(t)); }

std::optional<HelpTicket> Store::get_ticket(const std::string& id) const {
  auto row = tickets_->get(id);
  if (!row) return std::nullopt;
  return row->get<HelpTicket>();
}

std::vector<HelpTicket> Store::tickets() const {
  std::vector<HelpTicket> out;
  for (const auto& row : tickets_->all()) out.push_back(row.get<HelpTicket>());
  return out;
}

void Store::put_token(const AuthToken& t) { tokens_->put(json(t)); }

std::optional<AuthToken> Store::get_token(const std::string& token) const {
  auto row = tokens_->get(token);
  if (!row) return std::nullopt;
  return row->get<AuthToken>();
}

}  // namespace snaptrace::store
