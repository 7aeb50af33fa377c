#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "snaptrace/error.hpp"
#include "snaptrace/report.hpp"

namespace snaptrace::report {

std::optional<StatsGroup> parse_stats_group(std::string_view text) {
  if (text == "question") return StatsGroup::Question;
  if (text == "question-kind") return StatsGroup::QuestionKind;
  return std::nullopt;
}

std::optional<double> StatsRow::avg_debugs_per_completion() const {
  if (completions == 0) return std::nullopt;
  return static_cast<double>(total_debugs) / static_cast<double>(completions);
}

std::vector<StatsRow> compute_stats(const store::Store& store, StatsGroup group) {
  std::map<std::string, std::string> group_of_question;
  for (const auto& q : store.questions()) {
    group_of_question[q.question_id] =
        group == StatsGroup::Question ? q.question_id : std::string(to_string(q.kind));
  }

  struct Acc {
    std::set<std::string> users;
    StatsRow row;
  };
  std::map<std::string, Acc> acc;
  for (const auto& id : store.list_sessions()) {
    auto rec = store.load_session(id);
    auto it = group_of_question.find(rec.question_id);
    std::string key = it != group_of_question.end()   ? it->second
                      : rec.question_id.empty()         ? std::string(to_string(SessionMode::FreeDebug))
                      : group == StatsGroup::Question ? rec.question_id
                                                      : std::string("Other");
    auto& a = acc[key];
    a.users.insert(rec.user_id);
    ++a.row.total_sessions;
    for (const auto& e : rec.events) {
      if (e.kind != EventKind::Compile) continue;
      ++a.row.total_debugs;
      if (e.compile_ok.value_or(false)) ++a.row.completions;
    }
  }

  std::vector<StatsRow> rows;
  for (auto& [key, a] : acc) {
    a.row.group = key;
    a.row.total_users = a.users.size();
    rows.push_back(a.row);
  }
  return rows;
}

namespace {

std::string format_avg(const StatsRow& row) {
  auto avg = row.avg_debugs_per_completion();
  if (!avg) return "—";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << *avg;
  return out.str();
}

// Display width, counting each UTF-8 sequence as one column.
std::size_t columns(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80 ? 1 : 0;
  return n;
}

}  // namespace

std::string render_stats_text(const std::vector<StatsRow>& rows) {
  const std::vector<std::string> header = {"group", "users", "sessions", "debugs", "avg debugs/completion",
                                           "completions"};
  std::vector<std::vector<std::string>> cells = {header};
  for (const auto& r : rows) {
    cells.push_back({r.group, std::to_string(r.total_users), std::to_string(r.total_sessions),
                     std::to_string(r.total_debugs), format_avg(r), std::to_string(r.completions)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], columns(line[i]));
  }
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      auto pad = std::string(width[i] - columns(line[i]), ' ');
      // Group names align left, numbers right.
      out << (i == 0 ? line[i] + pad : pad + line[i]) << (i + 1 < line.size() ? "  " : "\n");
    }
  }
  out << "\n" << kStatsFormula << "\n";
  return out.str();
}

json stats_to_json(const std::vector<StatsRow>& rows) {
  auto arr = json::array();
  for (const auto& r : rows) {
    auto avg = r.avg_debugs_per_completion();
    arr.push_back({{"group", r.group},
                   {"total_users", r.total_users},
                   {"total_sessions", r.total_sessions},
                   {"total_debugs", r.total_debugs},
                   {"avg_debugs_per_completion", avg ? json(*avg) : json(nullptr)},
                   {"completions", r.completions}});
  }
  return json{{"rows", arr}, {"formula", kStatsFormula}};
}

}  // namespace snaptrace::report
