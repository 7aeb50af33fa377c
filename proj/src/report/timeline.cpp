#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "snaptrace/report.hpp"

namespace snaptrace::report {

namespace {

constexpr double kWidth = 960;
constexpr double kLeft = 180;
constexpr double kRight = 40;
constexpr double kTop = 40;
constexpr double kLane = 32;

std::string_view behavior_color(std::optional<Behavior> b) {
  if (!b) return "#7f7f7f";
  switch (*b) {
    case Behavior::NoChange: return "#bdbdbd";
    case Behavior::ParamTweak: return "#1f77b4";
    case Behavior::ApiChange: return "#9467bd";
    case Behavior::StructEdit: return "#ff7f0e";
    case Behavior::Revert: return "#8c564b";
    case Behavior::SyntaxBreak: return "#d62728";
    case Behavior::SyntaxFix: return "#2ca02c";
  }
  return "#7f7f7f";
}

std::string num(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_timeline_svg(const SessionRecord& session, const BehaviorSequence& analysis,
                                const behavior::SnapshotResolver& snapshots) {
  // Files touched by each save: every file of the first save, then the paths
  // whose bytes changed, appeared, or disappeared.
  std::vector<const DebugEvent*> saves = session.saves();
  std::vector<std::set<std::string>> touched(saves.size());
  std::set<std::string> paths;
  std::optional<Snapshot> prev;
  for (std::size_t i = 0; i < saves.size(); ++i) {
    auto snap = snapshots(*saves[i]->snapshot_id);
    for (const auto& [p, rec] : snap.files()) {
      if (!prev || !prev->files().count(p) || prev->files().at(p).bytes != rec.bytes) touched[i].insert(p);
    }
    if (prev) {
      for (const auto& [p, _] : prev->files()) {
        if (!snap.files().count(p)) touched[i].insert(p);
      }
    }
    paths.insert(touched[i].begin(), touched[i].end());
    prev = std::move(snap);
  }

  std::vector<std::string> lanes = {"events"};
  const bool with_directions = !analysis.directions.empty();
  if (with_directions) lanes.emplace_back("direction");
  lanes.insert(lanes.end(), paths.begin(), paths.end());
  std::map<std::string, double> lane_y;
  for (std::size_t i = 0; i < lanes.size(); ++i) lane_y[lanes[i]] = kTop + kLane * (static_cast<double>(i) + 0.5);
  const double axis_y = kTop + kLane * static_cast<double>(lanes.size()) + 10;
  const double height = axis_y + 70;

  auto t0 = session.started_at;
  auto t1 = t0;
  for (const auto& e : session.events) t1 = std::max(t1, e.at);
  if (session.ended_at) t1 = std::max(t1, *session.ended_at);
  const double span_ms = std::max<double>(1.0, static_cast<double>(to_millis(t1) - to_millis(t0)));
  const double plot = kWidth - kLeft - kRight;
  auto x_of = [&](Timestamp t) { return kLeft + plot * static_cast<double>(to_millis(t) - to_millis(t0)) / span_ms; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(height) << "\" font-family=\"monospace\" font-size=\"11\">\n";
  svg << "<title>session " << escape(session.session_id) << "</title>\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(height) << "\" fill=\"#ffffff\"/>\n";

  for (const auto& name : lanes) {
    auto y = lane_y[name];
    svg << "<text x=\"8\" y=\"" << num(y + 4) << "\">" << escape(name) << "</text>\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
        << num(y) << "\" stroke=\"#eeeeee\"/>\n";
  }

  // Axis with five ticks labelled in seconds since the start.
  svg << "<line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(kWidth - kRight)
      << "\" y2=\"" << num(axis_y) << "\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double x = kLeft + plot * i / 4.0;
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(axis_y + 5) << "\" stroke=\"#000000\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(axis_y + 18) << "\" text-anchor=\"middle\">+"
        << num(span_ms * i / 4.0 / 1000.0) << "s</text>\n";
  }

  std::map<std::uint64_t, Behavior> label_at;  // label of the pair ending at a save
  for (const auto& l : analysis.labels) label_at[l.to_event_id] = l.label;

  for (std::size_t i = 0; i < saves.size(); ++i) {
    const auto* e = saves[i];
    auto it = label_at.find(e->event_id);
    auto color = behavior_color(it == label_at.end() ? std::nullopt : std::optional<Behavior>(it->second));
    auto label = it == label_at.end() ? std::string("first") : std::string(to_string(it->second));
    for (const auto& p : touched[i]) {
      svg << "<circle class=\"save\" data-event=\"" << e->event_id << "\" data-label=\"" << label << "\" cx=\""
          << num(x_of(e->at)) << "\" cy=\"" << num(lane_y[p]) << "\" r=\"5\" fill=\"" << color << "\"/>\n";
    }
  }

  const double ey = lane_y["events"];
  for (const auto& e : session.events) {
    const double x = x_of(e.at);
    switch (e.kind) {
      case EventKind::Compile:
        if (e.compile_ok.value_or(false)) {
          svg << "<circle class=\"compile-ok\" data-event=\"" << e.event_id << "\" cx=\"" << num(x) << "\" cy=\""
              << num(ey) << "\" r=\"5\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
        } else {
          svg << "<path class=\"compile-fail\" data-event=\"" << e.event_id << "\" d=\"M" << num(x - 5) << ' '
              << num(ey - 5) << " L" << num(x + 5) << ' ' << num(ey + 5) << " M" << num(x - 5) << ' ' << num(ey + 5)
              << " L" << num(x + 5) << ' ' << num(ey - 5) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        }
        break;
      case EventKind::Save:
        svg << "<line class=\"save-tick\" data-event=\"" << e.event_id << "\" x1=\"" << num(x) << "\" y1=\""
            << num(ey - 6) << "\" x2=\"" << num(x) << "\" y2=\"" << num(ey + 6) << "\" stroke=\"#7f7f7f\"/>\n";
        break;
      case EventKind::Run:
        svg << "<path class=\"run\" data-event=\"" << e.event_id << "\" d=\"M" << num(x - 4) << ' ' << num(ey - 5)
            << " L" << num(x + 5) << ' ' << num(ey) << " L" << num(x - 4) << ' ' << num(ey + 5)
            << " Z\" fill=\"#17becf\"/>\n";
        break;
      case EventKind::Help:
        svg << "<text class=\"help\" data-event=\"" << e.event_id << "\" x=\"" << num(x) << "\" y=\"" << num(ey + 4)
            << "\" text-anchor=\"middle\" fill=\"#e377c2\">?</text>\n";
        break;
      case EventKind::Reset:
        svg << "<rect class=\"reset\" data-event=\"" << e.event_id << "\" x=\"" << num(x - 4) << "\" y=\""
            << num(ey - 4) << "\" width=\"8\" height=\"8\" fill=\"#bcbd22\"/>\n";
        break;
    }
  }

  if (with_directions) {
    const double dy = lane_y["direction"];
    std::map<std::uint64_t, Timestamp> at_of;
    for (const auto& e : session.events) at_of[e.event_id] = e.at;
    for (const auto& d : analysis.directions) {
      if (!at_of.count(d.event_id)) continue;
      const double x = x_of(at_of[d.event_id]);
      svg << "<g class=\"direction\" data-event=\"" << d.event_id << "\" data-direction=\"" << to_string(d.direction)
          << "\">";
      switch (d.direction) {
        case Direction::Toward:
          svg << "<path d=\"M" << num(x) << ' ' << num(dy - 8) << " L" << num(x - 5) << ' ' << num(dy + 2) << " L"
              << num(x + 5) << ' ' << num(dy + 2) << " Z\" fill=\"#2ca02c\"/>";
          break;
        case Direction::Away:
          svg << "<path d=\"M" << num(x) << ' ' << num(dy + 8) << " L" << num(x - 5) << ' ' << num(dy - 2) << " L"
              << num(x + 5) << ' ' << num(dy - 2) << " Z\" fill=\"#d62728\"/>";
          break;
        case Direction::Neutral:
          svg << "<path d=\"M" << num(x - 6) << ' ' << num(dy) << " L" << num(x + 6) << ' ' << num(dy)
              << "\" stroke=\"#7f7f7f\" stroke-width=\"2\"/>";
          break;
        case Direction::Unknown:
          svg << "<text x=\"" << num(x) << "\" y=\"" << num(dy + 4) << "\" text-anchor=\"middle\" fill=\"#7f7f7f\">?</text>";
          break;
      }
      svg << "</g>\n";
    }
  }

  // Legend of save colours.
  double lx = kLeft;
  const double ly = axis_y + 44;
  for (auto b : {Behavior::NoChange, Behavior::ParamTweak, Behavior::ApiChange, Behavior::StructEdit, Behavior::Revert,
                 Behavior::SyntaxBreak, Behavior::SyntaxFix}) {
    svg << "<circle cx=\"" << num(lx) << "\" cy=\"" << num(ly) << "\" r=\"5\" fill=\"" << behavior_color(b) << "\"/>";
    svg << "<text x=\"" << num(lx + 8) << "\" y=\"" << num(ly + 4) << "\">" << to_string(b) << "</text>\n";
    lx += 100;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace snaptrace::report
