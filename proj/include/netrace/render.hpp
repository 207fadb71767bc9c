#pragma once

// Gantt-style timing diagrams: one lane per link (or per node), transmission
// bars of width 1/R per unit, propagation as slanted connectors.

#include "netrace/timeline.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace netrace::report {

enum class Format { Text, Svg };

enum class ActivityKind { Transmit, Propagate, Runner };

struct Activity {
  std::size_t lane = 0;
  Seconds start{0};
  Seconds end{0};
  ActivityKind kind = ActivityKind::Transmit;
  std::string actor;
};

struct LaneLayout {
  std::vector<std::string> lanes;   // in order of first use
  std::vector<Activity> activities;
  std::vector<std::size_t> event_lane;  // lane of every timeline event
  Seconds horizon{0};
};

namespace detail {

inline std::string lane_of(const Event& e, LaneStyle style) {
  if (style == LaneStyle::PerLink) return e.where;
  auto [from, to] = split_link(e.where);
  if (to.empty()) return from;
  // arrivals belong to the receiving node
  const bool receiving = e.kind == EventKind::PhysicalArrival || e.kind == EventKind::FullArrival ||
                         e.kind == EventKind::QueryReturn;
  return receiving ? to : from;
}

}  // namespace detail

/// Derives lanes and activity intervals from a Timeline. Transmission pairs
/// TxStart with the actor's next TxEnd on the same link, propagation pairs
/// TxStart with the next PhysicalArrival, and a runner leg spans a
/// QueryDispatch to the actor's next QueryReturn (or arrival if none).
inline LaneLayout layout(const Timeline& t) {
  LaneLayout out;
  std::map<std::string, std::size_t> index;
  auto lane_id = [&](const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, out.lanes.size());
    if (inserted) out.lanes.push_back(name);
    return it->second;
  };

  out.horizon = t.completion_time;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> open_tx;    // (actor, where)
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> open_prop;  // (actor, where)
  std::map<std::string, std::optional<std::size_t>> open_runner;                     // actor

  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const auto& e = t.events[i];
    out.horizon = std::max(out.horizon, e.time);
    const std::size_t lane = lane_id(detail::lane_of(e, t.lanes));
    out.event_lane.push_back(lane);
    const auto key = std::make_pair(e.actor, e.where);
    switch (e.kind) {
      case EventKind::TxStart:
        open_tx[key].push_back(out.activities.size());
        out.activities.push_back({lane, e.time, e.time, ActivityKind::Transmit, e.actor});
        open_prop[key].push_back(out.activities.size());
        out.activities.push_back({lane, e.time, e.time, ActivityKind::Propagate, e.actor});
        break;
      case EventKind::TxEnd:
        if (auto& v = open_tx[key]; !v.empty()) {
          out.activities[v.front()].end = e.time;
          v.erase(v.begin());
        }
        break;
      case EventKind::PhysicalArrival:
        if (auto& v = open_prop[key]; !v.empty()) {
          out.activities[v.front()].end = e.time;
          v.erase(v.begin());
        } else if (auto& r = open_runner[e.actor]; r) {
          out.activities[*r].end = e.time;
        }
        break;
      case EventKind::QueryDispatch:
        open_runner[e.actor] = out.activities.size();
        out.activities.push_back({lane, e.time, e.time, ActivityKind::Runner, e.actor});
        break;
      case EventKind::QueryReturn:
        if (auto& r = open_runner[e.actor]; r) {
          out.activities[*r].end = e.time;
          r.reset();
        }
        break;
      default:
        break;
    }
  }
  return out;
}

/// Largest number of distinct lanes carrying a unit (on the wire or
/// propagating) at one instant.
inline std::size_t max_concurrent_active_lanes(const LaneLayout& l) {
  auto carries = [](const Activity& a) { return a.kind != ActivityKind::Runner && a.start < a.end; };
  std::size_t best = 0;
  for (const auto& a : l.activities) {
    if (!carries(a)) continue;
    // probe the start of every interval: some maximum is always attained there
    std::vector<bool> busy(l.lanes.size(), false);
    for (const auto& b : l.activities)
      if (carries(b) && b.start <= a.start && a.start < b.end) busy[b.lane] = true;
    best = std::max(best, static_cast<std::size_t>(std::count(busy.begin(), busy.end(), true)));
  }
  return best;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fixed(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

inline constexpr std::int64_t kMaxTextColumns = 120;

inline std::string render_text(const Timeline& t, const LaneLayout& l) {
  // seconds per column: 1, or the smallest whole number that fits 120 columns
  std::int64_t per_col = 1;
  if (l.horizon > kMaxTextColumns) per_col = ceil_int(l.horizon / Rational(kMaxTextColumns));
  const Rational scale(per_col);
  const std::int64_t columns = std::max<std::int64_t>(1, ceil_int(l.horizon / scale));

  std::size_t label_width = 4;
  for (const auto& lane : l.lanes) label_width = std::max(label_width, lane.size());

  std::vector<std::string> rows(l.lanes.size(), std::string(static_cast<std::size_t>(columns), ' '));
  auto paint = [&](const Activity& a, char mark, bool overwrite) {
    if (a.end <= a.start) return;
    for (std::int64_t c = floor_int(a.start / scale); c < columns && Rational(c) * scale < a.end; ++c) {
      if (Rational(c + 1) * scale <= a.start) continue;
      char& cell = rows[a.lane][static_cast<std::size_t>(c)];
      if (overwrite || cell == ' ') cell = mark;
    }
  };
  for (const auto& a : l.activities)
    if (a.kind == ActivityKind::Propagate) paint(a, '~', false);
  for (const auto& a : l.activities)
    if (a.kind == ActivityKind::Runner) paint(a, '=', true);
  for (const auto& a : l.activities)
    if (a.kind == ActivityKind::Transmit) paint(a, '#', true);
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const auto& e = t.events[i];
    char mark = 0;
    if (e.kind == EventKind::SlotSuccess) mark = 'o';
    if (e.kind == EventKind::SlotCollision) mark = 'x';
    if (e.kind == EventKind::Connected) mark = '*';
    if (!mark) continue;
    auto c = std::min(columns - 1, floor_int(e.time / scale));
    char& cell = rows[l.event_lane[i]][static_cast<std::size_t>(c)];
    if (cell == ' ' || cell == '~') cell = mark;
  }

  std::ostringstream out;
  out << t.title << "\n";
  out << "scale: 1 column = " << per_col << " s, completion " << format_seconds(t.completion_time) << " s\n";
  out << "legend: # transmitting, ~ propagating, = runner, * connected, o slot success, x collision\n";
  for (std::size_t i = 0; i < l.lanes.size(); ++i) {
    std::string row = rows[i];
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out << std::left << std::setw(static_cast<int>(label_width)) << l.lanes[i] << " |" << row << "\n";
  }
  std::string axis(static_cast<std::size_t>(columns) + 10, ' ');
  for (std::int64_t c = 0; c < columns; c += 10) {
    const std::string label = std::to_string(c * per_col);
    axis.replace(static_cast<std::size_t>(c), label.size(), label);
  }
  while (!axis.empty() && axis.back() == ' ') axis.pop_back();
  out << std::string(label_width, ' ') << "  " << axis << "\n";
  return out.str();
}

inline constexpr double kLaneHeight = 40.0;

inline std::string render_svg(const Timeline& t, const LaneLayout& l) {
  const double horizon = std::max(1.0, to_double(l.horizon));
  const double px_per_s = std::clamp(1000.0 / horizon, 1.0, 40.0);
  const double left = 110.0;
  const double top = 40.0;
  const double plot_w = horizon * px_per_s;
  const double width = left + plot_w + 20.0;
  const double height = top + kLaneHeight * static_cast<double>(l.lanes.size()) + 40.0;
  auto x = [&](const Seconds& s) { return fixed(left + to_double(s) * px_per_s); };
  auto lane_top = [&](std::size_t lane) { return top + kLaneHeight * static_cast<double>(lane); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width) << "\" height=\""
      << fixed(height) << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\">\n";
  out << "<title>" << xml_escape(t.title) << "</title>\n";
  out << "<text x=\"" << fixed(left) << "\" y=\"20\" font-family=\"monospace\" font-size=\"14\">"
      << xml_escape(t.title) << " (completion " << format_seconds(t.completion_time) << " s)</text>\n";

  out << "<g class=\"lanes\">\n";
  for (std::size_t i = 0; i < l.lanes.size(); ++i) {
    const double y = lane_top(i) + kLaneHeight;
    out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(left + plot_w) << "\" y2=\""
        << fixed(y) << "\" stroke=\"#bbbbbb\"/>\n";
    out << "<text x=\"4\" y=\"" << fixed(lane_top(i) + kLaneHeight / 2 + 4) << "\" font-family=\"monospace\" "
        << "font-size=\"12\">" << xml_escape(l.lanes[i]) << "</text>\n";
  }
  out << "</g>\n<g class=\"activities\">\n";
  for (const auto& a : l.activities) {
    const double y0 = lane_top(a.lane) + 6;
    const double y1 = lane_top(a.lane) + kLaneHeight - 6;
    switch (a.kind) {
      case ActivityKind::Transmit:
        out << "<rect class=\"tx\" x=\"" << x(a.start) << "\" y=\"" << fixed(y0) << "\" width=\""
            << fixed(std::max(0.5, to_double(a.end - a.start) * px_per_s)) << "\" height=\"" << fixed(y1 - y0 - 14)
            << "\" fill=\"#4477aa\"><title>" << xml_escape(a.actor) << "</title></rect>\n";
        break;
      case ActivityKind::Propagate:
        out << "<line class=\"prop\" x1=\"" << x(a.start) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << x(a.end)
            << "\" y2=\"" << fixed(y1) << "\" stroke=\"#999999\" stroke-width=\"0.6\"/>\n";
        break;
      case ActivityKind::Runner:
        out << "<line class=\"runner\" x1=\"" << x(a.start) << "\" y1=\"" << fixed(y0 + 10) << "\" x2=\"" << x(a.end)
            << "\" y2=\"" << fixed(y0 + 10) << "\" stroke=\"#cc6677\" stroke-width=\"2\" stroke-dasharray=\"4 2\"/>\n";
        break;
    }
  }
  out << "</g>\n<g class=\"events\">\n";
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const auto& e = t.events[i];
    out << "<circle class=\"ev\" data-kind=\"" << to_string(e.kind) << "\" data-actor=\"" << xml_escape(e.actor)
        << "\" cx=\"" << x(e.time) << "\" cy=\"" << fixed(lane_top(l.event_lane[i]) + kLaneHeight - 4)
        << "\" r=\"1.5\" fill=\"#222222\"/>\n";
  }
  out << "</g>\n<g class=\"axis\">\n";
  const double axis_y = top + kLaneHeight * static_cast<double>(l.lanes.size()) + 16;
  const double step = horizon <= 20 ? 1 : (horizon <= 200 ? 10 : (horizon <= 2000 ? 100 : 1000));
  for (double s = 0; s <= horizon + 1e-9; s += step) {
    out << "<text x=\"" << fixed(left + s * px_per_s) << "\" y=\"" << fixed(axis_y)
        << "\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">" << fixed(s).substr(0, fixed(s).size() - 3)
        << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + plot_w) << "\" y=\"" << fixed(axis_y + 14)
      << "\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"end\">seconds</text>\n";
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace detail

inline std::string render_timeline(const Timeline& t, Format format) {
  if (t.events.empty()) throw std::invalid_argument("cannot render an empty timeline");
  const auto l = layout(t);
  return format == Format::Text ? detail::render_text(t, l) : detail::render_svg(t, l);
}

}  // namespace netrace::report
