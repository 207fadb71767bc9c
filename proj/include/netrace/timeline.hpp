#pragma once

#include "netrace/time.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace netrace {

enum class EventKind {
  TxStart,
  TxEnd,
  PhysicalArrival,
  FullArrival,
  QueryDispatch,
  QueryReturn,
  SlotPick,
  SlotSuccess,
  SlotCollision,
  Connected,
};

inline constexpr std::array<std::string_view, 10> kEventKindNames{
    "TxStart",     "TxEnd",       "PhysicalArrival", "FullArrival",   "QueryDispatch",
    "QueryReturn", "SlotPick",    "SlotSuccess",     "SlotCollision", "Connected",
};

inline std::string_view to_string(EventKind kind) { return kEventKindNames[static_cast<std::size_t>(kind)]; }

inline std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (std::size_t i = 0; i < kEventKindNames.size(); ++i)
    if (kEventKindNames[i] == name) return static_cast<EventKind>(i);
  return std::nullopt;
}

/// One timestamped happening. `where` names a link as "x->y" (transmission,
/// propagation and runner legs) or a node (connections, slots).
struct Event {
  Seconds time{0};
  std::string actor;
  EventKind kind = EventKind::TxStart;
  std::string where;
  std::string detail;

  friend bool operator==(const Event&, const Event&) = default;
};

/// How a diagram groups transmissions into lanes.
enum class LaneStyle { PerLink, PerNode };

struct Timeline {
  std::string title;
  LaneStyle lanes = LaneStyle::PerLink;
  std::vector<Event> events;
  Seconds completion_time{0};

  /// Sorts events by (time, actor, kind, where); the order every consumer sees.
  void normalize() {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      return std::tie(a.time, a.actor, a.kind, a.where) < std::tie(b.time, b.actor, b.kind, b.where);
    });
  }

  std::size_t count(EventKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [kind](const Event& e) { return e.kind == kind; }));
  }

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

/// time TAB actor TAB kind TAB detail, one event per line. The location is
/// folded into the detail column as "@where".
inline std::string to_event_log(const Timeline& t) {
  std::ostringstream out;
  for (const auto& e : t.events) {
    out << format_seconds(e.time) << '\t' << e.actor << '\t' << to_string(e.kind) << '\t';
    if (!e.where.empty()) out << '@' << e.where;
    if (!e.where.empty() && !e.detail.empty()) out << ' ';
    out << e.detail << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json to_json(const Timeline& t) {
  nlohmann::ordered_json doc;
  doc["title"] = t.title;
  doc["lanes"] = t.lanes == LaneStyle::PerLink ? "per_link" : "per_node";
  doc["completion_time"] = to_exact_string(t.completion_time);
  doc["completion_seconds"] = format_seconds(t.completion_time);
  auto& events = doc["events"] = nlohmann::ordered_json::array();
  for (const auto& e : t.events) {
    events.push_back({{"time", to_exact_string(e.time)},
                      {"actor", e.actor},
                      {"kind", std::string(to_string(e.kind))},
                      {"where", e.where},
                      {"detail", e.detail}});
  }
  return doc;
}

inline Timeline timeline_from_json(const nlohmann::json& doc) {
  Timeline t;
  t.title = doc.at("title").get<std::string>();
  t.lanes = doc.at("lanes").get<std::string>() == "per_node" ? LaneStyle::PerNode : LaneStyle::PerLink;
  auto parse_time = [](const nlohmann::json& j) {
    auto r = parse_rational(j.get<std::string>());
    if (!r) throw std::invalid_argument("timeline: bad time '" + j.get<std::string>() + "'");
    return *r;
  };
  t.completion_time = parse_time(doc.at("completion_time"));
  for (const auto& e : doc.at("events")) {
    auto kind = parse_event_kind(e.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("timeline: unknown event kind");
    t.events.push_back({parse_time(e.at("time")), e.at("actor").get<std::string>(), *kind,
                        e.at("where").get<std::string>(), e.at("detail").get<std::string>()});
  }
  return t;
}

/// "x->y" -> {"x", "y"}; a plain node name yields {name, ""}.
inline std::pair<std::string, std::string> split_link(const std::string& where) {
  auto arrow = where.find("->");
  if (arrow == std::string::npos) return {where, ""};
  return {where.substr(0, arrow), where.substr(arrow + 2)};
}

}  // namespace netrace
