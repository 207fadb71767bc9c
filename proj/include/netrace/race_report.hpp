#pragma once

#include "netrace/timeline.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>

namespace netrace::report {

/// Outcome of two competing configurations.
struct RaceReport {
  std::string label_a;
  std::string label_b;
  Seconds time_a{0};
  Seconds time_b{0};
  std::optional<std::string> winner;  // empty on a tie
  Seconds margin{0};
  Timeline timeline_a;
  Timeline timeline_b;

  bool tie() const { return !winner.has_value(); }
};

inline RaceReport compare_races(Timeline a, Timeline b, std::string label_a, std::string label_b) {
  RaceReport r;
  r.label_a = std::move(label_a);
  r.label_b = std::move(label_b);
  r.time_a = a.completion_time;
  r.time_b = b.completion_time;
  if (r.time_a < r.time_b) r.winner = r.label_a;
  if (r.time_b < r.time_a) r.winner = r.label_b;
  r.margin = r.time_a < r.time_b ? r.time_b - r.time_a : r.time_a - r.time_b;
  r.timeline_a = std::move(a);
  r.timeline_b = std::move(b);
  return r;
}

inline std::string verdict(const RaceReport& r) {
  if (r.tie()) return "tie";
  return *r.winner + " wins by " + format_seconds(r.margin) + " s";
}

/// Two aligned columns: configuration and completion time, then the verdict.
inline std::string to_table(const RaceReport& r) {
  const std::size_t width = std::max({r.label_a.size(), r.label_b.size(), std::string("configuration").size()});
  auto row = [&](const std::string& label, const std::string& value) {
    return label + std::string(width - label.size() + 2, ' ') + value + "\n";
  };
  std::ostringstream out;
  out << row("configuration", "completion [s]");
  out << row(r.label_a, format_seconds(r.time_a));
  out << row(r.label_b, format_seconds(r.time_b));
  out << "result: " << verdict(r) << "\n";
  return out.str();
}

inline std::string to_csv(const RaceReport& r) {
  std::ostringstream out;
  out << "configuration,completion_seconds\n";
  out << r.label_a << ',' << format_seconds(r.time_a) << '\n';
  out << r.label_b << ',' << format_seconds(r.time_b) << '\n';
  return out.str();
}

}  // namespace netrace::report
