#pragma once

// SDN-vs-IP routing race on the two-source topology
//
//        A ─┐      ┌─ b ── c ─┐
//           ├─ a ──┤          ├─ C
//        B ─┘      └─ d ── e ─┘
//
// Classic IP sends both flows along the bottom route. The SDN controller
// splits them (A over b,c; B over d,e) but switch a must first fetch each
// flow's rule from the controller.

#include "netrace/core.hpp"
#include "netrace/des.hpp"
#include "netrace/race_report.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netrace::sdn {

inline const std::vector<std::string>& flow_names() {
  static const std::vector<std::string> names{"A", "B"};
  return names;
}

inline des::Topology race_topology(const LinkSpec& link) {
  des::Topology t;
  t.nodes = {"A", "B", "a", "b", "c", "d", "e", "C"};
  for (auto [from, to] : std::vector<std::pair<const char*, const char*>>{
           {"A", "a"}, {"B", "a"}, {"a", "b"}, {"b", "c"}, {"c", "C"}, {"a", "d"}, {"d", "e"}, {"e", "C"}})
    t.links.push_back({from, to, link});
  return t;
}

inline std::vector<std::string> route(RoutingMode mode, const std::string& source) {
  if (mode == RoutingMode::SdnCentral && source == "A") return {"A", "a", "b", "c", "C"};
  return {source, "a", "d", "e", "C"};
}

/// Control plane schedule: when each flow may leave each switch, and the
/// runner legs that produced it.
struct ControlPlan {
  std::map<std::string, std::map<std::string, Seconds>> release_at;  // flow -> switch -> time
  std::vector<Event> events;
};

namespace detail {

inline void require_valid(const SdnScenario& sc) {
  if (auto v = validate(sc); !v.empty()) throw std::invalid_argument(v.front().message());
}

/// Instant the first packet of a flow counts as received at switch a.
inline Seconds first_packet_at_a(const SdnScenario& sc) {
  Seconds t = sc.link.propagation_delay();
  if (const auto* sf = std::get_if<StoreAndForward>(&sc.switching);
      sf && sf->convention == ArrivalConvention::FullArrival)
    t += sc.link.bit_time();
  return t;
}

/// One-way walking time between the controller and a switch, including the
/// hypervisor detour when one is configured.
inline Seconds control_leg(const SdnScenario& sc, const std::string& node) {
  const Rational speed = sc.controller_leg.runner_speed;
  if (sc.hypervisor) return (sc.hypervisor->node_distance + sc.hypervisor->controller_distance) / speed;
  Rational distance = sc.controller_leg.distance;
  if (const auto* per_node = std::get_if<PerNodeRunners>(&sc.config_style))
    if (auto it = per_node->distances.find(node); it != per_node->distances.end()) distance = it->second;
  return distance / speed;
}

}  // namespace detail

/// The staff member at a carries one query at a time, flow A first (both
/// first packets arrive together). A single runner brings the rule back to a;
/// with per-node runners the controller also sends a runner to every other
/// switch on the flow's route as soon as the query reaches it.
inline ControlPlan plan_control(const SdnScenario& sc) {
  detail::require_valid(sc);
  ControlPlan plan;
  if (sc.mode == RoutingMode::ClassicIP) return plan;

  const Seconds first = detail::first_packet_at_a(sc);
  const Seconds leg_a = detail::control_leg(sc, "a");
  const bool per_node = std::holds_alternative<PerNodeRunners>(sc.config_style);
  const std::string via = sc.hypervisor ? "via hypervisor" : "";
  Seconds runner_free{0};

  for (const auto& flow : flow_names()) {
    const Seconds dispatch = std::max(first, runner_free);
    const Seconds at_controller = dispatch + leg_a;
    const Seconds back = at_controller + leg_a;
    runner_free = back;

    plan.events.push_back({dispatch, "staff.a", EventKind::QueryDispatch, "a->controller", "query flow " + flow});
    plan.events.push_back({at_controller, "staff.a", EventKind::PhysicalArrival, "a->controller", via});
    plan.events.push_back({back, "staff.a", EventKind::QueryReturn, "controller->a", "rule flow " + flow});
    plan.release_at[flow]["a"] = back;

    if (per_node) {
      const auto path = route(sc.mode, flow);
      for (std::size_t h = 2; h + 1 < path.size(); ++h) {
        const auto& node = path[h];
        const Seconds arrive = at_controller + detail::control_leg(sc, node);
        const std::string runner = "runner." + node;
        plan.events.push_back({at_controller, runner, EventKind::QueryDispatch, "controller->" + node, "rule flow " + flow});
        plan.events.push_back({arrive, runner, EventKind::QueryReturn, "controller->" + node, "rule flow " + flow});
        plan.release_at[flow][node] = arrive;
      }
    }
  }

  if (sc.release == ReleasePolicy::AfterBothQueries) {
    Seconds last{0};
    for (const auto& flow : flow_names()) last = std::max(last, plan.release_at[flow]["a"]);
    for (const auto& flow : flow_names()) plan.release_at[flow]["a"] = last;
  }
  return plan;
}

struct SdnRun {
  Timeline timeline;
  std::map<std::string, Seconds> flow_completion;
};

/// One network of the race under the given routing mode.
inline SdnRun simulate(const SdnScenario& sc, RoutingMode mode) {
  SdnScenario scenario = sc;
  scenario.mode = mode;
  const ControlPlan plan = plan_control(scenario);

  std::vector<des::Flow> flows;
  for (const auto& name : flow_names()) {
    des::Flow f{name, route(mode, name), sc.flow_size, 1, {}};
    if (auto it = plan.release_at.find(name); it != plan.release_at.end()) f.release_at = it->second;
    flows.push_back(std::move(f));
  }
  const std::string title = mode == RoutingMode::ClassicIP ? "IP routing" : "SDN routing";
  auto run = des::simulate_packet_flow_network(race_topology(sc.link), flows, sc.switching, title);

  SdnRun out{std::move(run.timeline), std::move(run.flow_completion)};
  out.timeline.lanes = LaneStyle::PerNode;
  out.timeline.events.insert(out.timeline.events.end(), plan.events.begin(), plan.events.end());
  out.timeline.normalize();
  return out;
}

inline SdnRun simulate(const SdnScenario& sc) { return simulate(sc, sc.mode); }

/// Both networks side by side; label "IP" is configuration a, "SDN" is b.
inline report::RaceReport run_race(const SdnScenario& sc) {
  auto ip = simulate(sc, RoutingMode::ClassicIP);
  auto sdn = simulate(sc, RoutingMode::SdnCentral);
  return report::compare_races(std::move(ip.timeline), std::move(sdn.timeline), "IP", "SDN");
}

/// Smallest flow size in 1..max_flow_size at which SDN strictly beats IP.
inline std::optional<std::int64_t> break_even_flow_size(SdnScenario sc, std::int64_t max_flow_size) {
  if (max_flow_size < 1) throw std::invalid_argument("max_flow_size must be at least 1");
  for (std::int64_t f = 1; f <= max_flow_size; ++f) {
    sc.flow_size = f;
    const auto r = run_race(sc);
    if (r.time_b < r.time_a) return f;
  }
  return std::nullopt;
}

struct SweepRow {
  std::int64_t flow_size = 0;
  Seconds ip{0};
  Seconds sdn{0};
};

inline std::vector<SweepRow> sweep(SdnScenario sc, std::int64_t max_flow_size) {
  std::vector<SweepRow> rows;
  for (std::int64_t f = 1; f <= max_flow_size; ++f) {
    sc.flow_size = f;
    const auto r = run_race(sc);
    rows.push_back({f, r.time_a, r.time_b});
  }
  return rows;
}

/// F,ip_seconds,sdn_seconds,winner
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "F,ip_seconds,sdn_seconds,winner\n";
  for (const auto& r : rows) {
    const char* winner = r.ip < r.sdn ? "IP" : (r.sdn < r.ip ? "SDN" : "tie");
    out += std::to_string(r.flow_size) + "," + format_seconds(r.ip) + "," + format_seconds(r.sdn) + "," + winner + "\n";
  }
  return out;
}

}  // namespace netrace::sdn
