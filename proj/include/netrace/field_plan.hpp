#pragma once

// Turns a scenario and a class size into who-does-what on the field: which
// students carry bits or packets, who staffs the nodes, what to mark on the
// ground, and the times the class should expect to measure.

#include "netrace/analytic.hpp"
#include "netrace/core.hpp"
#include "netrace/random_access.hpp"
#include "netrace/sdn_race.hpp"

#include <array>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace netrace::report {

enum class Role {
  SourceStaff,
  NodeStaff,
  BitStudent,
  PacketStudent,
  ControlRunner,
  RecordKeeper,
  Client,
  Server,
  TcpRunner,
  HttpRunner,
  Phone,    // a contender in the connection-establishment game
  Reserve,  // students left over once every position is filled
};

inline constexpr std::array<std::string_view, 12> kRoleNames{
    "SourceStaff", "NodeStaff", "BitStudent", "PacketStudent", "ControlRunner", "RecordKeeper",
    "Client",      "Server",    "TcpRunner",  "HttpRunner",    "Phone",         "Reserve",
};

inline std::string_view to_string(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }

struct RoleAssignment {
  Role role = Role::Reserve;
  std::int64_t count = 0;
  std::string group;
  friend bool operator==(const RoleAssignment&, const RoleAssignment&) = default;
};

struct Marking {
  std::string from;
  std::string to;
  Rational distance{0};  // meters
  std::string group;
};

using PlanScenario = std::variant<ChainScenario, WebScenario, RachScenario, SdnScenario>;

struct FieldPlan {
  std::string scenario;
  std::int64_t class_size = 0;
  std::int64_t minimum_class_size = 0;
  std::vector<RoleAssignment> roles;            // filled by students; counts sum to class_size
  std::vector<RoleAssignment> adult_positions;  // optional posts left to teachers and assistants
  std::vector<Marking> markings;
  std::map<std::string, Seconds> predicted_times;
  std::map<std::string, double> predicted_rounds;

  std::int64_t student_count() const {
    std::int64_t n = 0;
    for (const auto& r : roles) n += r.count;
    return n;
  }
};

class ClassTooSmall : public std::invalid_argument {
 public:
  ClassTooSmall(std::int64_t minimum, std::int64_t given)
      : std::invalid_argument("class of " + std::to_string(given) + " is too small; at least " +
                              std::to_string(minimum) + " students are needed"),
        minimum_(minimum) {}
  std::int64_t minimum() const { return minimum_; }

 private:
  std::int64_t minimum_;
};

namespace detail {

/// Mandatory posts must be students. Optional posts come in tiers that are
/// filled whole (so competing groups stay symmetric) while students remain;
/// tiers that do not fit go to adults. Leftover students become reserves.
struct Staffing {
  std::vector<std::string> groups;
  std::vector<RoleAssignment> mandatory;
  std::vector<std::vector<RoleAssignment>> optional_tiers;
};

inline void staff(FieldPlan& plan, const Staffing& s) {
  std::int64_t needed = 0;
  for (const auto& r : s.mandatory) needed += r.count;
  plan.minimum_class_size = needed;
  if (plan.class_size < needed) throw ClassTooSmall(needed, plan.class_size);

  auto add = [](std::vector<RoleAssignment>& list, const RoleAssignment& r) {
    if (r.count > 0) list.push_back(r);
  };
  for (const auto& r : s.mandatory) add(plan.roles, r);
  std::int64_t left = plan.class_size - needed;
  for (const auto& tier : s.optional_tiers) {
    std::int64_t size = 0;
    for (const auto& r : tier) size += r.count;
    const bool fits = size <= left;
    if (fits) left -= size;
    for (const auto& r : tier) add(fits ? plan.roles : plan.adult_positions, r);
  }
  const auto g = static_cast<std::int64_t>(s.groups.size());
  for (std::int64_t i = 0; i < g; ++i) add(plan.roles, {Role::Reserve, left / g + (i < left % g ? 1 : 0), s.groups[static_cast<std::size_t>(i)]});
}

inline FieldPlan plan_chain(const ChainScenario& sc, std::int64_t class_size) {
  if (auto v = validate(sc); !v.empty()) throw std::invalid_argument(v.front().message());
  FieldPlan plan;
  plan.scenario = "message vs packet switching race";
  plan.class_size = class_size;

  const std::vector<std::string> groups{"message switching", "packet switching"};
  Staffing s;
  s.groups = groups;
  std::vector<RoleAssignment> keepers, sources, nodes;
  for (const auto& g : groups) {
    s.mandatory.push_back({Role::BitStudent, sc.message_bits, g});
    keepers.push_back({Role::RecordKeeper, 1, g});
    sources.push_back({Role::SourceStaff, 1, g});
    nodes.push_back({Role::NodeStaff, sc.intermediate_nodes, g});
  }
  s.optional_tiers = {keepers, sources, nodes};
  staff(plan, s);

  const auto names = des::chain_node_names(sc.intermediate_nodes);
  for (const auto& g : groups)
    for (std::size_t i = 0; i + 1 < names.size(); ++i) plan.markings.push_back({names[i], names[i + 1], sc.link.length, g});

  plan.predicted_times["message switching"] =
      analytic::message_switching_delay(sc.message_bits, sc.link, sc.intermediate_nodes, sc.convention);
  plan.predicted_times["packet switching"] = analytic::packet_switching_delay(sc).total;
  return plan;
}

inline FieldPlan plan_web(const WebScenario& w, std::int64_t class_size) {
  if (auto v = validate(w); !v.empty()) throw std::invalid_argument(v.front().message());
  FieldPlan plan;
  plan.scenario = "web page download";
  plan.class_size = class_size;

  // bit students run back to the holder, so only the busiest round counts
  std::int64_t carriers = w.base_bits;
  for (const auto& round : analytic::plan_rounds(w)) {
    std::int64_t bits = 0;
    for (auto i : round.objects) bits += w.embedded_objects[i];
    carriers = std::max(carriers, bits);
  }
  const std::string g = "download";
  Staffing s;
  s.groups = {g};
  s.mandatory = {{Role::Client, 1, g},
                 {Role::Server, w.cache ? 2 : 1, g},
                 {Role::TcpRunner, w.parallel_connections, g},
                 {Role::HttpRunner, w.parallel_connections, g},
                 {Role::BitStudent, carriers, g}};
  s.optional_tiers = {{{Role::RecordKeeper, 1, g}}};
  staff(plan, s);

  plan.markings.push_back({"client", "server", w.server_link.length, g});
  if (w.cache) plan.markings.push_back({"client", "cache", w.cache->link.length, g});
  plan.predicted_times["download"] = analytic::web_download_delay(w);
  if (w.cache) plan.predicted_times["download with cache"] = analytic::cached_download_delay(w);
  return plan;
}

inline FieldPlan plan_rach(const RachScenario& rs, std::int64_t class_size) {
  if (auto v = validate(rs); !v.empty()) throw std::invalid_argument(v.front().message());
  FieldPlan plan;
  plan.scenario = "connection establishment musical chairs";
  plan.class_size = class_size;
  const std::vector<std::string> groups{"group 1", "group 2"};
  Staffing s;
  s.groups = groups;
  std::vector<RoleAssignment> keepers;
  for (const auto& g : groups) {
    s.mandatory.push_back({Role::Phone, rs.contenders, g});
    keepers.push_back({Role::RecordKeeper, 1, g});
  }
  s.optional_tiers = {keepers};
  staff(plan, s);
  plan.predicted_rounds["coordinated"] = static_cast<double>(rach::coordinated_rounds(rs.contenders, rs.slots));
  if (rs.contenders <= rach::kExactBound && rs.slots <= rach::kExactBound)
    plan.predicted_rounds["uncoordinated (expected)"] = rach::expected_rounds_exact(rs.contenders, rs.slots);
  return plan;
}

inline FieldPlan plan_sdn(const SdnScenario& sc, std::int64_t class_size) {
  if (auto v = validate(sc); !v.empty()) throw std::invalid_argument(v.front().message());
  FieldPlan plan;
  plan.scenario = "SDN networking race";
  plan.class_size = class_size;

  const std::vector<std::string> groups{"IP", "SDN"};
  const bool per_node = std::holds_alternative<PerNodeRunners>(sc.config_style);
  Staffing s;
  s.groups = groups;
  std::vector<RoleAssignment> keepers, sources, switches;
  for (const auto& g : groups) {
    for (const auto& src : sdn::flow_names()) s.mandatory.push_back({Role::PacketStudent, sc.flow_size, g + "@" + src});
    keepers.push_back({Role::RecordKeeper, 1, g});
    sources.push_back({Role::SourceStaff, 2, g});
    switches.push_back({Role::NodeStaff, 5, g});
  }
  // the staff member at a runs queries; per-node runners add one per other switch
  std::vector<RoleAssignment> runners{{Role::ControlRunner, per_node ? 5 : 1, "SDN"}};
  s.optional_tiers = {keepers, runners, sources, switches};
  staff(plan, s);

  for (const auto& g : groups) {
    for (const auto& l : sdn::race_topology(sc.link).links) plan.markings.push_back({l.from, l.to, l.spec.length, g});
  }
  if (sc.hypervisor) {
    plan.markings.push_back({"controller", "hypervisor", sc.hypervisor->controller_distance, "SDN"});
    plan.markings.push_back({"hypervisor", "each switch", sc.hypervisor->node_distance, "SDN"});
  } else if (const auto* runners_at = std::get_if<PerNodeRunners>(&sc.config_style)) {
    plan.markings.push_back({"controller", "a", runners_at->distances.contains("a") ? runners_at->distances.at("a")
                                                                                  : sc.controller_leg.distance, "SDN"});
    for (const auto& [node, dist] : runners_at->distances)
      if (node != "a") plan.markings.push_back({"controller", node, dist, "SDN"});
  } else {
    plan.markings.push_back({"a", "controller", sc.controller_leg.distance, "SDN"});
  }

  const auto race = sdn::run_race(sc);
  plan.predicted_times["IP"] = race.time_a;
  plan.predicted_times["SDN"] = race.time_b;
  return plan;
}

}  // namespace detail

inline FieldPlan field_plan(const PlanScenario& scenario, std::int64_t class_size) {
  if (class_size < 0) throw std::invalid_argument("class size must be non-negative");
  return std::visit(
      [&](const auto& sc) -> FieldPlan {
        using T = std::decay_t<decltype(sc)>;
        if constexpr (std::is_same_v<T, ChainScenario>) return detail::plan_chain(sc, class_size);
        else if constexpr (std::is_same_v<T, WebScenario>) return detail::plan_web(sc, class_size);
        else if constexpr (std::is_same_v<T, RachScenario>) return detail::plan_rach(sc, class_size);
        else return detail::plan_sdn(sc, class_size);
      },
      scenario);
}

inline std::string to_text(const FieldPlan& plan) {
  std::ostringstream out;
  out << "field plan: " << plan.scenario << " (class of " << plan.class_size << ", minimum "
      << plan.minimum_class_size << ")\n";
  out << "students:\n";
  for (const auto& r : plan.roles) out << "  " << r.count << " x " << to_string(r.role) << " [" << r.group << "]\n";
  if (!plan.adult_positions.empty()) {
    out << "adults (teachers, assistants):\n";
    for (const auto& r : plan.adult_positions)
      out << "  " << r.count << " x " << to_string(r.role) << " [" << r.group << "]\n";
  }
  if (!plan.markings.empty()) {
    out << "ground markings:\n";
    for (const auto& m : plan.markings)
      out << "  " << m.from << " -> " << m.to << ": " << format_seconds(m.distance) << " m [" << m.group << "]\n";
  }
  if (!plan.predicted_times.empty()) {
    out << "predicted times:\n";
    for (const auto& [label, t] : plan.predicted_times) out << "  " << label << ": " << format_seconds(t) << " s\n";
  }
  if (!plan.predicted_rounds.empty()) {
    out << "predicted rounds:\n";
    for (const auto& [label, r] : plan.predicted_rounds) {
      std::ostringstream v;
      v << std::fixed << std::setprecision(4) << r;
      out << "  " << label << ": " << v.str() << "\n";
    }
  }
  return out.str();
}

}  // namespace netrace::report
