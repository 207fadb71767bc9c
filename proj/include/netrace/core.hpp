#pragma once

// Domain types shared by every module: link parameters, the four activity
// scenarios, and the invariant checker that guards them.

#include "netrace/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace netrace {

struct LinkSpec {
  Rational bitrate{1};     // bits (students) per second
  Rational length{0};      // meters
  Rational prop_speed{1};  // meters per second

  Seconds propagation_delay() const { return length / prop_speed; }
  Seconds bit_time() const { return Rational(1) / bitrate; }

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

enum class ArrivalConvention {
  FullArrival,      // a unit counts as received 1/R after it physically arrives
  PhysicalArrival,  // a unit counts as received the moment it arrives
};

struct ChainScenario {
  std::int64_t message_bits = 1;        // M
  std::int64_t packet_bits = 1;         // P, must divide M
  std::int64_t intermediate_nodes = 0;  // N, so the chain has N+1 links
  LinkSpec link;
  ArrivalConvention convention = ArrivalConvention::FullArrival;

  std::int64_t packet_count() const { return message_bits / packet_bits; }
  friend bool operator==(const ChainScenario&, const ChainScenario&) = default;
};

/// A rope between the client and a content holder, walked by runners.
struct WebLink {
  Rational length{0};
  Rational runner_speed{1};
  Rational bitrate{1};

  Seconds rtt() const { return Rational(2) * length / runner_speed; }
  friend bool operator==(const WebLink&, const WebLink&) = default;
};

struct CacheSpec {
  WebLink link;
  // Indices into WebScenario::embedded_objects. Absent means every object.
  std::optional<std::vector<std::size_t>> cached_objects;

  friend bool operator==(const CacheSpec&, const CacheSpec&) = default;
};

struct WebScenario {
  std::int64_t base_bits = 1;
  std::vector<std::int64_t> embedded_objects;
  std::int64_t parallel_connections = 1;
  WebLink server_link;
  std::optional<CacheSpec> cache;

  /// Whether object `index` is served by the cache rather than the server.
  bool is_cached(std::size_t index) const {
    if (!cache) return false;
    if (!cache->cached_objects) return true;
    for (auto i : *cache->cached_objects)
      if (i == index) return true;
    return false;
  }

  friend bool operator==(const WebScenario&, const WebScenario&) = default;
};

struct Uncoordinated {
  friend bool operator==(const Uncoordinated&, const Uncoordinated&) = default;
};
struct Coordinated {
  friend bool operator==(const Coordinated&, const Coordinated&) = default;
};
/// Barred contenders enter together once the active set has drained.
struct BatchAfterDrain {
  friend bool operator==(const BatchAfterDrain&, const BatchAfterDrain&) = default;
};
/// `per_round` barred contenders enter at the start of every later round.
struct AdmitPerRound {
  std::int64_t per_round = 1;
  friend bool operator==(const AdmitPerRound&, const AdmitPerRound&) = default;
};
struct Barring {
  std::int64_t initially_admitted = 1;
  std::variant<BatchAfterDrain, AdmitPerRound> policy;
  friend bool operator==(const Barring&, const Barring&) = default;
};
using RachStrategy = std::variant<Uncoordinated, Coordinated, Barring>;

inline constexpr std::int64_t kDefaultMaxRounds = 10'000;

struct RachScenario {
  std::int64_t contenders = 1;
  std::int64_t slots = 1;
  RachStrategy strategy = Uncoordinated{};
  std::uint64_t seed = 1;
  std::int64_t max_rounds = kDefaultMaxRounds;

  friend bool operator==(const RachScenario&, const RachScenario&) = default;
};

enum class RoutingMode { ClassicIP, SdnCentral };

struct StoreAndForward {
  ArrivalConvention convention = ArrivalConvention::FullArrival;
  friend bool operator==(const StoreAndForward&, const StoreAndForward&) = default;
};
struct CutThrough {
  friend bool operator==(const CutThrough&, const CutThrough&) = default;
};
using Switching = std::variant<StoreAndForward, CutThrough>;

struct SingleRunnerAtA {
  friend bool operator==(const SingleRunnerAtA&, const SingleRunnerAtA&) = default;
};
/// Controller-to-switch distances for the individual control plane runners.
/// Switch a defaults to ControllerLeg::distance when not listed.
struct PerNodeRunners {
  std::map<std::string, Rational> distances;  // keys among a,b,c,d,e
  friend bool operator==(const PerNodeRunners&, const PerNodeRunners&) = default;
};
using ConfigStyle = std::variant<SingleRunnerAtA, PerNodeRunners>;

struct ControllerLeg {
  Rational distance{0};  // node a to controller, meters
  Rational runner_speed{1};
  friend bool operator==(const ControllerLeg&, const ControllerLeg&) = default;
};

/// When present, every control message detours through the hypervisor.
struct Hypervisor {
  Rational controller_distance{0};  // controller <-> hypervisor
  Rational node_distance{0};        // hypervisor <-> any switch
  friend bool operator==(const Hypervisor&, const Hypervisor&) = default;
};

enum class ReleasePolicy { PerFlowRelease, AfterBothQueries };

struct SdnScenario {
  std::int64_t flow_size = 1;  // packets per source
  LinkSpec link;
  ControllerLeg controller_leg;
  RoutingMode mode = RoutingMode::SdnCentral;
  Switching switching = StoreAndForward{};
  ConfigStyle config_style = SingleRunnerAtA{};
  std::optional<Hypervisor> hypervisor;
  ReleasePolicy release = ReleasePolicy::PerFlowRelease;

  friend bool operator==(const SdnScenario&, const SdnScenario&) = default;
};

/// Switch names of the fixed race topology that a control runner can visit.
inline const std::set<std::string>& sdn_switch_names() {
  static const std::set<std::string> names{"a", "b", "c", "d", "e"};
  return names;
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
  std::string field;
  std::string rule;

  std::string message() const { return field + " " + rule; }
  friend bool operator==(const Violation&, const Violation&) = default;
};

using Violations = std::vector<Violation>;

namespace detail {

inline void require_positive(Violations& out, const std::string& field, const Rational& v) {
  if (v <= 0) out.push_back({field, "must be positive"});
}

inline void require_non_negative(Violations& out, const std::string& field, const Rational& v) {
  if (v < 0) out.push_back({field, "must be non-negative"});
}

inline void require_at_least(Violations& out, const std::string& field, std::int64_t v, std::int64_t min) {
  if (v < min) out.push_back({field, "must be at least " + std::to_string(min)});
}

inline std::string join(const std::string& prefix, const std::string& field) {
  return prefix.empty() ? field : prefix + "." + field;
}

inline void check_link(Violations& out, const LinkSpec& link, const std::string& prefix) {
  require_positive(out, join(prefix, "bitrate"), link.bitrate);
  require_non_negative(out, join(prefix, "length"), link.length);
  require_positive(out, join(prefix, "prop_speed"), link.prop_speed);
}

inline void check_web_link(Violations& out, const WebLink& link, const std::string& prefix) {
  require_non_negative(out, join(prefix, "length"), link.length);
  require_positive(out, join(prefix, "runner_speed"), link.runner_speed);
  require_positive(out, join(prefix, "bitrate"), link.bitrate);
}

}  // namespace detail

inline Violations validate(const LinkSpec& link) {
  Violations out;
  detail::check_link(out, link, "");
  return out;
}

inline Violations validate(const ChainScenario& sc) {
  Violations out;
  detail::require_at_least(out, "message_bits", sc.message_bits, 1);
  detail::require_at_least(out, "packet_bits", sc.packet_bits, 1);
  if (sc.packet_bits > sc.message_bits && sc.message_bits >= 1)
    out.push_back({"packet_bits", "must not exceed message_bits"});
  else if (sc.packet_bits >= 1 && sc.message_bits >= 1 && sc.message_bits % sc.packet_bits != 0)
    out.push_back({"packet_bits", "must divide message_bits"});
  detail::require_at_least(out, "intermediate_nodes", sc.intermediate_nodes, 0);
  detail::check_link(out, sc.link, "link");
  return out;
}

inline Violations validate(const WebScenario& w) {
  Violations out;
  detail::require_at_least(out, "base_bits", w.base_bits, 1);
  for (std::size_t i = 0; i < w.embedded_objects.size(); ++i)
    detail::require_at_least(out, "embedded_objects[" + std::to_string(i) + "]", w.embedded_objects[i], 1);
  detail::require_at_least(out, "parallel_connections", w.parallel_connections, 1);
  detail::check_web_link(out, w.server_link, "server_link");
  if (w.cache) {
    detail::check_web_link(out, w.cache->link, "cache");
    if (w.cache->cached_objects) {
      std::set<std::size_t> seen;
      for (auto idx : *w.cache->cached_objects) {
        if (idx >= w.embedded_objects.size())
          out.push_back({"cache.cached_objects", "index " + std::to_string(idx) + " is out of range"});
        else if (!seen.insert(idx).second)
          out.push_back({"cache.cached_objects", "index " + std::to_string(idx) + " is repeated"});
      }
    }
  }
  return out;
}

inline Violations validate(const RachScenario& rs) {
  Violations out;
  detail::require_at_least(out, "contenders", rs.contenders, 1);
  detail::require_at_least(out, "slots", rs.slots, 1);
  detail::require_at_least(out, "max_rounds", rs.max_rounds, 1);
  if (const auto* barring = std::get_if<Barring>(&rs.strategy)) {
    detail::require_at_least(out, "strategy.initially_admitted", barring->initially_admitted, 1);
    if (barring->initially_admitted > rs.contenders)
      out.push_back({"strategy.initially_admitted", "must not exceed contenders"});
    if (const auto* per_round = std::get_if<AdmitPerRound>(&barring->policy))
      detail::require_at_least(out, "strategy.admit_per_round", per_round->per_round, 1);
  }
  return out;
}

inline Violations validate(const SdnScenario& sc) {
  Violations out;
  detail::require_at_least(out, "flow_size", sc.flow_size, 1);
  detail::check_link(out, sc.link, "link");
  detail::require_non_negative(out, "controller_leg.distance", sc.controller_leg.distance);
  detail::require_positive(out, "controller_leg.runner_speed", sc.controller_leg.runner_speed);
  if (const auto* per_node = std::get_if<PerNodeRunners>(&sc.config_style)) {
    for (const auto& [node, dist] : per_node->distances) {
      if (!sdn_switch_names().contains(node))
        out.push_back({"config_style.per_node_runners", "names unknown switch '" + node + "'"});
      detail::require_non_negative(out, "config_style.per_node_runners." + node, dist);
    }
    for (const auto& node : sdn_switch_names())
      if (node != "a" && !per_node->distances.contains(node))
        out.push_back({"config_style.per_node_runners", "is missing switch '" + node + "'"});
  }
  if (sc.hypervisor) {
    detail::require_non_negative(out, "hypervisor.controller_distance", sc.hypervisor->controller_distance);
    detail::require_non_negative(out, "hypervisor.node_distance", sc.hypervisor->node_distance);
  }
  return out;
}

}  // namespace netrace
