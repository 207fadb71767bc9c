#pragma once

// Ready-made scenarios for the classroom examples.

#include "netrace/scenario_io.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace netrace::presets {

/// 12-bit message over three intermediate nodes, 10 m links walked at 1 m/s,
/// packet group uses P = 3.
inline ChainScenario linear(Rational prop_speed = Rational(1)) {
  return ChainScenario{12, 3, 3, LinkSpec{Rational(1), Rational(10), prop_speed}, ArrivalConvention::FullArrival};
}

/// Base page of 3 bits plus three 6-bit objects, server 15 m away at 3 m/s.
inline WebScenario http() {
  WebScenario w;
  w.base_bits = 3;
  w.embedded_objects = {6, 6, 6};
  w.parallel_connections = 1;
  w.server_link = WebLink{Rational(15), Rational(3), Rational(1)};
  return w;
}

/// Six 3-bit objects over two parallel connections.
inline WebScenario http_parallel() {
  WebScenario w = http();
  w.embedded_objects = {3, 3, 3, 3, 3, 3};
  w.parallel_connections = 2;
  return w;
}

/// The basic download with every object cached 3 m from the client.
inline WebScenario http_cache() {
  WebScenario w = http();
  w.cache = CacheSpec{WebLink{Rational(3), Rational(3), Rational(1)}, std::nullopt};
  return w;
}

/// Twelve phones, four chairs.
inline RachScenario rach() { return RachScenario{12, 4, Uncoordinated{}, 2024, kDefaultMaxRounds}; }

/// Six packets per source, 10 m links at 1 m/s, controller 2 m from a.
inline SdnScenario sdn() {
  SdnScenario sc;
  sc.flow_size = 6;
  sc.link = LinkSpec{Rational(1), Rational(10), Rational(1)};
  sc.controller_leg = ControllerLeg{Rational(2), Rational(1)};
  return sc;
}

inline const std::map<std::string, io::ScenarioFile>& all() {
  static const std::map<std::string, io::ScenarioFile> presets = [] {
    std::map<std::string, io::ScenarioFile> m;
    m["paper-linear"].chain = linear();
    m["paper-linear-fast"].chain = linear(Rational(2));
    m["paper-http"].web = http();
    m["paper-http-parallel"].web = http_parallel();
    m["paper-http-cache"].web = http_cache();
    m["paper-rach"].rach = rach();
    m["paper-sdn"].sdn = sdn();
    return m;
  }();
  return presets;
}

inline std::optional<io::ScenarioFile> find(const std::string& name) {
  if (auto it = all().find(name); it != all().end()) return it->second;
  return std::nullopt;
}

inline std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [name, file] : all()) out.push_back(name);
  return out;
}

}  // namespace netrace::presets
