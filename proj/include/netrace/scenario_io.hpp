#pragma once

// Scenario files: one JSON document, one top-level key per scenario kind
// ("chain", "web", "rach", "sdn"). Unknown keys anywhere are rejected.
// Quantities may be written as integers, decimals, or exact "p/q" strings.

#include "netrace/core.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace netrace::io {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + " " + what), field_(field), rule_(what) {}
  const std::string& field() const { return field_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string field_;
  std::string rule_;
};

struct ScenarioFile {
  std::optional<ChainScenario> chain;
  std::optional<WebScenario> web;
  std::optional<RachScenario> rach;
  std::optional<SdnScenario> sdn;

  bool empty() const { return !chain && !web && !rach && !sdn; }
  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

namespace detail {

inline std::string path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) throw ConfigError(path(where, key), "is not a recognised field");
}

inline const Json& require(const Json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(path(where, key), "is required");
  return obj.at(key);
}

inline Rational to_rational(const Json& v, const std::string& field) {
  std::optional<Rational> r;
  if (v.is_number_integer()) r = Rational(v.get<std::int64_t>());
  else if (v.is_number_float()) r = parse_rational(v.dump());
  else if (v.is_string()) r = parse_rational(v.get<std::string>());
  if (!r) throw ConfigError(field, "must be a number or a \"p/q\" string");
  return *r;
}

inline std::int64_t to_count(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "must be an integer");
  return v.get<std::int64_t>();
}

inline Rational rational_field(const Json& obj, const std::string& where, const std::string& key) {
  return to_rational(require(obj, where, key), path(where, key));
}

inline std::int64_t count_field(const Json& obj, const std::string& where, const std::string& key) {
  return to_count(require(obj, where, key), path(where, key));
}

inline std::string string_field(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "must be a string");
  return v.get<std::string>();
}

inline Json rational_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_exact_string(r);
}

inline ArrivalConvention parse_convention(const Json& v, const std::string& field) {
  const auto s = string_field(v, field);
  if (s == "full") return ArrivalConvention::FullArrival;
  if (s == "physical") return ArrivalConvention::PhysicalArrival;
  throw ConfigError(field, "must be \"full\" or \"physical\"");
}

inline const char* convention_name(ArrivalConvention c) {
  return c == ArrivalConvention::FullArrival ? "full" : "physical";
}

inline LinkSpec parse_link(const Json& j, const std::string& where) {
  check_keys(j, where, {"bitrate", "length", "prop_speed"});
  return {rational_field(j, where, "bitrate"), rational_field(j, where, "length"), rational_field(j, where, "prop_speed")};
}

inline Json link_json(const LinkSpec& l) {
  return Json{{"bitrate", rational_json(l.bitrate)},
              {"length", rational_json(l.length)},
              {"prop_speed", rational_json(l.prop_speed)}};
}

inline WebLink parse_web_link(const Json& j, const std::string& where, const std::set<std::string>& extra = {}) {
  std::set<std::string> allowed{"length", "runner_speed", "bitrate"};
  allowed.insert(extra.begin(), extra.end());
  check_keys(j, where, allowed);
  return {rational_field(j, where, "length"), rational_field(j, where, "runner_speed"),
          rational_field(j, where, "bitrate")};
}

inline Json web_link_json(const WebLink& l) {
  return Json{{"length", rational_json(l.length)},
              {"runner_speed", rational_json(l.runner_speed)},
              {"bitrate", rational_json(l.bitrate)}};
}

}  // namespace detail

inline ChainScenario parse_chain(const Json& j) {
  const std::string w = "chain";
  detail::check_keys(j, w, {"message_bits", "packet_bits", "intermediate_nodes", "link", "convention"});
  ChainScenario sc;
  sc.message_bits = detail::count_field(j, w, "message_bits");
  sc.packet_bits = detail::count_field(j, w, "packet_bits");
  sc.intermediate_nodes = detail::count_field(j, w, "intermediate_nodes");
  sc.link = detail::parse_link(detail::require(j, w, "link"), "chain.link");
  if (j.contains("convention")) sc.convention = detail::parse_convention(j.at("convention"), "chain.convention");
  return sc;
}

inline Json to_json(const ChainScenario& sc) {
  return Json{{"message_bits", sc.message_bits},
              {"packet_bits", sc.packet_bits},
              {"intermediate_nodes", sc.intermediate_nodes},
              {"link", detail::link_json(sc.link)},
              {"convention", detail::convention_name(sc.convention)}};
}

inline WebScenario parse_web(const Json& j) {
  const std::string w = "web";
  detail::check_keys(j, w, {"base_bits", "embedded_objects", "parallel_connections", "server_link", "cache"});
  WebScenario sc;
  sc.base_bits = detail::count_field(j, w, "base_bits");
  const auto& objects = detail::require(j, w, "embedded_objects");
  if (!objects.is_array()) throw ConfigError("web.embedded_objects", "must be an array");
  for (std::size_t i = 0; i < objects.size(); ++i)
    sc.embedded_objects.push_back(detail::to_count(objects[i], "web.embedded_objects[" + std::to_string(i) + "]"));
  sc.parallel_connections = j.contains("parallel_connections")
                                ? detail::to_count(j.at("parallel_connections"), "web.parallel_connections")
                                : 1;
  sc.server_link = detail::parse_web_link(detail::require(j, w, "server_link"), "web.server_link");
  if (j.contains("cache")) {
    CacheSpec cache;
    cache.link = detail::parse_web_link(j.at("cache"), "web.cache", {"cached_objects"});
    if (j.at("cache").contains("cached_objects")) {
      const auto& ids = j.at("cache").at("cached_objects");
      if (!ids.is_array()) throw ConfigError("web.cache.cached_objects", "must be an array");
      std::vector<std::size_t> list;
      for (const auto& id : ids) {
        const auto v = detail::to_count(id, "web.cache.cached_objects");
        if (v < 0) throw ConfigError("web.cache.cached_objects", "must hold non-negative indices");
        list.push_back(static_cast<std::size_t>(v));
      }
      cache.cached_objects = std::move(list);
    }
    sc.cache = std::move(cache);
  }
  return sc;
}

inline Json to_json(const WebScenario& sc) {
  Json j{{"base_bits", sc.base_bits},
         {"embedded_objects", sc.embedded_objects},
         {"parallel_connections", sc.parallel_connections},
         {"server_link", detail::web_link_json(sc.server_link)}};
  if (sc.cache) {
    Json cache = detail::web_link_json(sc.cache->link);
    if (sc.cache->cached_objects) cache["cached_objects"] = *sc.cache->cached_objects;
    j["cache"] = std::move(cache);
  }
  return j;
}

inline RachStrategy parse_strategy(const Json& v) {
  const std::string f = "rach.strategy";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "uncoordinated") return Uncoordinated{};
    if (s == "coordinated") return Coordinated{};
    throw ConfigError(f, "must be \"uncoordinated\", \"coordinated\" or {\"barring\": {...}}");
  }
  detail::check_keys(v, f, {"barring"});
  const auto& b = detail::require(v, f, "barring");
  const std::string bw = f + ".barring";
  detail::check_keys(b, bw, {"initially_admitted", "policy"});
  Barring barring;
  barring.initially_admitted = detail::count_field(b, bw, "initially_admitted");
  const auto& policy = detail::require(b, bw, "policy");
  if (policy.is_string()) {
    if (policy.get<std::string>() != "batch_after_drain")
      throw ConfigError(bw + ".policy", "must be \"batch_after_drain\" or {\"admit_per_round\": k}");
    barring.policy = BatchAfterDrain{};
  } else {
    detail::check_keys(policy, bw + ".policy", {"admit_per_round"});
    barring.policy = AdmitPerRound{detail::count_field(policy, bw + ".policy", "admit_per_round")};
  }
  return barring;
}

inline Json to_json(const RachStrategy& s) {
  if (std::holds_alternative<Uncoordinated>(s)) return "uncoordinated";
  if (std::holds_alternative<Coordinated>(s)) return "coordinated";
  const auto& b = std::get<Barring>(s);
  Json policy = std::holds_alternative<BatchAfterDrain>(b.policy)
                    ? Json("batch_after_drain")
                    : Json{{"admit_per_round", std::get<AdmitPerRound>(b.policy).per_round}};
  return Json{{"barring", Json{{"initially_admitted", b.initially_admitted}, {"policy", policy}}}};
}

inline RachScenario parse_rach(const Json& j) {
  const std::string w = "rach";
  detail::check_keys(j, w, {"contenders", "slots", "strategy", "seed", "max_rounds"});
  RachScenario sc;
  sc.contenders = detail::count_field(j, w, "contenders");
  sc.slots = detail::count_field(j, w, "slots");
  if (j.contains("strategy")) sc.strategy = parse_strategy(j.at("strategy"));
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("rach.seed", "must be a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  if (j.contains("max_rounds")) sc.max_rounds = detail::to_count(j.at("max_rounds"), "rach.max_rounds");
  return sc;
}

inline Json to_json(const RachScenario& sc) {
  return Json{{"contenders", sc.contenders},
              {"slots", sc.slots},
              {"strategy", to_json(sc.strategy)},
              {"seed", sc.seed},
              {"max_rounds", sc.max_rounds}};
}

inline SdnScenario parse_sdn(const Json& j) {
  const std::string w = "sdn";
  detail::check_keys(j, w,
                     {"flow_size", "link", "controller_leg", "mode", "switching", "convention", "config_style",
                      "hypervisor", "release"});
  SdnScenario sc;
  sc.flow_size = detail::count_field(j, w, "flow_size");
  sc.link = detail::parse_link(detail::require(j, w, "link"), "sdn.link");

  const auto& leg = detail::require(j, w, "controller_leg");
  detail::check_keys(leg, "sdn.controller_leg", {"distance", "runner_speed"});
  sc.controller_leg.distance = detail::rational_field(leg, "sdn.controller_leg", "distance");
  sc.controller_leg.runner_speed = leg.contains("runner_speed")
                                       ? detail::to_rational(leg.at("runner_speed"), "sdn.controller_leg.runner_speed")
                                       : sc.link.prop_speed;

  if (j.contains("mode")) {
    const auto m = detail::string_field(j.at("mode"), "sdn.mode");
    if (m == "classic_ip") sc.mode = RoutingMode::ClassicIP;
    else if (m == "sdn_central") sc.mode = RoutingMode::SdnCentral;
    else throw ConfigError("sdn.mode", "must be \"classic_ip\" or \"sdn_central\"");
  }

  std::string switching = "store_and_forward";
  if (j.contains("switching")) switching = detail::string_field(j.at("switching"), "sdn.switching");
  if (switching == "store_and_forward") {
    StoreAndForward sf;
    if (j.contains("convention")) sf.convention = detail::parse_convention(j.at("convention"), "sdn.convention");
    sc.switching = sf;
  } else if (switching == "cut_through") {
    if (j.contains("convention")) throw ConfigError("sdn.convention", "only applies to store_and_forward switching");
    sc.switching = CutThrough{};
  } else {
    throw ConfigError("sdn.switching", "must be \"store_and_forward\" or \"cut_through\"");
  }

  if (j.contains("config_style")) {
    const auto& cs = j.at("config_style");
    if (cs.is_string()) {
      if (cs.get<std::string>() != "single_runner_at_a")
        throw ConfigError("sdn.config_style", "must be \"single_runner_at_a\" or {\"per_node_runners\": {...}}");
      sc.config_style = SingleRunnerAtA{};
    } else {
      detail::check_keys(cs, "sdn.config_style", {"per_node_runners"});
      const auto& map = detail::require(cs, "sdn.config_style", "per_node_runners");
      if (!map.is_object()) throw ConfigError("sdn.config_style.per_node_runners", "must be an object");
      PerNodeRunners runners;
      for (const auto& [node, dist] : map.items())
        runners.distances[node] = detail::to_rational(dist, "sdn.config_style.per_node_runners." + node);
      sc.config_style = std::move(runners);
    }
  }

  if (j.contains("hypervisor")) {
    const auto& h = j.at("hypervisor");
    detail::check_keys(h, "sdn.hypervisor", {"controller_distance", "node_distance"});
    sc.hypervisor = Hypervisor{detail::rational_field(h, "sdn.hypervisor", "controller_distance"),
                               detail::rational_field(h, "sdn.hypervisor", "node_distance")};
  }

  if (j.contains("release")) {
    const auto r = detail::string_field(j.at("release"), "sdn.release");
    if (r == "per_flow_release") sc.release = ReleasePolicy::PerFlowRelease;
    else if (r == "after_both_queries") sc.release = ReleasePolicy::AfterBothQueries;
    else throw ConfigError("sdn.release", "must be \"per_flow_release\" or \"after_both_queries\"");
  }
  return sc;
}

inline Json to_json(const SdnScenario& sc) {
  Json j{{"flow_size", sc.flow_size},
         {"link", detail::link_json(sc.link)},
         {"controller_leg",
          Json{{"distance", detail::rational_json(sc.controller_leg.distance)},
               {"runner_speed", detail::rational_json(sc.controller_leg.runner_speed)}}},
         {"mode", sc.mode == RoutingMode::ClassicIP ? "classic_ip" : "sdn_central"}};
  if (const auto* sf = std::get_if<StoreAndForward>(&sc.switching)) {
    j["switching"] = "store_and_forward";
    j["convention"] = detail::convention_name(sf->convention);
  } else {
    j["switching"] = "cut_through";
  }
  if (const auto* runners = std::get_if<PerNodeRunners>(&sc.config_style)) {
    Json map = Json::object();
    for (const auto& [node, dist] : runners->distances) map[node] = detail::rational_json(dist);
    j["config_style"] = Json{{"per_node_runners", map}};
  } else {
    j["config_style"] = "single_runner_at_a";
  }
  if (sc.hypervisor)
    j["hypervisor"] = Json{{"controller_distance", detail::rational_json(sc.hypervisor->controller_distance)},
                           {"node_distance", detail::rational_json(sc.hypervisor->node_distance)}};
  j["release"] = sc.release == ReleasePolicy::PerFlowRelease ? "per_flow_release" : "after_both_queries";
  return j;
}

inline ScenarioFile parse_scenario_file(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("", "scenario file must hold a JSON object");
  detail::check_keys(doc, "", {"chain", "web", "rach", "sdn"});
  ScenarioFile f;
  if (doc.contains("chain")) f.chain = parse_chain(doc.at("chain"));
  if (doc.contains("web")) f.web = parse_web(doc.at("web"));
  if (doc.contains("rach")) f.rach = parse_rach(doc.at("rach"));
  if (doc.contains("sdn")) f.sdn = parse_sdn(doc.at("sdn"));
  return f;
}

/// Blank text is an empty document.
inline ScenarioFile parse_scenario_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("is not valid JSON: ") + e.what());
  }
  return parse_scenario_file(doc);
}

inline Json to_json(const ScenarioFile& f) {
  Json doc = Json::object();
  if (f.chain) doc["chain"] = to_json(*f.chain);
  if (f.web) doc["web"] = to_json(*f.web);
  if (f.rach) doc["rach"] = to_json(*f.rach);
  if (f.sdn) doc["sdn"] = to_json(*f.sdn);
  return doc;
}

/// Every invariant violation across the file, prefixed by scenario kind.
inline Violations validate(const ScenarioFile& f) {
  Violations out;
  auto collect = [&](const std::string& prefix, Violations v) {
    for (auto& x : v) out.push_back({prefix + "." + x.field, x.rule});
  };
  if (f.empty()) out.push_back({"document", "contains no scenario (expected chain, web, rach or sdn)"});
  if (f.chain) collect("chain", netrace::validate(*f.chain));
  if (f.web) collect("web", netrace::validate(*f.web));
  if (f.rach) collect("rach", netrace::validate(*f.rach));
  if (f.sdn) collect("sdn", netrace::validate(*f.sdn));
  return out;
}

}  // namespace netrace::io
