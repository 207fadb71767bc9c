#pragma once

// Command-line front end. Every subcommand only binds flags and files to the
// library and formats what it returns.

#include "netrace/netrace.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace netrace::cli {

inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kUsageError = 2;

/// Raised for bad scenario content; maps to exit code 1.
struct ValidationFailure {
  std::vector<std::string> messages;
};

struct GlobalOptions {
  std::string config;
  std::string preset;
  std::string convention;
  std::string out;
};

struct ArtifactOptions {
  std::string render;  // "", "text" or "svg"
  std::string artifacts;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationFailure{{"cannot read " + path}};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationFailure{{"cannot write " + path}};
  out << content;
}

inline io::ScenarioFile load(const GlobalOptions& g) {
  io::ScenarioFile file;
  if (!g.config.empty()) {
    try {
      file = io::parse_scenario_text(read_file(g.config));
    } catch (const io::ConfigError& e) {
      throw ValidationFailure{{e.what()}};
    }
  } else if (!g.preset.empty()) {
    auto p = presets::find(g.preset);
    if (!p) throw ValidationFailure{{"unknown preset '" + g.preset + "'"}};
    file = *p;
  }
  if (!g.convention.empty()) {
    const auto conv = g.convention == "full" ? ArrivalConvention::FullArrival : ArrivalConvention::PhysicalArrival;
    if (file.chain) file.chain->convention = conv;
    if (file.sdn)
      if (auto* sf = std::get_if<StoreAndForward>(&file.sdn->switching)) sf->convention = conv;
  }
  return file;
}

template <typename T>
T require_section(const std::optional<T>& section, const char* name) {
  if (!section) throw ValidationFailure{{std::string("scenario has no '") + name + "' section"}};
  return *section;
}

template <typename T>
void require_valid(const T& scenario, const std::string& prefix) {
  if (auto v = validate(scenario); !v.empty()) {
    ValidationFailure f;
    for (const auto& x : v) f.messages.push_back(prefix + "." + x.message());
    throw f;
  }
}

inline std::string slug(std::string s) {
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '-';
  return s;
}

/// Text diagrams go to the report; logs and SVGs go to PREFIX-<label>.*.
inline void emit_timeline(std::ostream& out, const ArtifactOptions& a, const std::string& label, const Timeline& t) {
  if (a.render == "text") out << "\n" << report::render_timeline(t, report::Format::Text);
  if (a.artifacts.empty() && a.render != "svg") return;
  const std::string prefix = (a.artifacts.empty() ? std::string("netrace") : a.artifacts) + "-" + slug(label);
  if (!a.artifacts.empty()) {
    write_file(prefix + ".tsv", to_event_log(t));
    write_file(prefix + ".json", to_json(t).dump(2) + "\n");
    out << "timeline " << label << ": " << prefix << ".tsv, " << prefix << ".json\n";
  }
  if (a.render == "svg") {
    write_file(prefix + ".svg", report::render_timeline(t, report::Format::Svg));
    out << "diagram " << label << ": " << prefix << ".svg\n";
  }
}

inline std::string describe(const LinkSpec& l) {
  return "R=" + format_seconds(l.bitrate) + " bit/s, l=" + format_seconds(l.length) +
         " m, s=" + format_seconds(l.prop_speed) + " m/s";
}

inline const char* convention_name(ArrivalConvention c) {
  return c == ArrivalConvention::FullArrival ? "full arrival" : "physical arrival";
}

}  // namespace detail

inline void run_linear(std::ostream& out, const GlobalOptions& g, const ArtifactOptions& a) {
  auto file = detail::load(g);
  if (g.config.empty() && g.preset.empty()) file = *presets::find("paper-linear");
  const auto sc = detail::require_section(file.chain, "chain");
  detail::require_valid(sc, "chain");

  ChainScenario message = sc;
  message.packet_bits = sc.message_bits;
  auto race = report::compare_races(des::simulate_chain(message), des::simulate_chain(sc), "message switching",
                                    "packet switching");
  const auto packet = analytic::packet_switching_delay(sc);
  const auto best = analytic::optimal_packet_size(sc.message_bits, sc.link, sc.intermediate_nodes, sc.convention);

  out << "linear chain race: M=" << sc.message_bits << " bits, P=" << sc.packet_bits << " bits, N="
      << sc.intermediate_nodes << " intermediate nodes, " << detail::describe(sc.link) << ", "
      << detail::convention_name(sc.convention) << "\n";
  out << report::to_table(race);
  out << "message " << format_seconds(race.time_a) << " s, packet " << format_seconds(race.time_b) << " s\n";
  out << "first packet at destination (packet switching): " << format_seconds(packet.first_packet) << " s\n";
  out << "optimal packet size: P=" << best.packet_bits << " bits (" << format_seconds(best.delay) << " s)\n";
  detail::emit_timeline(out, a, "message", race.timeline_a);
  detail::emit_timeline(out, a, "packet", race.timeline_b);
}

inline void run_http(std::ostream& out, const GlobalOptions& g, const ArtifactOptions& a, bool use_cache) {
  auto file = detail::load(g);
  if (g.config.empty() && g.preset.empty()) file = *presets::find(use_cache ? "paper-http-cache" : "paper-http");
  auto w = detail::require_section(file.web, "web");
  detail::require_valid(w, "web");
  if (use_cache && !w.cache) throw ValidationFailure{{"web.cache is required for --cache"}};
  if (!use_cache) w.cache.reset();

  const auto timeline = des::simulate_web(w);
  const auto rounds = analytic::plan_rounds(w);
  out << "web page download: b=" << w.base_bits << " bits, " << w.embedded_objects.size() << " embedded objects, C="
      << w.parallel_connections << ", server RTT=" << format_seconds(w.server_link.rtt())
      << " s, R=" << format_seconds(w.server_link.bitrate) << " bit/s\n";
  if (use_cache) out << "cache RTT: " << format_seconds(w.cache->link.rtt()) << " s\n";
  out << (use_cache ? "download delay (cached): " : "download delay: ")
      << format_seconds(use_cache ? analytic::cached_download_delay(w) : analytic::web_download_delay(w)) << " s\n";
  out << "simulated completion: " << format_seconds(timeline.completion_time) << " s\n";
  out << "connections opened: " << timeline.count(EventKind::Connected) << "\n";
  out << "object rounds: " << rounds.size() << "\n";
  detail::emit_timeline(out, a, use_cache ? "download-cached" : "download", timeline);
}

struct RachOptions {
  std::optional<std::int64_t> contenders;
  std::optional<std::int64_t> slots;
  std::string strategy;
  std::optional<std::int64_t> initially_admitted;
  std::optional<std::int64_t> admit_per_round;
  std::int64_t trials = 10'000;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_rounds;
  bool exact = false;
  bool trace = false;
};

inline void run_rach(std::ostream& out, const GlobalOptions& g, const ArtifactOptions& a, const RachOptions& o) {
  auto file = detail::load(g);
  RachScenario rs = file.rach ? *file.rach : presets::rach();
  if (o.contenders) rs.contenders = *o.contenders;
  if (o.slots) rs.slots = *o.slots;
  if (o.seed) rs.seed = *o.seed;
  if (o.max_rounds) rs.max_rounds = *o.max_rounds;
  if (o.strategy == "uncoordinated") rs.strategy = Uncoordinated{};
  if (o.strategy == "coordinated") rs.strategy = Coordinated{};
  if (o.strategy == "barring" || o.initially_admitted || o.admit_per_round) {
    Barring b = std::holds_alternative<Barring>(rs.strategy) ? std::get<Barring>(rs.strategy)
                                                              : Barring{std::max<std::int64_t>(1, rs.contenders / 2), BatchAfterDrain{}};
    if (o.initially_admitted) b.initially_admitted = *o.initially_admitted;
    if (o.admit_per_round) b.policy = AdmitPerRound{*o.admit_per_round};
    rs.strategy = b;
  }
  detail::require_valid(rs, "rach");
  if (o.trials < 1) throw ValidationFailure{{"--trials must be at least 1"}};

  std::string name = "uncoordinated";
  if (std::holds_alternative<Coordinated>(rs.strategy)) name = "coordinated";
  if (const auto* b = std::get_if<Barring>(&rs.strategy)) {
    name = "barring(" + std::to_string(b->initially_admitted) + ", ";
    name += std::holds_alternative<BatchAfterDrain>(b->policy)
                ? std::string("after drain)")
                : "+" + std::to_string(std::get<AdmitPerRound>(b->policy).per_round) + "/round)";
  }

  out << "connection establishment: " << rs.contenders << " phones, " << rs.slots << " slots, seed " << rs.seed << "\n";
  if (std::holds_alternative<Coordinated>(rs.strategy))
    out << "coordinated strategy: " << rach::coordinated_rounds(rs.contenders, rs.slots) << " rounds\n";

  const auto result = rach::simulate_rach(rs, o.trials);
  auto fixed4 = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
  };
  const std::size_t w = std::max<std::size_t>(name.size(), 8) + 2;
  out << std::left << std::setw(static_cast<int>(w)) << "strategy" << std::setw(9) << "trials" << std::setw(13)
      << "mean_rounds" << std::setw(11) << "std_error" << std::setw(6) << "min" << std::setw(6) << "max"
      << "overflow\n";
  out << std::left << std::setw(static_cast<int>(w)) << name << std::setw(9) << o.trials << std::setw(13)
      << fixed4(result.mean) << std::setw(11) << fixed4(result.std_error) << std::setw(6) << result.min_rounds
      << std::setw(6) << result.max_rounds << result.overflow_count << "\n";

  if (o.exact) {
    if (rs.contenders > rach::kExactBound || rs.slots > rach::kExactBound)
      throw ValidationFailure{{"--exact supports at most 10 phones and 10 slots"}};
    out << "expected rounds (exact, uncoordinated): " << fixed4(rach::expected_rounds_exact(rs.contenders, rs.slots))
        << "\n";
  }
  if (o.trace) {
    out << "first trial, newly connected per round:";
    for (auto n : result.connected_trace) out << ' ' << n;
    out << "\n";
  }
  if (!a.render.empty() || !a.artifacts.empty()) detail::emit_timeline(out, a, "rach", rach::rach_timeline(rs));
}

struct SdnOptions {
  std::string mode = "both";
  std::optional<std::int64_t> sweep;
  std::optional<std::int64_t> flow_size;
  std::optional<std::string> controller_distance;
};

inline void run_sdn(std::ostream& out, const GlobalOptions& g, const ArtifactOptions& a, const SdnOptions& o) {
  auto file = detail::load(g);
  if (g.config.empty() && g.preset.empty()) file = *presets::find("paper-sdn");
  auto sc = detail::require_section(file.sdn, "sdn");
  if (o.flow_size) sc.flow_size = *o.flow_size;
  if (o.controller_distance) {
    auto d = parse_rational(*o.controller_distance);
    if (!d) throw ValidationFailure{{"--controller-distance must be a number"}};
    sc.controller_leg.distance = *d;
  }
  detail::require_valid(sc, "sdn");

  out << "SDN networking race: F=" << sc.flow_size << " packets per source, " << detail::describe(sc.link)
      << ", controller " << format_seconds(sc.controller_leg.distance) << " m at "
      << format_seconds(sc.controller_leg.runner_speed) << " m/s\n";

  auto per_flow = [&](const char* label, const sdn::SdnRun& run) {
    out << label << " per flow:";
    for (const auto& [flow, t] : run.flow_completion) out << ' ' << flow << '=' << format_seconds(t) << 's';
    out << "\n";
  };

  if (o.mode == "both") {
    const auto race = sdn::run_race(sc);
    out << report::to_table(race);
    per_flow("IP", sdn::simulate(sc, RoutingMode::ClassicIP));
    per_flow("SDN", sdn::simulate(sc, RoutingMode::SdnCentral));
    detail::emit_timeline(out, a, "ip", race.timeline_a);
    detail::emit_timeline(out, a, "sdn", race.timeline_b);
  } else {
    const auto mode = o.mode == "ip" ? RoutingMode::ClassicIP : RoutingMode::SdnCentral;
    const auto run = sdn::simulate(sc, mode);
    out << (mode == RoutingMode::ClassicIP ? "IP" : "SDN") << " completion: " << format_seconds(run.timeline.completion_time)
        << " s\n";
    per_flow(mode == RoutingMode::ClassicIP ? "IP" : "SDN", run);
    detail::emit_timeline(out, a, o.mode, run.timeline);
  }

  if (o.sweep) {
    if (*o.sweep < 1) throw ValidationFailure{{"--sweep must be at least 1"}};
    out << "\n" << sdn::sweep_csv(sdn::sweep(sc, *o.sweep));
    const auto be = sdn::break_even_flow_size(sc, *o.sweep);
    out << "break-even flow size: " << (be ? std::to_string(*be) : "none up to " + std::to_string(*o.sweep)) << "\n";
  }
}

inline void run_plan(std::ostream& out, const GlobalOptions& g, std::int64_t class_size, const std::string& which) {
  auto file = detail::load(g);
  if (g.config.empty() && g.preset.empty()) {
    static const std::map<std::string, std::string> defaults{
        {"", "paper-linear"}, {"chain", "paper-linear"}, {"web", "paper-http"}, {"rach", "paper-rach"}, {"sdn", "paper-sdn"}};
    file = *presets::find(defaults.at(which));
  }
  std::optional<report::PlanScenario> scenario;
  auto pick = [&](const std::string& name, const auto& section) {
    if (!scenario && section && (which.empty() || which == name)) scenario = report::PlanScenario{*section};
  };
  pick("chain", file.chain);
  pick("web", file.web);
  pick("rach", file.rach);
  pick("sdn", file.sdn);
  if (!scenario)
    throw ValidationFailure{{which.empty() ? "scenario file holds no scenario" : "scenario has no '" + which + "' section"}};
  try {
    out << report::to_text(report::field_plan(*scenario, class_size));
  } catch (const report::ClassTooSmall& e) {
    throw ValidationFailure{{e.what()}};
  } catch (const std::invalid_argument& e) {
    throw ValidationFailure{{e.what()}};
  }
}

inline void run_validate(std::ostream& out, const std::string& path) {
  io::ScenarioFile file;
  try {
    file = io::parse_scenario_text(detail::read_file(path));
  } catch (const io::ConfigError& e) {
    throw ValidationFailure{{e.what()}};
  }
  const auto violations = io::validate(file);
  if (!violations.empty()) {
    ValidationFailure f;
    for (const auto& v : violations) f.messages.push_back(v.message());
    throw f;
  }
  out << path << ": ok\n";
}

/// Parses argv and runs one subcommand. Standard output is written to `out`
/// (or to --out FILE), diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Store-and-forward, web download, random access and SDN race simulator", "netrace"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Scenario file (JSON)");
  app.add_option("--preset", g.preset, "Built-in scenario")->check(CLI::IsMember(presets::names()));
  app.add_option("--convention", g.convention, "Arrival convention")->check(CLI::IsMember({"full", "physical"}));
  app.add_option("--out", g.out, "Write standard output to FILE");

  ArtifactOptions art;
  auto add_artifacts = [&](CLI::App* sub) {
    sub->add_option("--render", art.render, "Timing diagram format")->check(CLI::IsMember({"text", "svg"}));
    sub->add_option("--artifacts", art.artifacts, "Write PREFIX-<label>.tsv/.json (and .svg) timelines");
  };

  auto* linear = app.add_subcommand("linear", "Message vs packet switching race on a linear chain");
  add_artifacts(linear);

  bool use_cache = false;
  auto* http = app.add_subcommand("http", "Non-persistent HTTP web page download");
  http->add_flag("--cache", use_cache, "Fetch embedded objects from the cache");
  add_artifacts(http);

  RachOptions ro;
  auto* rach_cmd = app.add_subcommand("rach", "Connection establishment musical chairs");
  rach_cmd->add_option("--contenders", ro.contenders, "Number of phones");
  rach_cmd->add_option("--slots", ro.slots, "Number of slots (chairs)");
  rach_cmd->add_option("--strategy", ro.strategy, "Strategy")
      ->check(CLI::IsMember({"uncoordinated", "coordinated", "barring"}));
  rach_cmd->add_option("--admitted", ro.initially_admitted, "Barring: phones admitted initially");
  rach_cmd->add_option("--admit-per-round", ro.admit_per_round, "Barring: barred phones admitted per round");
  rach_cmd->add_option("--trials", ro.trials, "Monte Carlo trials");
  rach_cmd->add_option("--seed", ro.seed, "Random seed");
  rach_cmd->add_option("--max-rounds", ro.max_rounds, "Per-trial round cap");
  rach_cmd->add_flag("--exact", ro.exact, "Also print the exact expected rounds (uncoordinated)");
  rach_cmd->add_flag("--trace", ro.trace, "Print the first trial's per-round connections");
  add_artifacts(rach_cmd);

  SdnOptions so;
  auto* sdn_cmd = app.add_subcommand("sdn", "SDN vs IP routing race");
  sdn_cmd->add_option("--mode", so.mode, "Which network to run")->check(CLI::IsMember({"ip", "sdn", "both"}));
  sdn_cmd->add_option("--sweep", so.sweep, "Sweep flow sizes 1..F_MAX and report the break-even size");
  sdn_cmd->add_option("--flow-size", so.flow_size, "Packets per source");
  sdn_cmd->add_option("--controller-distance", so.controller_distance, "Distance from a to the controller");
  add_artifacts(sdn_cmd);

  std::int64_t class_size = 0;
  std::string plan_scenario;
  auto* plan = app.add_subcommand("plan", "Role assignment and ground markings for a class");
  plan->add_option("--class-size", class_size, "Number of students")->required();
  plan->add_option("--scenario", plan_scenario, "Scenario section to plan")
      ->check(CLI::IsMember({"chain", "web", "rach", "sdn"}));

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("file", validate_path, "Scenario file (defaults to --config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  std::ostringstream buffer;
  try {
    if (*linear) run_linear(buffer, g, art);
    if (*http) run_http(buffer, g, art, use_cache);
    if (*rach_cmd) run_rach(buffer, g, art, ro);
    if (*sdn_cmd) run_sdn(buffer, g, art, so);
    if (*plan) run_plan(buffer, g, class_size, plan_scenario);
    if (*validate_cmd) {
      const std::string path = validate_path.empty() ? g.config : validate_path;
      if (path.empty()) {
        err << "error: validate needs a file\n" << validate_cmd->help();
        return kUsageError;
      }
      run_validate(buffer, path);
    }
  } catch (const ValidationFailure& f) {
    for (const auto& m : f.messages) err << "invalid: " << m << "\n";
    return kValidationError;
  }

  if (!g.out.empty()) {
    try {
      detail::write_file(g.out, buffer.str());
    } catch (const ValidationFailure& f) {
      err << "error: " << f.messages.front() << "\n";
      return kValidationError;
    }
  } else {
    out << buffer.str();
  }
  return kOk;
}

}  // namespace netrace::cli
