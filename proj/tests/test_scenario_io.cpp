#include "netrace/presets.hpp"
#include "netrace/scenario_io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace netrace;

namespace {

std::vector<std::string> messages(const Violations& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.message());
  return out;
}

io::ScenarioFile round_trip(const io::ScenarioFile& f) { return io::parse_scenario_text(io::to_json(f).dump()); }

}  // namespace

TEST(ScenarioText, ChainWithDefaults) {
  const auto f = io::parse_scenario_text(R"({"chain": {"message_bits": 12, "packet_bits": 3, "intermediate_nodes": 3,
      "link": {"bitrate": 1, "length": 10, "prop_speed": "1/2"}}})");
  ASSERT_TRUE(f.chain);
  EXPECT_EQ(f.chain->link.prop_speed, Rational(1, 2));
  EXPECT_EQ(f.chain->convention, ArrivalConvention::FullArrival);
  EXPECT_FALSE(f.web);
}

TEST(ScenarioText, DecimalsAreExact) {
  const auto f = io::parse_scenario_text(R"({"chain": {"message_bits": 2, "packet_bits": 1, "intermediate_nodes": 0,
      "link": {"bitrate": 0.5, "length": 2.25, "prop_speed": 1}}})");
  EXPECT_EQ(f.chain->link.bitrate, Rational(1, 2));
  EXPECT_EQ(f.chain->link.length, Rational(9, 4));
}

TEST(ScenarioText, UnknownKeysRejected) {
  try {
    io::parse_scenario_text(R"({"chain": {"message_bits": 1, "packet_bits": 1, "intermediate_nodes": 0,
        "link": {"bitrate": 1, "length": 1, "prop_speed": 1}, "colour": "red"}})");
    FAIL();
  } catch (const io::ConfigError& e) {
    EXPECT_EQ(e.field(), "chain.colour");
  }
  EXPECT_THROW(io::parse_scenario_text(R"({"tcp": {}})"), io::ConfigError);
}

TEST(ScenarioText, BadValues) {
  EXPECT_THROW(io::parse_scenario_text("{"), io::ConfigError);
  EXPECT_THROW(io::parse_scenario_text("[1,2]"), io::ConfigError);
  EXPECT_THROW(io::parse_scenario_text(R"({"rach": {"contenders": "many", "slots": 2}})"), io::ConfigError);
  EXPECT_THROW(io::parse_scenario_text(R"({"rach": {"contenders": 2, "slots": 2, "strategy": "polite"}})"),
               io::ConfigError);
  EXPECT_THROW(io::parse_scenario_text(R"({"sdn": {"flow_size": 2, "link": {"bitrate": 1, "length": 1,
      "prop_speed": 1}, "controller_leg": {"distance": 1}, "switching": "cut_through", "convention": "full"}})"),
               io::ConfigError);
}

TEST(ScenarioText, BlankIsEmptyDocument) {
  const auto f = io::parse_scenario_text("  \n");
  EXPECT_TRUE(f.empty());
  const auto v = messages(io::validate(f));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rfind("document contains no scenario", 0), 0u);
}

TEST(ScenarioText, ViolationsArePrefixed) {
  const auto f = io::parse_scenario_text(R"({"chain": {"message_bits": 12, "packet_bits": 5, "intermediate_nodes": 3,
      "link": {"bitrate": 0, "length": 10, "prop_speed": 1}}})");
  EXPECT_EQ(messages(io::validate(f)),
            (std::vector<std::string>{"chain.packet_bits must divide message_bits", "chain.link.bitrate must be positive"}));
}

TEST(ScenarioText, ControllerRunnerDefaultsToLinkSpeed) {
  const auto f = io::parse_scenario_text(R"({"sdn": {"flow_size": 2, "link": {"bitrate": 1, "length": 1,
      "prop_speed": 3}, "controller_leg": {"distance": 1}}})");
  EXPECT_EQ(f.sdn->controller_leg.runner_speed, Rational(3));
}

TEST(RoundTrip, Presets) {
  for (const auto& [name, file] : presets::all()) EXPECT_EQ(round_trip(file), file) << name;
}

TEST(RoundTrip, EveryVariant) {
  io::ScenarioFile f;
  f.chain = ChainScenario{6, 2, 1, LinkSpec{Rational(3, 2), Rational(7), Rational(1, 3)}, ArrivalConvention::PhysicalArrival};
  WebScenario w = presets::http();
  w.cache = CacheSpec{WebLink{Rational(1, 2), Rational(3), Rational(2)}, std::vector<std::size_t>{2, 0}};
  f.web = w;
  f.rach = RachScenario{9, 3, Barring{4, AdmitPerRound{2}}, 18446744073709551615ull, 77};
  SdnScenario sc = presets::sdn();
  sc.switching = CutThrough{};
  sc.config_style = PerNodeRunners{{{"b", Rational(1)}, {"c", Rational(2)}, {"d", Rational(5, 2)}, {"e", Rational(0)}}};
  sc.hypervisor = Hypervisor{Rational(1), Rational(2)};
  sc.release = ReleasePolicy::AfterBothQueries;
  sc.mode = RoutingMode::ClassicIP;
  f.sdn = sc;
  EXPECT_EQ(round_trip(f), f);

  f.rach->strategy = Barring{2, BatchAfterDrain{}};
  EXPECT_EQ(round_trip(f), f);
  f.rach->strategy = Coordinated{};
  EXPECT_EQ(round_trip(f), f);
}

TEST(RoundTrip, RandomChains) {
  std::mt19937_64 rng(3);
  auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  for (int i = 0; i < 200; ++i) {
    io::ScenarioFile f;
    f.chain = ChainScenario{pick(1, 50), pick(1, 50), pick(0, 9),
                            LinkSpec{Rational(pick(1, 9), pick(1, 9)), Rational(pick(0, 99), pick(1, 7)),
                                     Rational(pick(1, 9), pick(1, 9))},
                            pick(0, 1) ? ArrivalConvention::FullArrival : ArrivalConvention::PhysicalArrival};
    EXPECT_EQ(round_trip(f), f);
  }
}
