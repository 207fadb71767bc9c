#include "netrace/sdn_race.hpp"

#include "oracles/tick_flow_oracle.hpp"

#include <gtest/gtest.h>

using namespace netrace;

namespace {

const std::vector<std::string> kIpA{"A", "a", "d", "e", "C"};
const std::vector<std::string> kIpB{"B", "a", "d", "e", "C"};
const std::vector<std::string> kSdnA{"A", "a", "b", "c", "C"};
const std::vector<std::string> kSdnB{"B", "a", "d", "e", "C"};

SdnScenario race(std::int64_t flow_size, int controller_distance) {
  SdnScenario sc;
  sc.flow_size = flow_size;
  sc.link = LinkSpec{Rational(1), Rational(10), Rational(1)};
  sc.controller_leg = ControllerLeg{Rational(controller_distance), Rational(1)};
  return sc;
}

/// Independent release rule: the first packet counts as held at a after one
/// walk plus one bit time; the runner needs 2d/v per query, A then B.
std::pair<std::int64_t, std::int64_t> single_runner_releases(int distance) {
  const std::int64_t first = 10 + 1;
  const std::int64_t tq = 2 * distance;
  return {first + tq, first + 2 * tq};
}

}  // namespace

TEST(Topology, Routes) {
  EXPECT_EQ(sdn::route(RoutingMode::ClassicIP, "A"), kIpA);
  EXPECT_EQ(sdn::route(RoutingMode::ClassicIP, "B"), kIpB);
  EXPECT_EQ(sdn::route(RoutingMode::SdnCentral, "A"), kSdnA);
  EXPECT_EQ(sdn::route(RoutingMode::SdnCentral, "B"), kSdnB);
  EXPECT_EQ(sdn::race_topology(LinkSpec{}).links.size(), 8u);
}

TEST(Fixtures, IpSharedPath) {
  const auto o = oracle::run_race(6, 1, 10, kIpA, kIpB);
  EXPECT_EQ(o.makespan, 55);
  EXPECT_EQ(sdn::simulate(race(6, 0), RoutingMode::ClassicIP).timeline.completion_time, Rational(o.makespan));
}

TEST(Fixtures, FreeControllerDisjointPaths) {
  const auto [ra, rb] = single_runner_releases(0);
  const auto o = oracle::run_race(6, 1, 10, kSdnA, kSdnB, {{"a", ra}}, {{"a", rb}});
  // hand trace quoted as 50 s; brute force: last departure from a at 16, then 3 hops of 11 s
  EXPECT_EQ(o.makespan, 49);
  const auto r = sdn::run_race(race(6, 0));
  EXPECT_EQ(r.time_b, Rational(o.makespan));
  EXPECT_EQ(r.time_a, Rational(55));
  ASSERT_TRUE(r.winner);
  EXPECT_EQ(*r.winner, "SDN");
  EXPECT_EQ(r.margin, Rational(6));
}

TEST(Fixtures, FourSecondQueries) {
  const auto [ra, rb] = single_runner_releases(2);
  EXPECT_EQ(ra, 15);
  EXPECT_EQ(rb, 19);
  const auto o = oracle::run_race(6, 1, 10, kSdnA, kSdnB, {{"a", ra}}, {{"a", rb}});
  EXPECT_EQ(o.completion.at("A"), 53);
  EXPECT_EQ(o.completion.at("B"), 57);
  const auto run = sdn::simulate(race(6, 2), RoutingMode::SdnCentral);
  EXPECT_EQ(run.flow_completion.at("A"), Rational(53));
  EXPECT_EQ(run.flow_completion.at("B"), Rational(57));
  const auto r = sdn::run_race(race(6, 2));
  ASSERT_TRUE(r.winner);
  EXPECT_EQ(*r.winner, "IP");
  EXPECT_EQ(r.margin, Rational(2));
}

TEST(Fixtures, AfterBothQueriesReleasesTogether) {
  auto sc = race(6, 2);
  sc.release = ReleasePolicy::AfterBothQueries;
  const auto o = oracle::run_race(6, 1, 10, kSdnA, kSdnB, {{"a", 19}}, {{"a", 19}});
  const auto run = sdn::simulate(sc, RoutingMode::SdnCentral);
  EXPECT_EQ(run.flow_completion.at("A"), Rational(o.completion.at("A")));
  EXPECT_EQ(run.flow_completion.at("B"), Rational(o.completion.at("B")));
}

TEST(Fixtures, RandomControllerDistancesMatchOracle) {
  for (int d = 0; d <= 12; d += 3)
    for (std::int64_t f = 1; f <= 8; f += 3) {
      const auto [ra, rb] = single_runner_releases(d);
      const auto o = oracle::run_race(f, 1, 10, kSdnA, kSdnB, {{"a", ra}}, {{"a", rb}});
      EXPECT_EQ(sdn::simulate(race(f, d), RoutingMode::SdnCentral).timeline.completion_time, Rational(o.makespan))
          << "d=" << d << " F=" << f;
      const auto ip = oracle::run_race(f, 1, 10, kIpA, kIpB);
      EXPECT_EQ(sdn::simulate(race(f, d), RoutingMode::ClassicIP).timeline.completion_time, Rational(ip.makespan));
    }
}

TEST(Control, PlanEvents) {
  const auto plan = sdn::plan_control(race(6, 2));
  EXPECT_EQ(plan.release_at.at("A").at("a"), Rational(15));
  EXPECT_EQ(plan.release_at.at("B").at("a"), Rational(19));
  EXPECT_EQ(plan.events.size(), 6u);
  auto ip = race(6, 2);
  ip.mode = RoutingMode::ClassicIP;
  EXPECT_TRUE(sdn::plan_control(ip).release_at.empty());
}

TEST(Control, PerNodeRunners) {
  auto sc = race(6, 2);
  sc.config_style = PerNodeRunners{{{"b", Rational(3)}, {"c", Rational(5)}, {"d", Rational(1)}, {"e", Rational(4)}}};
  const auto plan = sdn::plan_control(sc);
  // query reaches the controller at 13 (A) and 17 (B)
  EXPECT_EQ(plan.release_at.at("A").at("a"), Rational(15));
  EXPECT_EQ(plan.release_at.at("A").at("b"), Rational(16));
  EXPECT_EQ(plan.release_at.at("A").at("c"), Rational(18));
  EXPECT_EQ(plan.release_at.at("B").at("d"), Rational(18));
  EXPECT_EQ(plan.release_at.at("B").at("e"), Rational(21));
  const auto run = sdn::simulate(sc, RoutingMode::SdnCentral);
  EXPECT_GE(run.timeline.completion_time, sdn::simulate(race(6, 2), RoutingMode::SdnCentral).timeline.completion_time);
}

TEST(Control, HypervisorLengthensEveryLeg) {
  auto sc = race(6, 2);
  sc.hypervisor = Hypervisor{Rational(3), Rational(2)};
  const auto plan = sdn::plan_control(sc);
  EXPECT_EQ(plan.release_at.at("A").at("a"), Rational(11 + 10));
  EXPECT_EQ(plan.release_at.at("B").at("a"), Rational(11 + 20));
}

TEST(Control, CutThroughFirstPacketIsEarlier) {
  auto sc = race(6, 2);
  sc.switching = CutThrough{};
  EXPECT_EQ(sdn::plan_control(sc).release_at.at("A").at("a"), Rational(14));
  const auto o = oracle::run_race(6, 1, 10, kSdnA, kSdnB, {{"a", 14}}, {{"a", 18}}, oracle::Arrival::Physical);
  EXPECT_EQ(sdn::simulate(sc, RoutingMode::SdnCentral).timeline.completion_time, Rational(o.makespan));
}

TEST(Properties, FreeControllerNeverLoses) {
  for (std::int64_t f = 1; f <= 30; ++f) {
    const auto r = sdn::run_race(race(f, 0));
    EXPECT_LE(r.time_b, r.time_a) << "F=" << f;
  }
}

TEST(Properties, IpIgnoresControllerSettings) {
  const auto base = sdn::simulate(race(7, 0), RoutingMode::ClassicIP).timeline;
  auto sc = race(7, 9);
  sc.hypervisor = Hypervisor{Rational(4), Rational(4)};
  sc.release = ReleasePolicy::AfterBothQueries;
  EXPECT_EQ(sdn::simulate(sc, RoutingMode::ClassicIP).timeline, base);
}

TEST(Properties, MonotoneInControllerDistance) {
  Seconds previous{0};
  for (int d = 0; d < 10; ++d) {
    const auto t = sdn::simulate(race(6, d), RoutingMode::SdnCentral).timeline.completion_time;
    EXPECT_GE(t, previous);
    previous = t;
  }
}

TEST(BreakEven, FreeControllerWinsAtOnePacket) {
  EXPECT_EQ(sdn::break_even_flow_size(race(1, 0), 10), 1);
  const auto r = sdn::run_race(race(1, 0));
  EXPECT_EQ(r.time_a, Rational(45));
  EXPECT_EQ(r.time_b, Rational(44));
}

TEST(BreakEven, FarControllerNeverPays) {
  EXPECT_FALSE(sdn::break_even_flow_size(race(1, 500), 30));
  const auto r = sdn::run_race(race(1, 500));
  EXPECT_EQ(*r.winner, "IP");
}

TEST(BreakEven, ThresholdSplitsTheSweep) {
  const auto sc = race(6, 2);
  const auto be = sdn::break_even_flow_size(sc, 30);
  ASSERT_TRUE(be);
  for (const auto& row : sdn::sweep(sc, 30)) {
    if (row.flow_size < *be) EXPECT_GE(row.sdn, row.ip) << row.flow_size;
    else EXPECT_LT(row.sdn, row.ip) << row.flow_size;
  }
}

TEST(Sweep, Csv) {
  const auto csv = sdn::sweep_csv(sdn::sweep(race(1, 0), 2));
  EXPECT_EQ(csv, "F,ip_seconds,sdn_seconds,winner\n1,45,44,SDN\n2,47,45,SDN\n");
}
