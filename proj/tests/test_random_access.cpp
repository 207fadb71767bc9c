#include "netrace/random_access.hpp"

#include "oracles/rach_enumeration.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace netrace;

namespace {

RachScenario game(std::int64_t phones, std::int64_t slots, RachStrategy s = Uncoordinated{}, std::uint64_t seed = 11) {
  return RachScenario{phones, slots, s, seed, kDefaultMaxRounds};
}

}  // namespace

TEST(Coordinated, RoundCounts) {
  EXPECT_EQ(rach::coordinated_rounds(12, 4), 4);
  EXPECT_EQ(rach::coordinated_rounds(4, 4), 1);
  EXPECT_EQ(rach::coordinated_rounds(12, 1), 12);
  EXPECT_EQ(rach::coordinated_rounds(1, 1), 1);
  EXPECT_EQ(rach::coordinated_rounds(5, 2), 4);
  EXPECT_THROW(rach::coordinated_rounds(0, 3), std::invalid_argument);
}

TEST(Coordinated, SimulationAgreesWithCount) {
  for (std::int64_t p = 1; p <= 14; ++p)
    for (std::int64_t s = 1; s <= 5; ++s) {
      const auto r = rach::simulate_rach(game(p, s, Coordinated{}), 5);
      EXPECT_EQ(r.min_rounds, rach::coordinated_rounds(p, s));
      EXPECT_EQ(r.max_rounds, rach::coordinated_rounds(p, s));
      EXPECT_DOUBLE_EQ(r.std_error, 0.0);
    }
}

TEST(Uncoordinated, SinglePhoneSingleSlot) {
  const auto r = rach::simulate_rach(game(1, 1), 50);
  for (auto n : r.rounds_per_trial) EXPECT_EQ(n, 1);
}

TEST(Uncoordinated, TwoPhonesTwoSlots) {
  const auto r = rach::simulate_rach(game(2, 2), 100'000);
  EXPECT_EQ(r.overflow_count, 0);
  EXPECT_LT(std::abs(r.mean - 2.0), 4 * r.std_error);
}

TEST(Uncoordinated, OneSlotNeverResolvesAContest) {
  auto rs = game(3, 1);
  rs.max_rounds = 20;
  const auto r = rach::simulate_rach(rs, 10);
  EXPECT_EQ(r.overflow_count, 10);
  EXPECT_TRUE(std::isinf(rach::expected_rounds_exact(3, 1)));
  EXPECT_TRUE(std::isinf(oracle::expected_rounds_by_enumeration(3, 1)));
}

TEST(Uncoordinated, SameSeedSameRounds) {
  const auto a = rach::simulate_rach(game(8, 3), 500);
  const auto b = rach::simulate_rach(game(8, 3), 500);
  EXPECT_EQ(a.rounds_per_trial, b.rounds_per_trial);
  const auto c = rach::simulate_rach(game(8, 3, Uncoordinated{}, 12), 500);
  EXPECT_NE(a.rounds_per_trial, c.rounds_per_trial);
}

TEST(Uncoordinated, TraceSumsToContenders) {
  const auto r = rach::simulate_rach(game(12, 4), 1);
  std::int64_t total = 0;
  for (auto n : r.connected_trace) total += n;
  EXPECT_EQ(total, 12);
  EXPECT_EQ(static_cast<std::int64_t>(r.connected_trace.size()), r.rounds_per_trial.front());
}

TEST(Barring, BatchAfterDrainIsMeasured) {
  const auto barred = rach::simulate_rach(game(12, 4, Barring{6, BatchAfterDrain{}}), 4000);
  const auto open = rach::simulate_rach(game(12, 4), 4000);
  EXPECT_EQ(barred.overflow_count, 0);
  EXPECT_GT(barred.mean, 1.0);
  EXPECT_GT(open.mean, 1.0);
  EXPECT_NE(barred.mean, open.mean);
}

TEST(Barring, AdmitPerRoundEveryoneConnects) {
  const auto r = rach::simulate_rach(game(10, 3, Barring{2, AdmitPerRound{2}}), 1);
  std::int64_t total = 0;
  for (auto n : r.connected_trace) total += n;
  EXPECT_EQ(total, 10);
}

TEST(Barring, FullAdmissionEqualsUncoordinated) {
  const auto a = rach::simulate_rach(game(6, 3, Barring{6, BatchAfterDrain{}}), 300);
  const auto b = rach::simulate_rach(game(6, 3), 300);
  EXPECT_EQ(a.rounds_per_trial, b.rounds_per_trial);
}

TEST(Exact, SmallCases) {
  EXPECT_DOUBLE_EQ(rach::expected_rounds_exact(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(rach::expected_rounds_exact(1, 7), 1.0);
  EXPECT_NEAR(rach::expected_rounds_exact(2, 2), 2.0, 1e-12);
  const double three_two = oracle::expected_rounds_by_enumeration(3, 2);
  EXPECT_NEAR(three_two, 10.0 / 3.0, 1e-12);
  EXPECT_NEAR(rach::expected_rounds_exact(3, 2), three_two, 1e-12);
}

TEST(Exact, DistributionMatchesEnumeration) {
  for (int p = 0; p <= 6; ++p)
    for (int s = 1; s <= 5; ++s) {
      const auto dp = rach::singleton_count_distribution(p, s);
      const auto brute = oracle::enumerate_singletons(p, s);
      EXPECT_EQ(dp, brute) << p << " phones, " << s << " slots";
    }
}

TEST(Exact, ExpectedMatchesEnumeration) {
  for (int p = 1; p <= 6; ++p)
    for (int s = 2; s <= 6; ++s)
      EXPECT_NEAR(rach::expected_rounds_exact(p, s), oracle::expected_rounds_by_enumeration(p, s), 1e-9);
}

TEST(Exact, BoundEnforced) {
  EXPECT_THROW(rach::expected_rounds_exact(11, 4), std::out_of_range);
  EXPECT_NO_THROW(rach::expected_rounds_exact(10, 10));
}

TEST(Timeline, RoundsOnTimeAxis) {
  const auto t = rach::rach_timeline(game(5, 3));
  const auto r = rach::simulate_rach(game(5, 3), 1);
  EXPECT_EQ(t.completion_time, Rational(r.rounds_per_trial.front()));
  EXPECT_EQ(t.count(EventKind::Connected), 5u);
  EXPECT_EQ(t.lanes, LaneStyle::PerNode);
}

TEST(Rng, UniformBelowStaysInRange) {
  std::mt19937_64 rng(rach::trial_seed(3, 4));
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[rach::uniform_below(rng, 5)];
  for (int h : hits) EXPECT_GT(h, 800);
}
