#pragma once

// Slotted random access ("musical chairs"): phones pick one of S slots per
// round; a phone alone in its slot is connected, every other phone retries.

#include "netrace/core.hpp"
#include "netrace/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace netrace::rach {

// Reproducibility contract: trial i of a run with seed s draws from
// std::mt19937_64 seeded with splitmix64(s + i * 0x9E3779B97F4A7C15), and a
// slot is chosen by unbiased rejection sampling on the raw 64-bit output
// (not std::uniform_int_distribution, whose algorithm is unspecified).

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed + trial * 0x9E3779B97F4A7C15ULL);
}

/// Uniform integer in [0, n) without modulo bias.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t rem = (kMax % n + 1) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x <= kMax - rem) return x % n;
  }
}

struct RoundsResult {
  std::vector<std::int64_t> rounds_per_trial;  // all trials, overflowed ones hold max_rounds
  std::vector<bool> overflowed;
  std::int64_t overflow_count = 0;
  double mean = 0.0;  // over completed trials only
  double std_error = 0.0;
  std::int64_t min_rounds = 0;
  std::int64_t max_rounds = 0;
  std::vector<std::int64_t> connected_trace;  // first trial, newly connected per round
};

namespace detail {

inline void require_valid(const RachScenario& rs) {
  if (auto v = validate(rs); !v.empty()) throw std::invalid_argument(v.front().message());
}

struct TrialOutcome {
  std::int64_t rounds = 0;
  bool overflowed = false;
  std::vector<std::int64_t> trace;
};

/// One game. Phones carry ids 0..P-1; active phones draw slots in id order.
/// With `events` set, every pick, slot outcome and connection is recorded at
/// time = round number.
inline TrialOutcome play(const RachScenario& rs, std::uint64_t trial, std::vector<Event>* events = nullptr) {
  std::mt19937_64 rng(trial_seed(rs.seed, trial));
  const auto slots = static_cast<std::size_t>(rs.slots);

  std::int64_t initially = rs.contenders;
  const Barring* barring = std::get_if<Barring>(&rs.strategy);
  if (barring) initially = barring->initially_admitted;
  const bool coordinated = std::holds_alternative<Coordinated>(rs.strategy);

  std::vector<std::int64_t> active;
  for (std::int64_t id = 0; id < initially; ++id) active.push_back(id);
  std::int64_t next_barred = initially;

  auto phone = [&](std::int64_t id) {
    std::string s = std::to_string(id + 1);
    const std::size_t width = std::to_string(rs.contenders).size();
    return "phone" + std::string(width - s.size(), '0') + s;
  };

  TrialOutcome out;
  std::vector<std::vector<std::int64_t>> occupants(slots);
  while (!active.empty() || next_barred < rs.contenders) {
    if (out.rounds >= rs.max_rounds) {
      out.overflowed = true;
      return out;
    }
    ++out.rounds;
    if (barring) {
      std::int64_t admit = 0;
      if (std::holds_alternative<BatchAfterDrain>(barring->policy)) {
        if (active.empty()) admit = rs.contenders - next_barred;
      } else if (out.rounds > 1) {
        admit = std::min(std::get<AdmitPerRound>(barring->policy).per_round, rs.contenders - next_barred);
      }
      for (std::int64_t k = 0; k < admit; ++k) active.push_back(next_barred++);
    }

    for (auto& o : occupants) o.clear();
    if (coordinated) {
      // phones agree: S-1 sit alone, the rest share the last chair
      const std::size_t alone = active.size() <= slots ? active.size() : (slots >= 2 ? slots - 1 : 1);
      for (std::size_t i = 0; i < active.size(); ++i)
        occupants[i < alone ? i : slots - 1].push_back(active[i]);
      if (slots == 1 && active.size() > 1) {
        // one volunteer takes the chair, everyone else sits the round out
        occupants[0].assign(1, active[0]);
      }
    } else {
      for (auto id : active) occupants[uniform_below(rng, slots)].push_back(id);
    }

    const Seconds t{out.rounds};
    std::vector<std::int64_t> connected;
    for (std::size_t s = 0; s < slots; ++s) {
      const auto& here = occupants[s];
      const std::string slot = "slot" + std::to_string(s + 1);
      if (events)
        for (auto id : here) events->push_back({t, phone(id), EventKind::SlotPick, slot, ""});
      if (here.size() == 1) {
        connected.push_back(here.front());
        if (events) events->push_back({t, slot, EventKind::SlotSuccess, slot, phone(here.front())});
      } else if (here.size() > 1 && events) {
        events->push_back({t, slot, EventKind::SlotCollision, slot, std::to_string(here.size()) + " requests"});
      }
    }
    if (events)
      for (auto id : connected) events->push_back({t, phone(id), EventKind::Connected, "connected", ""});
    std::sort(connected.begin(), connected.end());
    std::erase_if(active, [&](std::int64_t id) { return std::binary_search(connected.begin(), connected.end(), id); });
    out.trace.push_back(static_cast<std::int64_t>(connected.size()));
  }
  return out;
}

}  // namespace detail

/// Monte Carlo over `trials` independent games.
inline RoundsResult simulate_rach(const RachScenario& rs, std::int64_t trials) {
  detail::require_valid(rs);
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");

  RoundsResult r;
  r.rounds_per_trial.reserve(static_cast<std::size_t>(trials));
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t completed = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    auto outcome = detail::play(rs, static_cast<std::uint64_t>(i));
    if (i == 0) r.connected_trace = outcome.trace;
    r.rounds_per_trial.push_back(outcome.rounds);
    r.overflowed.push_back(outcome.overflowed);
    if (outcome.overflowed) {
      ++r.overflow_count;
      continue;
    }
    const auto x = static_cast<double>(outcome.rounds);
    sum += x;
    sum_sq += x * x;
    r.min_rounds = completed == 0 ? outcome.rounds : std::min(r.min_rounds, outcome.rounds);
    r.max_rounds = completed == 0 ? outcome.rounds : std::max(r.max_rounds, outcome.rounds);
    ++completed;
  }
  if (completed > 0) {
    const auto n = static_cast<double>(completed);
    r.mean = sum / n;
    if (completed > 1) {
      const double variance = std::max(0.0, (sum_sq - n * r.mean * r.mean) / (n - 1));
      r.std_error = std::sqrt(variance / n);
    }
  } else {
    r.mean = std::numeric_limits<double>::infinity();
  }
  return r;
}

/// The first trial of simulate_rach as a Timeline (time axis = round number).
inline Timeline rach_timeline(const RachScenario& rs) {
  detail::require_valid(rs);
  Timeline t;
  t.title = "connection establishment";
  t.lanes = LaneStyle::PerNode;
  auto outcome = detail::play(rs, 0, &t.events);
  t.completion_time = Seconds{outcome.rounds};
  t.normalize();
  return t;
}

/// Rounds needed when the phones coordinate: S-1 sit alone each round while
/// the rest crowd the last chair; with a single chair one volunteer per round.
inline std::int64_t coordinated_rounds(std::int64_t contenders, std::int64_t slots) {
  if (contenders < 1 || slots < 1) throw std::invalid_argument("contenders and slots must be at least 1");
  if (contenders <= slots) return 1;
  if (slots == 1) return contenders;
  const std::int64_t remaining = contenders - slots;
  return (remaining + slots - 2) / (slots - 1) + 1;
}

inline constexpr std::int64_t kExactBound = 10;

/// counts[k] = number of the S^n slot assignments of n labelled phones in
/// which exactly k slots hold a single phone.
inline std::vector<std::uint64_t> singleton_count_distribution(std::int64_t phones, std::int64_t slots) {
  if (phones < 0 || slots < 1 || phones > kExactBound || slots > kExactBound)
    throw std::out_of_range("exact computation supports at most 10 phones and 10 slots");
  const auto n = static_cast<std::size_t>(phones);

  std::vector<std::vector<std::uint64_t>> binom(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    binom[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
  }

  // ways[used][singles] after filling some prefix of the slots
  std::vector<std::vector<std::uint64_t>> ways(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  ways[0][0] = 1;
  for (std::int64_t s = 0; s < slots; ++s) {
    std::vector<std::vector<std::uint64_t>> next(n + 1, std::vector<std::uint64_t>(n + 1, 0));
    for (std::size_t used = 0; used <= n; ++used)
      for (std::size_t singles = 0; singles <= n; ++singles) {
        if (ways[used][singles] == 0) continue;
        for (std::size_t c = 0; used + c <= n; ++c)
          next[used + c][singles + (c == 1 ? 1 : 0)] += ways[used][singles] * binom[n - used][c];
      }
    ways = std::move(next);
  }
  return ways[n];
}

/// Expected rounds of the uncoordinated game, from the absorbing Markov chain
/// on the number of unconnected phones. Infinite when absorption is
/// impossible (two or more phones on one chair).
inline double expected_rounds_exact(std::int64_t contenders, std::int64_t slots) {
  if (contenders < 1 || slots < 1) throw std::invalid_argument("contenders and slots must be at least 1");
  if (contenders > kExactBound || slots > kExactBound)
    throw std::out_of_range("exact computation supports at most 10 phones and 10 slots");

  std::vector<long double> expected(static_cast<std::size_t>(contenders) + 1, 0.0L);
  for (std::int64_t n = 1; n <= contenders; ++n) {
    const auto counts = singleton_count_distribution(n, slots);
    long double total = 0.0L;
    for (auto c : counts) total += static_cast<long double>(c);
    const long double stay = static_cast<long double>(counts[0]) / total;
    if (stay >= 1.0L) {
      expected[static_cast<std::size_t>(n)] = std::numeric_limits<long double>::infinity();
      continue;
    }
    long double acc = 1.0L;
    for (std::size_t k = 1; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      acc += static_cast<long double>(counts[k]) / total * expected[static_cast<std::size_t>(n) - k];
    }
    expected[static_cast<std::size_t>(n)] = acc / (1.0L - stay);
  }
  return static_cast<double>(expected.back());
}

}  // namespace netrace::rach
