#pragma once

// Exact expected rounds for uncoordinated slot picking, by listing every
// slot assignment of the remaining phones.

#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

/// counts[k] = number of the slots^phones assignments with exactly k phones
/// alone in their slot.
inline std::vector<std::uint64_t> enumerate_singletons(int phones, int slots) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(phones) + 1, 0);
  std::vector<int> pick(static_cast<std::size_t>(phones), 0);
  while (true) {
    std::vector<int> load(static_cast<std::size_t>(slots), 0);
    for (int p : pick) ++load[static_cast<std::size_t>(p)];
    int alone = 0;
    for (int n : load) alone += n == 1 ? 1 : 0;
    ++counts[static_cast<std::size_t>(alone)];
    int i = 0;
    while (i < phones && ++pick[static_cast<std::size_t>(i)] == slots) pick[static_cast<std::size_t>(i++)] = 0;
    if (i == phones) break;
  }
  return counts;
}

/// Expected rounds until every phone has sat alone once.
inline double expected_rounds_by_enumeration(int phones, int slots) {
  std::vector<double> e(static_cast<std::size_t>(phones) + 1, 0.0);
  for (int n = 1; n <= phones; ++n) {
    const auto counts = enumerate_singletons(n, slots);
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    const double stay = static_cast<double>(counts[0]) / total;
    if (stay >= 1.0) return std::numeric_limits<double>::infinity();
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) acc += static_cast<double>(counts[static_cast<std::size_t>(k)]) / total * e[static_cast<std::size_t>(n - k)];
    e[static_cast<std::size_t>(n)] = acc / (1.0 - stay);
  }
  return e[static_cast<std::size_t>(phones)];
}

}  // namespace oracle
