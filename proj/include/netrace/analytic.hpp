#pragma once

// Closed-form delays for the linear chain race and the web page download.
// These are first-class results and the reference the event simulator is
// checked against.

#include "netrace/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace netrace::analytic {

namespace detail {

/// Per-hop cost of moving one group of `bits` across one link.
inline Seconds hop_delay(std::int64_t bits, const LinkSpec& link, ArrivalConvention conv) {
  const std::int64_t counted = conv == ArrivalConvention::FullArrival ? bits : bits - 1;
  return Rational(counted) / link.bitrate + link.propagation_delay();
}

inline void require_valid(const ChainScenario& sc) {
  if (auto v = validate(sc); !v.empty()) throw std::invalid_argument(v.front().message());
}

}  // namespace detail

inline Seconds message_switching_delay(std::int64_t message_bits, const LinkSpec& link, std::int64_t intermediate_nodes,
                                       ArrivalConvention conv) {
  detail::require_valid({message_bits, message_bits, intermediate_nodes, link, conv});
  return Rational(intermediate_nodes + 1) * detail::hop_delay(message_bits, link, conv);
}

struct PacketDelay {
  Seconds first_packet{0};
  Seconds total{0};
  friend bool operator==(const PacketDelay&, const PacketDelay&) = default;
};

/// The first packet pays the full store-and-forward cost on every hop; the
/// remaining M/P - 1 packets follow it at the source spacing P/R.
inline PacketDelay packet_switching_delay(std::int64_t message_bits, std::int64_t packet_bits, const LinkSpec& link,
                                          std::int64_t intermediate_nodes, ArrivalConvention conv) {
  detail::require_valid({message_bits, packet_bits, intermediate_nodes, link, conv});
  PacketDelay d;
  d.first_packet = Rational(intermediate_nodes + 1) * detail::hop_delay(packet_bits, link, conv);
  d.total = d.first_packet + Rational(message_bits / packet_bits - 1) * Rational(packet_bits) / link.bitrate;
  return d;
}

inline PacketDelay packet_switching_delay(const ChainScenario& sc) {
  return packet_switching_delay(sc.message_bits, sc.packet_bits, sc.link, sc.intermediate_nodes, sc.convention);
}

struct OptimalPacket {
  std::int64_t packet_bits = 1;
  Seconds delay{0};
  friend bool operator==(const OptimalPacket&, const OptimalPacket&) = default;
};

/// Exhaustive search over the divisors of M; ties go to the smaller packet.
inline OptimalPacket optimal_packet_size(std::int64_t message_bits, const LinkSpec& link,
                                         std::int64_t intermediate_nodes, ArrivalConvention conv) {
  if (message_bits < 1) throw std::invalid_argument("message_bits must be at least 1");
  std::optional<OptimalPacket> best;
  for (std::int64_t p = 1; p <= message_bits; ++p) {
    if (message_bits % p != 0) continue;
    const auto total = packet_switching_delay(message_bits, p, link, intermediate_nodes, conv).total;
    if (!best || total < best->delay) best = OptimalPacket{p, total};
  }
  return *best;
}

/// One batch of up to C objects fetched over parallel connections.
struct DownloadRound {
  std::vector<std::size_t> objects;  // indices into WebScenario::embedded_objects
  bool from_cache = false;
  friend bool operator==(const DownloadRound&, const DownloadRound&) = default;
};

/// Cached objects first, then uncached ones, each group chunked C at a time in
/// listed order. Shared with the event simulator so both walk the same rounds.
inline std::vector<DownloadRound> plan_rounds(const WebScenario& w) {
  std::vector<std::size_t> cached;
  std::vector<std::size_t> uncached;
  for (std::size_t i = 0; i < w.embedded_objects.size(); ++i) (w.is_cached(i) ? cached : uncached).push_back(i);

  std::vector<DownloadRound> rounds;
  const auto per_round = static_cast<std::size_t>(w.parallel_connections);
  auto chunk = [&](const std::vector<std::size_t>& ids, bool from_cache) {
    for (std::size_t start = 0; start < ids.size(); start += per_round) {
      DownloadRound r;
      r.from_cache = from_cache;
      for (std::size_t k = start; k < std::min(ids.size(), start + per_round); ++k) r.objects.push_back(ids[k]);
      rounds.push_back(std::move(r));
    }
  };
  chunk(cached, true);
  chunk(uncached, false);
  return rounds;
}

namespace detail {

inline Seconds download_delay(const WebScenario& w) {
  if (auto v = validate(w); !v.empty()) throw std::invalid_argument(v.front().message());
  const auto& server = w.server_link;
  Seconds total = Rational(2) * server.rtt() + Rational(w.base_bits) / server.bitrate;
  for (const auto& round : plan_rounds(w)) {
    const WebLink& link = round.from_cache ? w.cache->link : server;
    std::int64_t largest = 0;
    for (auto i : round.objects) largest = std::max(largest, w.embedded_objects[i]);
    total += Rational(2) * link.rtt() + Rational(largest) / link.bitrate;
  }
  return total;
}

}  // namespace detail

/// 2 RTT + b/R + sum over rounds of (2 RTT + largest object in round / R).
/// The cache, if configured, is ignored.
inline Seconds web_download_delay(WebScenario w) {
  w.cache.reset();
  return detail::download_delay(w);
}

/// As web_download_delay, but cached objects are fetched over the cache rope.
inline Seconds cached_download_delay(const WebScenario& w) {
  if (!w.cache) throw std::invalid_argument("cached_download_delay requires a cache");
  return detail::download_delay(w);
}

/// Dispatches on whether a cache is configured.
inline Seconds download_delay(const WebScenario& w) { return detail::download_delay(w); }

}  // namespace netrace::analytic
