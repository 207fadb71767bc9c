#pragma once

// Deterministic discrete-event simulation of the student-modeled protocols.
//
// Two engines live here:
//  * a store-and-forward network engine that moves units (bits or whole
//    packets) along fixed paths, used for the linear chain and the SDN race;
//  * a client/server process model for the non-persistent HTTP download.

#include "netrace/core.hpp"
#include "netrace/timeline.hpp"

#include <compare>
#include <functional>
#include <memory>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace netrace::des {

/// Time-ordered action queue. Actions scheduled for the same instant run in
/// scheduling order; after an instant is drained the settle hook runs, and it
/// may schedule more work for that same instant.
class Scheduler {
 public:
  using Action = std::function<void()>;

  void at(Seconds time, Action action) {
    if (time < now_) throw std::logic_error("cannot schedule into the past");
    queue_.push(Entry{time, next_seq_++, std::move(action)});
  }

  Seconds now() const { return now_; }

  void run(const std::function<void(Seconds)>& on_instant_settled = {}) {
    while (!queue_.empty()) {
      now_ = queue_.top().time;
      while (!queue_.empty() && queue_.top().time == now_) {
        // copy out before pop: the action may push
        Action action = queue_.top().action;
        queue_.pop();
        action();
      }
      if (on_instant_settled) on_instant_settled(now_);
    }
  }

 private:
  struct Entry {
    Seconds time;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  Seconds now_{0};
  std::uint64_t next_seq_ = 0;
};

// ---------------------------------------------------------------------------
// store-and-forward network engine

struct Link {
  std::string from;
  std::string to;
  LinkSpec spec;
};

struct Topology {
  std::vector<std::string> nodes;
  std::vector<Link> links;
};

/// A traffic flow: `units` units leave `path.front()` and must reach
/// `path.back()`. Consecutive groups of `units_per_packet` units form one
/// packet that a node must hold completely before forwarding any of it.
struct Flow {
  std::string name;  // also the source identifier used for tie-breaks
  std::vector<std::string> path;
  std::int64_t units = 1;
  std::int64_t units_per_packet = 1;
  // Earliest time the node may forward this flow; absent means time zero.
  std::map<std::string, Seconds> release_at;
};

struct NetworkRun {
  Timeline timeline;
  std::map<std::string, Seconds> flow_completion;
};

namespace detail {

inline std::string pad(std::int64_t value, std::int64_t max_value) {
  std::string digits = std::to_string(value);
  const std::size_t width = std::to_string(std::max<std::int64_t>(max_value, 1)).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

inline std::string link_name(const std::string& from, const std::string& to) { return from + "->" + to; }

}  // namespace detail

/// Simulates every unit of every flow across the network.
///
/// Store-and-forward: a unit becomes eligible at the next node at its
/// physical arrival, plus 1/R under the full-arrival convention. Cut-through:
/// eligible at physical arrival. A packet enters the FIFO of its output link
/// once all its units are eligible and its flow is released at that node.
/// Each link starts at most one unit per 1/R. Simultaneous FIFO entries are
/// ordered by flow name, then unit sequence number.
///
/// Completion of a flow is the instant its last unit counts as received at
/// the destination under the same rule.
inline NetworkRun simulate_packet_flow_network(const Topology& topology, const std::vector<Flow>& flows,
                                               const Switching& switching, std::string title = "network") {
  std::set<std::string> known(topology.nodes.begin(), topology.nodes.end());
  if (known.size() != topology.nodes.size()) throw std::invalid_argument("duplicate node name");

  std::map<std::pair<std::string, std::string>, std::size_t> link_index;
  for (std::size_t i = 0; i < topology.links.size(); ++i) {
    const auto& l = topology.links[i];
    if (!known.contains(l.from) || !known.contains(l.to))
      throw std::invalid_argument("link " + detail::link_name(l.from, l.to) + " references an unknown node");
    if (auto v = validate(l.spec); !v.empty())
      throw std::invalid_argument("link " + detail::link_name(l.from, l.to) + ": " + v.front().message());
    link_index[{l.from, l.to}] = i;
  }

  std::set<std::string> flow_names;
  for (const auto& f : flows) {
    if (!flow_names.insert(f.name).second) throw std::invalid_argument("duplicate flow name " + f.name);
    if (f.units < 1 || f.units_per_packet < 1 || f.units % f.units_per_packet != 0)
      throw std::invalid_argument("flow " + f.name + ": units_per_packet must divide units");
    if (f.path.size() < 2) throw std::invalid_argument("flow " + f.name + ": path needs at least two nodes");
    std::set<std::string> visited;
    for (std::size_t h = 0; h < f.path.size(); ++h) {
      if (!known.contains(f.path[h])) throw std::invalid_argument("flow " + f.name + ": unknown node " + f.path[h]);
      if (!visited.insert(f.path[h]).second)
        throw std::invalid_argument("flow " + f.name + ": cyclic path revisits " + f.path[h]);
      if (h + 1 < f.path.size() && !link_index.contains({f.path[h], f.path[h + 1]}))
        throw std::invalid_argument("flow " + f.name + ": no link " + detail::link_name(f.path[h], f.path[h + 1]));
    }
  }

  const bool cut_through = std::holds_alternative<CutThrough>(switching);
  const bool full_arrival =
      !cut_through && std::get<StoreAndForward>(switching).convention == ArrivalConvention::FullArrival;

  struct QueueKey {
    Seconds entered;
    std::string flow;
    std::int64_t seq;
    std::size_t flow_index;
    auto operator<=>(const QueueKey& o) const {
      if (entered != o.entered) return entered < o.entered ? std::strong_ordering::less : std::strong_ordering::greater;
      if (auto c = flow <=> o.flow; c != 0) return c;
      return seq <=> o.seq;
    }
    bool operator==(const QueueKey& o) const { return entered == o.entered && flow == o.flow && seq == o.seq; }
  };
  struct LinkState {
    Seconds next_free{0};
    std::set<QueueKey> fifo;
  };
  std::vector<LinkState> links(topology.links.size());

  // eligible units per (flow, packet, hop)
  std::map<std::tuple<std::size_t, std::int64_t, std::size_t>, std::int64_t> assembled;
  // hop index each unit is currently at
  std::vector<std::vector<std::size_t>> hop_of(flows.size());
  for (std::size_t fi = 0; fi < flows.size(); ++fi) hop_of[fi].assign(static_cast<std::size_t>(flows[fi].units), 0);

  NetworkRun run;
  run.timeline.title = std::move(title);
  auto& events = run.timeline.events;
  Scheduler sched;

  auto actor = [&](std::size_t fi, std::int64_t seq) {
    return flows[fi].name + "." + detail::pad(seq, flows[fi].units - 1);
  };

  auto enqueue_packet = [&](std::size_t fi, std::int64_t packet, std::size_t hop) {
    const auto& f = flows[fi];
    const auto li = link_index.at({f.path[hop], f.path[hop + 1]});
    for (std::int64_t k = 0; k < f.units_per_packet; ++k) {
      const std::int64_t seq = packet * f.units_per_packet + k;
      links[li].fifo.insert(QueueKey{sched.now(), f.name, seq, fi});
    }
  };

  // Packet fully held at `hop`: forward now or at the flow's release time.
  auto packet_ready = [&](std::size_t fi, std::int64_t packet, std::size_t hop) {
    const auto& f = flows[fi];
    Seconds release{0};
    if (auto it = f.release_at.find(f.path[hop]); it != f.release_at.end()) release = it->second;
    if (release > sched.now())
      sched.at(release, [&, fi, packet, hop] { enqueue_packet(fi, packet, hop); });
    else
      enqueue_packet(fi, packet, hop);
  };

  auto unit_eligible = [&](std::size_t fi, std::int64_t seq, std::size_t hop) {
    const auto& f = flows[fi];
    hop_of[fi][static_cast<std::size_t>(seq)] = hop;
    if (hop + 1 == f.path.size()) {
      auto& done = run.flow_completion[f.name];
      done = std::max(done, sched.now());
      return;
    }
    const std::int64_t packet = seq / f.units_per_packet;
    if (++assembled[{fi, packet, hop}] == f.units_per_packet) packet_ready(fi, packet, hop);
  };

  auto service_links = [&](Seconds now) {
    for (std::size_t li = 0; li < links.size(); ++li) {
      auto& state = links[li];
      if (state.fifo.empty() || state.next_free > now) continue;
      const QueueKey head = *state.fifo.begin();
      state.fifo.erase(state.fifo.begin());
      const auto& link = topology.links[li];
      const auto fi = head.flow_index;
      const auto seq = head.seq;
      const auto where = detail::link_name(link.from, link.to);
      const Seconds tx = link.spec.bit_time();
      const Seconds arrive = now + link.spec.propagation_delay();
      const std::size_t next_hop = hop_of[fi][static_cast<std::size_t>(seq)] + 1;
      const std::string who = actor(fi, seq);
      const std::string detail =
          flows[fi].units_per_packet > 1 ? "packet " + std::to_string(seq / flows[fi].units_per_packet) : "";

      events.push_back({now, who, EventKind::TxStart, where, detail});
      state.next_free = now + tx;
      sched.at(state.next_free, [] {});  // wake the link when it frees up
      sched.at(now + tx, [&, who, where, detail, t = now + tx] {
        events.push_back({t, who, EventKind::TxEnd, where, detail});
      });
      sched.at(arrive, [&, fi, seq, next_hop, who, where, detail] {
        events.push_back({sched.now(), who, EventKind::PhysicalArrival, where, detail});
        if (!full_arrival) unit_eligible(fi, seq, next_hop);
      });
      if (full_arrival) {
        sched.at(arrive + tx, [&, fi, seq, next_hop, who, where, detail] {
          events.push_back({sched.now(), who, EventKind::FullArrival, where, detail});
          unit_eligible(fi, seq, next_hop);
        });
      }
    }
  };

  // every unit starts eligible at its source at time zero
  sched.at(Seconds{0}, [&] {
    for (std::size_t fi = 0; fi < flows.size(); ++fi)
      for (std::int64_t seq = 0; seq < flows[fi].units; ++seq) unit_eligible(fi, seq, 0);
  });
  sched.run(service_links);

  for (const auto& [name, t] : run.flow_completion) run.timeline.completion_time = std::max(run.timeline.completion_time, t);
  run.timeline.normalize();
  return run;
}

inline std::vector<std::string> chain_node_names(std::int64_t intermediate_nodes) {
  std::vector<std::string> names{"A"};
  for (std::int64_t i = 1; i <= intermediate_nodes; ++i) names.push_back("n" + std::to_string(i));
  names.push_back("B");
  return names;
}

/// Bit-level run of the linear chain race: M bit-students grouped into
/// packets of P, A -> n1 -> ... -> nN -> B.
inline Timeline simulate_chain(const ChainScenario& sc) {
  if (auto v = validate(sc); !v.empty()) throw std::invalid_argument(v.front().message());
  Topology topo;
  topo.nodes = chain_node_names(sc.intermediate_nodes);
  for (std::size_t i = 0; i + 1 < topo.nodes.size(); ++i) topo.links.push_back({topo.nodes[i], topo.nodes[i + 1], sc.link});
  Flow flow{"bit", topo.nodes, sc.message_bits, sc.packet_bits, {}};
  const std::string title = sc.packet_bits == sc.message_bits
                                ? "message switching, M=" + std::to_string(sc.message_bits)
                                : "packet switching, M=" + std::to_string(sc.message_bits) +
                                      " P=" + std::to_string(sc.packet_bits);
  return simulate_packet_flow_network(topo, {flow}, StoreAndForward{sc.convention}, title).timeline;
}

// ---------------------------------------------------------------------------
// web page download

/// Runs the non-persistent HTTP choreography: for every fetch a TCP runner
/// walks to the content holder and back, then an HTTP request runner walks
/// there, and the holder dispatches the object's bit-students at rate R.
/// The client waits for every fetch of a round before opening the next one.
inline Timeline simulate_web(const WebScenario& w) {
  if (auto v = validate(w); !v.empty()) throw std::invalid_argument(v.front().message());

  Scheduler sched;
  Timeline tl;
  tl.title = "web page download";
  auto& events = tl.events;

  struct Fetch {
    std::string name;
    std::int64_t bits;
    bool from_cache;
  };

  // pending objects, split by holder; cached objects are fetched first
  std::vector<Fetch> cached;
  std::vector<Fetch> server;
  for (std::size_t i = 0; i < w.embedded_objects.size(); ++i)
    (w.is_cached(i) ? cached : server).push_back({"o" + std::to_string(i + 1), w.embedded_objects[i], w.is_cached(i)});

  std::size_t outstanding = 0;
  int round = 0;
  std::function<void()> next_round;

  auto start_fetch = [&](const Fetch& f, int conn) {
    const WebLink& rope = f.from_cache ? w.cache->link : w.server_link;
    const std::string holder = f.from_cache ? "cache" : "server";
    const std::string up = "client->" + holder;
    const std::string down = holder + "->client";
    const Seconds one_way = rope.length / rope.runner_speed;
    const Seconds bit_time = Rational(1) / rope.bitrate;
    const std::string tag = "r" + std::to_string(round) + ".c" + std::to_string(conn);
    const std::string tcp = "tcp." + tag;
    const std::string http = "http." + tag;
    const Seconds t0 = sched.now();

    events.push_back({t0, tcp, EventKind::QueryDispatch, up, "SYN for " + f.name});
    sched.at(t0 + one_way, [&, tcp, up] { events.push_back({sched.now(), tcp, EventKind::PhysicalArrival, up, "SYN"}); });
    sched.at(t0 + Rational(2) * one_way, [&, f, tcp, http, up, down, one_way, bit_time, holder] {
      const Seconds t = sched.now();
      events.push_back({t, tcp, EventKind::QueryReturn, down, "SYNACK"});
      events.push_back({t, tcp, EventKind::Connected, "client<->" + holder, f.name});
      events.push_back({t, http, EventKind::QueryDispatch, up, "GET " + f.name});
      sched.at(t + one_way, [&, f, http, up, down, one_way, bit_time] {
        events.push_back({sched.now(), http, EventKind::PhysicalArrival, up, "GET " + f.name});
        auto remaining = std::make_shared<std::int64_t>(f.bits);
        for (std::int64_t b = 0; b < f.bits; ++b) {
          const Seconds start = sched.now() + Rational(b) * bit_time;
          const std::string who = f.name + ".b" + detail::pad(b, f.bits - 1);
          sched.at(start, [&, who, down, one_way, bit_time, remaining] {
            const Seconds ts = sched.now();
            events.push_back({ts, who, EventKind::TxStart, down, ""});
            sched.at(ts + bit_time, [&, who, down] { events.push_back({sched.now(), who, EventKind::TxEnd, down, ""}); });
            sched.at(ts + one_way, [&, who, down] {
              events.push_back({sched.now(), who, EventKind::PhysicalArrival, down, ""});
            });
            sched.at(ts + one_way + bit_time, [&, who, down, remaining] {
              events.push_back({sched.now(), who, EventKind::FullArrival, down, ""});
              if (--*remaining == 0 && --outstanding == 0) next_round();
            });
          });
        }
      });
    });
  };

  next_round = [&] {
    tl.completion_time = sched.now();
    auto& pool = !cached.empty() ? cached : server;
    if (pool.empty()) return;
    ++round;
    const auto take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(w.parallel_connections));
    std::vector<Fetch> batch(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    outstanding = batch.size();
    for (std::size_t c = 0; c < batch.size(); ++c) start_fetch(batch[c], static_cast<int>(c + 1));
  };

  // round 0: the base page, always from the server
  outstanding = 1;
  sched.at(Seconds{0}, [&] { start_fetch({"base", w.base_bits, false}, 1); });
  sched.run();

  tl.normalize();
  return tl;
}

}  // namespace netrace::des
