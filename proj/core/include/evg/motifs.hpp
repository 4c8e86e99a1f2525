#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evg/event_graph.hpp"

namespace evg {

enum class MotifKind { sequential, windowed };

struct MotifInstance {
    std::vector<EventIndex> event_indices; // ascending, i.e. time order
    std::string signature;
    double t_start = 0.0;
    double t_end = 0.0;
    MotifKind kind = MotifKind::sequential;

    friend bool operator==(const MotifInstance&, const MotifInstance&) = default;
};

struct MotifOptions {
    // Largest accepted l; the instance count grows exponentially with it.
    std::size_t max_events = 4;
    // 0 = EVG_THREADS or the hardware concurrency.
    unsigned threads = 0;
};

// l-event subgraphs connected through edges with tau <= dt in which every
// node's events are consecutive (no event of a participating node between
// its first and last motif event is left out). Expects a per-node
// subsequent adjacency graph. Each instance is reported once, rooted at its
// earliest event; output is sorted by index list.
std::vector<MotifInstance> enumerate_sequential(const EventGraph& graph, double dt, std::size_t l,
                                                const MotifOptions& options = {});

// Connected l-event subgraphs spanning at most delta in time, optionally
// restricted to exactly `k` distinct nodes. Expects an adjacency graph built
// with a bound of at least delta.
std::vector<MotifInstance> enumerate_windowed(const EventGraph& graph, double delta, std::size_t l,
                                              std::optional<std::size_t> k = std::nullopt,
                                              const MotifOptions& options = {});

// True when no event of a participating node is skipped between that
// node's first and last event in `events`.
bool is_valid_sequential(const EventSequence& seq, std::span<const EventIndex> events);

// Nodes relabelled 0,1,2,... by first appearance over the time-ordered
// events (sources before targets; interchangeable nodes tie-broken by their
// later occurrences). Directed events render as `s,s→t,t`, undirected ones
// as `a-b-c`; events are joined by ';'.
std::string canonical_signature(const EventSequence& seq, std::span<const EventIndex> events);

enum class CensusKey { signature, node, node_role };

// Counts instances per signature, per participating node label, or per
// (node label, role) where the role lists the node's positions such as
// `s0,t1` (source of event 0, target of event 1; `n` for undirected).
std::map<std::string, std::size_t> motif_census(const EventSequence& seq, std::span<const MotifInstance> instances,
                                                CensusKey key);

// {"indices":[...],"signature":"...","t_start":x,"t_end":y} per line.
void write_instances_jsonl(std::ostream& out, std::span<const MotifInstance> instances);
// key,count
void write_census_csv(std::ostream& out, const std::map<std::string, std::size_t>& census);

} // namespace evg
