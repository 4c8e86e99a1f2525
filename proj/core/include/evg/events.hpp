#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evg {

using NodeId = std::uint32_t;
using EventIndex = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// One timestamped interaction. Dyadic events are the (1,1) case. Undirected
// events keep every participant in `sources` and leave `targets` empty.
struct HyperEvent {
    std::vector<NodeId> sources; // sorted, unique, nonempty
    std::vector<NodeId> targets; // sorted, unique
    double time = 0.0;
    double duration = 0.0;

    static HyperEvent directed(NodeId source, NodeId target, double time, double duration = 0.0);
    static HyperEvent undirected(NodeId a, NodeId b, double time, double duration = 0.0);

    // Union of sources and targets, sorted.
    std::vector<NodeId> nodes() const;
    bool involves(NodeId node) const;
    double end() const { return time + duration; }

    friend bool operator==(const HyperEvent&, const HyperEvent&) = default;
};

// Time from the end of `first` to the start of `second`; zero unless
// `second` starts strictly after `first` ends.
double inter_event_time(const HyperEvent& first, const HyperEvent& second);

enum class OverlapPolicy { error, warn, ignore };

// Time-ordered, index-addressed, immutable sequence of events.
class EventSequence {
public:
    EventSequence() = default;

    // Normalizes node sets, sorts stably by time and validates. `labels`
    // names node ids; when empty, ids are labelled by their decimal value.
    // Throws ValidationError on a broken invariant, or on an overlap when
    // `policy` is OverlapPolicy::error.
    EventSequence(std::vector<HyperEvent> events, bool directed,
                  std::vector<std::string> labels = {},
                  OverlapPolicy policy = OverlapPolicy::warn);

    std::span<const HyperEvent> events() const { return events_; }
    const HyperEvent& operator[](std::size_t i) const { return events_[i]; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    bool directed() const { return directed_; }
    std::size_t node_count() const { return labels_.size(); }
    const std::string& label(NodeId node) const { return labels_.at(node); }
    std::span<const std::string> labels() const { return labels_; }
    std::optional<NodeId> find_node(const std::string& label) const;

    bool strict_overlap_check() const { return strict_overlap_check_; }
    // Number of node-level overlaps seen at construction (0 when ignored).
    std::size_t overlap_violations() const { return overlap_violations_; }

    // Indices of the events a node participates in, ascending.
    std::span<const EventIndex> events_of(NodeId node) const;

    // Earliest and latest start times; 0 for an empty sequence.
    double start_time() const;
    double end_time() const;

    // Every event has exactly one source and one target (directed) or exactly
    // two participants (undirected).
    bool is_dyadic() const;

private:
    std::vector<HyperEvent> events_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> node_offsets_;
    std::vector<EventIndex> node_events_;
    bool directed_ = true;
    bool strict_overlap_check_ = false;
    std::size_t overlap_violations_ = 0;
};

// One unparsed input row. Missing fields are reported with `line`.
struct RawRecord {
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    std::optional<double> time;
    std::optional<double> duration;
    std::size_t line = 0;
};

// Interns labels in order of first appearance and builds a sorted sequence.
EventSequence ingest(const std::vector<RawRecord>& records, bool directed,
                     OverlapPolicy policy = OverlapPolicy::warn);

// Groups contacts that are connected at the same snapshot into one
// hyper-event; a group persisting over consecutive snapshots becomes one
// event with a duration. `snapshot_step` defaults to the smallest gap
// between distinct timestamps.
EventSequence dyadic_to_hyper(const EventSequence& contacts,
                              std::optional<double> snapshot_step = std::nullopt);

} // namespace evg
