#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "evg/events.hpp"
#include "evg/joining.hpp"

namespace evg {

struct Edge {
    EventIndex target; // the other endpoint; the source for in-edges
    double tau;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed acyclic graph over the event indices of a sequence. Every edge
// i -> j has i < j and carries its inter-event time tau > 0. Immutable.
class EventGraph {
public:
    // `adjacency[i]` lists the out-edges of event i in any order; duplicates
    // collapse. Throws ValidationError if an edge goes backwards or has
    // tau <= 0.
    EventGraph(std::shared_ptr<const EventSequence> sequence, JoiningRule rule,
               std::vector<std::vector<Edge>> adjacency);

    std::size_t event_count() const { return offsets_.size() - 1; }
    std::size_t edge_count() const { return edges_.size(); }

    // Sorted by target index.
    std::span<const Edge> out_edges(EventIndex i) const {
        return std::span<const Edge>(edges_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }
    // Sorted by source index; `Edge::target` holds the source.
    std::span<const Edge> in_edges(EventIndex j) const {
        return std::span<const Edge>(in_edges_).subspan(in_offsets_[j], in_offsets_[j + 1] - in_offsets_[j]);
    }

    // tau of i -> j, or 0 when there is no such edge.
    double tau(EventIndex i, EventIndex j) const;
    bool has_edge(EventIndex i, EventIndex j) const { return tau(i, j) > 0.0; }

    const JoiningRule& rule() const { return rule_; }
    const EventSequence& sequence() const { return *sequence_; }
    const std::shared_ptr<const EventSequence>& sequence_ptr() const { return sequence_; }

    // All edge weights in (source, target) order.
    std::vector<double> weights() const;

    // Same vertex count and identical (source, target, tau) edge sets.
    bool same_edges(const EventGraph& other) const;

private:
    std::shared_ptr<const EventSequence> sequence_;
    JoiningRule rule_;
    std::vector<std::size_t> offsets_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> in_offsets_;
    std::vector<Edge> in_edges_;
};

EventGraph build(std::shared_ptr<const EventSequence> sequence, const JoiningRule& rule);
EventGraph build(const EventSequence& sequence, const JoiningRule& rule);

// Incremental construction for subsequent-restricted rules. Each append
// touches only the pending events of the new event's nodes.
class StreamingBuilder {
public:
    // Throws std::invalid_argument unless the rule is an adjacency rule with
    // a subsequent restriction.
    StreamingBuilder(JoiningRule rule, bool directed, std::vector<std::string> labels = {});

    // Throws OrderingError if `event` starts before the previous one.
    void append(HyperEvent event);

    std::size_t size() const { return events_.size(); }

    // The graph over everything appended so far.
    EventGraph snapshot() const;

private:
    JoiningRule rule_;
    bool directed_;
    std::vector<std::string> labels_;
    std::vector<HyperEvent> events_;
    std::vector<std::vector<Edge>> adjacency_;
    // Per node: appended events still waiting for their subsequent event.
    std::vector<std::vector<EventIndex>> pending_;
    std::vector<char> resolved_;
};

EventGraph build_streaming(std::span<const HyperEvent> feed, const JoiningRule& rule, bool directed,
                           std::vector<std::string> labels = {});

// Edges of a graph with tau <= max_tau. Borrows the graph, which must
// outlive the view.
class EventGraphView {
public:
    EventGraphView(const EventGraph& graph, double max_tau) : graph_(&graph), max_tau_(max_tau) {}

    const EventGraph& graph() const { return *graph_; }
    double max_tau() const { return max_tau_; }
    std::size_t event_count() const { return graph_->event_count(); }

    auto out_edges(EventIndex i) const {
        return graph_->out_edges(i) | std::views::filter([t = max_tau_](const Edge& e) { return e.tau <= t; });
    }
    auto in_edges(EventIndex j) const {
        return graph_->in_edges(j) | std::views::filter([t = max_tau_](const Edge& e) { return e.tau <= t; });
    }
    std::size_t edge_count() const;

    // Copies the view into a graph whose rule carries the tighter bound.
    EventGraph materialize() const;

private:
    const EventGraph* graph_;
    double max_tau_;
};

// Throws std::invalid_argument when dt is negative or above the graph's
// own upper bound.
EventGraphView threshold_view(const EventGraph& graph, double dt);

enum class ExportFormat { edge_list, dot };

// Edge list: `# event_count=M` and `# rule=...` header lines, then one
// `src dst tau` line per edge in index order. DOT labels events as
// `[sources]:[targets]-time`.
void export_graph(std::ostream& out, const EventGraph& graph, ExportFormat format);

struct EdgeList {
    std::size_t event_count = 0;
    std::string rule;
    std::vector<std::vector<Edge>> adjacency;
};

EdgeList read_edge_list(std::istream& in);

// Kahn's algorithm; throws ValidationError if a cycle is found.
std::vector<EventIndex> topological_order(const EventGraph& graph);

// Number of edges on the longest directed path (0 for an edgeless graph).
std::size_t longest_path_length(const EventGraph& graph);

} // namespace evg
