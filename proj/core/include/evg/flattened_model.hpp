#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evg/event_graph.hpp"

namespace evg {

// A dyadic edge type by node label; undirected types store the labels in
// ascending order.
struct EdgeType {
    std::string source;
    std::string target;

    friend auto operator<=>(const EdgeType&, const EdgeType&) = default;
};

struct Transition {
    EdgeType next;
    double probability = 0.0;
    std::vector<double> iets; // observed inter-event times, in graph order
};

struct FlattenedModel {
    bool directed = true;
    std::vector<EdgeType> states; // sorted
    std::map<EdgeType, std::vector<Transition>> transitions; // each list sorted by `next`

    const std::vector<Transition>* outgoing(const EdgeType& state) const;
};

// Counts edge-type bigrams over the graph's edges. Throws UnsupportedInput
// for non-dyadic sequences.
FlattenedModel fit_flattened(const EventGraph& graph);

enum class SampleMode { probability, waiting_time };

struct SampleResult {
    EventSequence sequence;
    bool truncated = false; // an absorbing state was reached before `length`
};

// Random walk over edge types starting with `start` at t = 0. Throws
// std::invalid_argument if `start` has no outgoing transitions.
SampleResult sample(const FlattenedModel& model, const EdgeType& start, std::size_t length, std::uint64_t seed,
                    SampleMode mode = SampleMode::probability);

std::string to_json(const FlattenedModel& model);
// Throws ValidationError on malformed input.
FlattenedModel model_from_json(const std::string& text);

} // namespace evg
