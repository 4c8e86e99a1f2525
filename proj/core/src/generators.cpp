#include "evg/generators.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace evg {

namespace {

std::vector<std::string> decimal_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

// Uniform node other than `excluded`.
NodeId other_node(std::mt19937_64& rng, std::size_t n, NodeId excluded) {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 2));
    NodeId v = pick(rng);
    return v >= excluded ? v + 1 : v;
}

} // namespace

EventSequence gen_random_complete(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random-complete needs at least 2 nodes");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> source_dist(0, static_cast<NodeId>(n - 1));
    std::exponential_distribution<double> gap(1.0);
    std::vector<HyperEvent> events;
    events.reserve(m);
    double t = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        t += gap(rng);
        const NodeId u = source_dist(rng);
        const NodeId v = other_node(rng, n, u);
        events.push_back(HyperEvent::directed(u, v, t));
    }
    return EventSequence(std::move(events), true, decimal_labels(n), OverlapPolicy::ignore);
}

EventSequence gen_ustar(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("u* generator needs at least 3 nodes");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> source_dist(0, static_cast<NodeId>(n - 1));
    std::vector<HyperEvent> events;
    events.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        NodeId u = 0;
        if (!events.empty() && events.back().sources[0] == kUStar)
            u = events.back().targets[0];
        else
            u = source_dist(rng);
        const NodeId v = other_node(rng, n, u);
        events.push_back(HyperEvent::directed(u, v, static_cast<double>(k + 1)));
    }
    return EventSequence(std::move(events), true, decimal_labels(n), OverlapPolicy::ignore);
}

} // namespace evg
