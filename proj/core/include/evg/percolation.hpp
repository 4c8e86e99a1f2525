#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "evg/event_graph.hpp"

namespace evg {

// A weakly connected component of an event graph.
struct Component {
    std::vector<EventIndex> event_indices; // ascending
    std::size_t n_events = 0;
    std::size_t n_nodes = 0;
    double duration = 0.0; // max t - min t over member events
};

// Components ordered by their smallest event index.
std::vector<Component> weak_components(const EventGraph& graph, double max_tau = kInfinity);
std::vector<Component> weak_components(const EventGraphView& view);

// How the susceptibility normalises the sizes s of the non-largest
// components.
enum class ChiMode {
    ratio,       // sum s^2 / sum s
    sum_squares, // sum s^2
};

struct ScanPoint {
    double dt = 0.0;
    double dt_rescaled = 0.0;
    double frac_events = 0.0;
    double frac_nodes = 0.0;
    double frac_duration = 0.0;
    double chi = 0.0;
    double chi_rescaled = 0.0;
};

struct ComponentProfile {
    std::vector<ScanPoint> points; // ascending dt
    double dt90 = 0.0;             // 90th percentile of the edge weights
};

struct ScanOptions {
    // Thresholds to evaluate; empty means every distinct edge weight.
    std::vector<double> grid;
    ChiMode chi_mode = ChiMode::ratio;
    // When nonzero, keep at most this many evenly spaced points.
    std::size_t max_points = 0;
};

// Largest-component fractions and susceptibility for increasing thresholds,
// computed incrementally by merging edges in weight order. Intended for a
// graph built at dt = inf, typically with the per-node subsequent rule.
// Throws std::invalid_argument for an empty grid or a threshold above the
// graph's bound.
ComponentProfile scan(const EventGraph& graph, const ScanOptions& options = {});

// Nearest-rank percentile of the edge weights, q in (0, 100].
double iet_percentile(const EventGraph& graph, double q);

// CSV: dt,dt_rescaled,frac_events,frac_nodes,frac_duration,chi,chi_rescaled
void write_profile_csv(std::ostream& out, const ComponentProfile& profile);

} // namespace evg
