#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "evg/event_graph.hpp"

namespace evg {

struct CutPoint {
    double w = 1.0;
    double frac_cut = 0.0;
    double frac_cut_short = 0.0;
};

struct CutProfile {
    std::vector<CutPoint> points; // in the order the widths were given
};

// Splits [min t, max t] into ceil(1/w) half-open intervals of width
// w * duration (the last one closed) and reports the share of edges whose
// endpoints land in different intervals, and the share that are both cut
// and shorter than the interval width.
CutProfile interval_cut(const EventGraph& graph, std::span<const double> widths, unsigned threads = 0);

// Interval index of time t; exposed for tests.
std::size_t interval_index(double t, double t0, double duration, double w);

// 1, 1/2, ..., 1/2^levels
std::vector<double> halving_widths(unsigned levels);

void write_cut_profile_csv(std::ostream& out, const CutProfile& profile);

} // namespace evg
