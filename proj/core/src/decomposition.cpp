#include "evg/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "evg/error.hpp"
#include "evg/format.hpp"
#include "evg/parallel.hpp"

namespace evg {

namespace {

std::size_t interval_count(double w) {
    return static_cast<std::size_t>(std::ceil(1.0 / w - 1e-12));
}

} // namespace

std::size_t interval_index(double t, double t0, double duration, double w) {
    const std::size_t k = interval_count(w);
    if (duration <= 0.0) return 0;
    const double pos = std::floor((t - t0) / (w * duration));
    if (pos <= 0.0) return 0;
    return std::min(k - 1, static_cast<std::size_t>(pos));
}

CutProfile interval_cut(const EventGraph& graph, std::span<const double> widths, unsigned threads) {
    if (graph.edge_count() == 0) throw ValidationError("interval cut needs an event graph with at least one edge");
    for (double w : widths)
        if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("interval width " + format_number(w) + " is outside (0, 1]");

    const auto& seq = graph.sequence();
    const double t0 = seq.start_time();
    double t1 = t0;
    for (const auto& e : seq.events()) t1 = std::max(t1, e.time);
    const double duration = t1 - t0;
    const double total = static_cast<double>(graph.edge_count());

    CutProfile profile;
    profile.points.resize(widths.size());
    parallel_for(widths.size(), resolve_threads(threads), [&](std::size_t k) {
        const double w = widths[k];
        const double width = w * duration;
        std::size_t cut = 0;
        std::size_t cut_short = 0;
        for (EventIndex i = 0; i < graph.event_count(); ++i) {
            const std::size_t a = interval_index(seq[i].time, t0, duration, w);
            for (const Edge& e : graph.out_edges(i)) {
                if (interval_index(seq[e.target].time, t0, duration, w) == a) continue;
                ++cut;
                if (e.tau < width) ++cut_short;
            }
        }
        profile.points[k] = {w, static_cast<double>(cut) / total, static_cast<double>(cut_short) / total};
    });
    return profile;
}

std::vector<double> halving_widths(unsigned levels) {
    std::vector<double> widths;
    for (unsigned k = 0; k <= levels; ++k) widths.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    return widths;
}

void write_cut_profile_csv(std::ostream& out, const CutProfile& profile) {
    out << "w,frac_cut,frac_cut_short\n";
    for (const auto& p : profile.points)
        out << format_number(p.w) << ',' << format_number(p.frac_cut) << ',' << format_number(p.frac_cut_short) << '\n';
}

} // namespace evg
