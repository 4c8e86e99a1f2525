#include "evg/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "evg/format.hpp"
#include "evg/union_find.hpp"

namespace evg {

namespace {

template <class OutEdges>
std::vector<Component> components_of(const EventSequence& seq, std::size_t m, OutEdges&& out_edges) {
    UnionFind uf(m);
    for (EventIndex i = 0; i < m; ++i)
        for (const Edge& e : out_edges(i)) uf.unite(i, e.target);

    std::vector<std::size_t> slot(m, UnionFind::npos);
    std::vector<Component> comps;
    for (EventIndex i = 0; i < m; ++i) {
        std::size_t root = uf.find(i);
        if (slot[root] == UnionFind::npos) {
            slot[root] = comps.size();
            comps.emplace_back();
        }
        comps[slot[root]].event_indices.push_back(i);
    }
    for (Component& c : comps) {
        std::vector<NodeId> nodes;
        double lo = kInfinity, hi = -kInfinity;
        for (EventIndex i : c.event_indices) {
            const HyperEvent& e = seq[i];
            nodes.insert(nodes.end(), e.sources.begin(), e.sources.end());
            nodes.insert(nodes.end(), e.targets.begin(), e.targets.end());
            lo = std::min(lo, e.time);
            hi = std::max(hi, e.time);
        }
        std::sort(nodes.begin(), nodes.end());
        c.n_nodes = static_cast<std::size_t>(std::unique(nodes.begin(), nodes.end()) - nodes.begin());
        c.n_events = c.event_indices.size();
        c.duration = hi - lo;
    }
    return comps;
}

} // namespace

std::vector<Component> weak_components(const EventGraph& graph, double max_tau) {
    return components_of(graph.sequence(), graph.event_count(), [&](EventIndex i) {
        return graph.out_edges(i) | std::views::filter([max_tau](const Edge& e) { return e.tau <= max_tau; });
    });
}

std::vector<Component> weak_components(const EventGraphView& view) {
    return weak_components(view.graph(), view.max_tau());
}

double iet_percentile(const EventGraph& graph, double q) {
    if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("percentile must lie in (0, 100]");
    std::vector<double> w = graph.weights();
    if (w.empty()) throw std::invalid_argument("percentile of an edgeless graph");
    const auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(w.size())));
    const std::size_t k = std::clamp<std::size_t>(rank, 1, w.size()) - 1;
    std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
    return w[k];
}

ComponentProfile scan(const EventGraph& graph, const ScanOptions& options) {
    const EventSequence& seq = graph.sequence();
    const std::size_t m = graph.event_count();

    struct WeightedEdge {
        double tau;
        EventIndex a, b;
    };
    std::vector<WeightedEdge> edges;
    edges.reserve(graph.edge_count());
    for (EventIndex i = 0; i < m; ++i)
        for (const Edge& e : graph.out_edges(i)) edges.push_back({e.tau, i, e.target});
    std::stable_sort(edges.begin(), edges.end(),
                     [](const WeightedEdge& x, const WeightedEdge& y) { return x.tau < y.tau; });

    std::vector<double> grid = options.grid;
    if (grid.empty()) {
        for (const auto& e : edges)
            if (grid.empty() || grid.back() != e.tau) grid.push_back(e.tau);
    } else {
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    if (grid.empty()) throw std::invalid_argument("scan grid is empty");
    if (grid.front() < 0.0 || std::isnan(grid.front())) throw std::invalid_argument("scan thresholds must be non-negative");
    if (grid.back() > graph.rule().dt())
        throw std::invalid_argument("scan threshold " + format_number(grid.back()) + " exceeds the graph's bound");

    if (options.max_points > 0 && grid.size() > options.max_points) {
        std::vector<double> kept;
        const std::size_t n = grid.size(), k = options.max_points;
        for (std::size_t r = 0; r < k; ++r) {
            std::size_t idx = k == 1 ? n - 1 : r * (n - 1) / (k - 1);
            if (kept.empty() || kept.back() != grid[idx]) kept.push_back(grid[idx]);
        }
        grid = std::move(kept);
    }

    ComponentProfile profile;
    profile.dt90 = edges.empty() ? 0.0 : iet_percentile(graph, 90.0);
    if (m == 0) {
        for (double dt : grid) profile.points.push_back(ScanPoint{dt, 0, 0, 0, 0, 0, 0});
        return profile;
    }

    // Per root: member count, distinct node set, time span.
    UnionFind uf(m);
    std::vector<std::unordered_set<NodeId>> nodes(m);
    std::vector<double> lo(m), hi(m);
    std::size_t max_events = 1, max_nodes = 0;
    double max_duration = 0.0;
    double sum_sq = static_cast<double>(m);
    for (EventIndex i = 0; i < m; ++i) {
        auto own = seq[i].nodes();
        nodes[i].insert(own.begin(), own.end());
        lo[i] = hi[i] = seq[i].time;
        max_nodes = std::max(max_nodes, nodes[i].size());
    }

    const double total_nodes = static_cast<double>(seq.node_count());
    const double total_duration = seq.end_time() - seq.start_time();
    std::size_t next_edge = 0;
    for (double dt : grid) {
        for (; next_edge < edges.size() && edges[next_edge].tau <= dt; ++next_edge) {
            std::size_t ra = uf.find(edges[next_edge].a);
            std::size_t rb = uf.find(edges[next_edge].b);
            if (ra == rb) continue;
            const double sa = static_cast<double>(uf.size_of(ra));
            const double sb = static_cast<double>(uf.size_of(rb));
            const std::size_t root = uf.unite(ra, rb);
            const std::size_t other = root == ra ? rb : ra;
            sum_sq += (sa + sb) * (sa + sb) - sa * sa - sb * sb;

            // Small-to-large merge of the distinct node sets.
            auto& big = nodes[root];
            auto& small = nodes[other];
            if (big.size() < small.size()) big.swap(small);
            big.insert(small.begin(), small.end());
            std::unordered_set<NodeId>().swap(small);

            lo[root] = std::min(lo[root], lo[other]);
            hi[root] = std::max(hi[root], hi[other]);
            max_events = std::max(max_events, uf.size_of(root));
            max_nodes = std::max(max_nodes, big.size());
            max_duration = std::max(max_duration, hi[root] - lo[root]);
        }

        ScanPoint p;
        p.dt = dt;
        p.dt_rescaled = profile.dt90 > 0.0 ? dt / profile.dt90 : 0.0;
        p.frac_events = static_cast<double>(max_events) / static_cast<double>(m);
        p.frac_nodes = total_nodes > 0.0 ? static_cast<double>(max_nodes) / total_nodes : 0.0;
        p.frac_duration = total_duration > 0.0 ? max_duration / total_duration : 0.0;
        const double s_max = static_cast<double>(max_events);
        const double rest_sq = sum_sq - s_max * s_max;
        const double rest = static_cast<double>(m) - s_max;
        if (options.chi_mode == ChiMode::sum_squares) p.chi = rest_sq;
        else p.chi = rest > 0.0 ? rest_sq / rest : 0.0;
        profile.points.push_back(p);
    }

    double chi_max = 0.0;
    for (const auto& p : profile.points) chi_max = std::max(chi_max, p.chi);
    for (auto& p : profile.points) p.chi_rescaled = chi_max > 0.0 ? p.chi / chi_max : 0.0;
    return profile;
}

void write_profile_csv(std::ostream& out, const ComponentProfile& profile) {
    out << "dt,dt_rescaled,frac_events,frac_nodes,frac_duration,chi,chi_rescaled\n";
    for (const auto& p : profile.points) {
        out << format_number(p.dt) << ',' << format_number(p.dt_rescaled) << ',' << format_number(p.frac_events)
            << ',' << format_number(p.frac_nodes) << ',' << format_number(p.frac_duration) << ','
            << format_number(p.chi) << ',' << format_number(p.chi_rescaled) << '\n';
    }
}

} // namespace evg
