#include "evg/motifs.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "evg/io.hpp"
#include "evg/parallel.hpp"

namespace evg {

namespace {

void check_size(std::size_t l, const MotifOptions& options) {
    if (l < 2) throw std::invalid_argument("motifs need at least 2 events");
    if (l > options.max_events)
        throw std::invalid_argument("motif size " + std::to_string(l) + " exceeds the cap of " +
                                    std::to_string(options.max_events));
}

// Enumerates every connected vertex set of size l in the subgraph induced by
// allowed vertices, each exactly once, with the smallest index as root
// (Wernicke's ESU scheme over the undirected neighbourhood).
class SubgraphEnumerator {
public:
    using Neighbours = std::function<std::vector<EventIndex>(EventIndex)>;
    using Allowed = std::function<bool(EventIndex root, EventIndex v)>;
    using Emit = std::function<void(const std::vector<EventIndex>&)>;

    SubgraphEnumerator(std::size_t l, Neighbours neighbours, Allowed allowed)
        : l_(l), neighbours_(std::move(neighbours)), allowed_(std::move(allowed)) {}

    void run(EventIndex root, const Emit& emit) {
        root_ = root;
        sub_.assign(1, root);
        hoods_.assign(1, neighbours_(root));
        std::vector<EventIndex> ext;
        for (EventIndex u : hoods_[0])
            if (u > root && allowed_(root, u)) ext.push_back(u);
        extend(ext, emit);
    }

private:
    bool in_closed_hood(EventIndex u) const {
        for (std::size_t k = 0; k < sub_.size(); ++k) {
            if (sub_[k] == u) return true;
            if (std::binary_search(hoods_[k].begin(), hoods_[k].end(), u)) return true;
        }
        return false;
    }

    void extend(std::vector<EventIndex> ext, const Emit& emit) {
        if (sub_.size() == l_) {
            std::vector<EventIndex> sorted = sub_;
            std::sort(sorted.begin(), sorted.end());
            emit(sorted);
            return;
        }
        while (!ext.empty()) {
            EventIndex w = ext.back();
            ext.pop_back();
            auto hood = neighbours_(w);
            std::vector<EventIndex> next = ext;
            for (EventIndex u : hood)
                if (u > root_ && allowed_(root_, u) && !in_closed_hood(u) &&
                    std::find(next.begin(), next.end(), u) == next.end())
                    next.push_back(u);
            sub_.push_back(w);
            hoods_.push_back(std::move(hood));
            extend(std::move(next), emit);
            sub_.pop_back();
            hoods_.pop_back();
        }
    }

    std::size_t l_;
    Neighbours neighbours_;
    Allowed allowed_;
    EventIndex root_ = 0;
    std::vector<EventIndex> sub_;
    std::vector<std::vector<EventIndex>> hoods_;
};

template <class Accept>
std::vector<MotifInstance> enumerate(const EventGraph& graph, std::size_t l, const MotifOptions& options,
                                     MotifKind kind, const SubgraphEnumerator::Neighbours& neighbours,
                                     const SubgraphEnumerator::Allowed& allowed, Accept&& accept) {
    const EventSequence& seq = graph.sequence();
    const std::size_t m = graph.event_count();
    std::vector<std::vector<MotifInstance>> per_root(m);
    parallel_for(m, resolve_threads(options.threads), [&](std::size_t r) {
        SubgraphEnumerator esu(l, neighbours, allowed);
        auto& found = per_root[r];
        esu.run(static_cast<EventIndex>(r), [&](const std::vector<EventIndex>& events) {
            if (!accept(events)) return;
            MotifInstance inst;
            inst.event_indices = events;
            inst.signature = canonical_signature(seq, events);
            inst.t_start = seq[events.front()].time;
            inst.t_end = seq[events.back()].time;
            inst.kind = kind;
            found.push_back(std::move(inst));
        });
        std::sort(found.begin(), found.end(), [](const MotifInstance& a, const MotifInstance& b) {
            return a.event_indices < b.event_indices;
        });
    });
    std::vector<MotifInstance> all;
    for (auto& list : per_root) std::move(list.begin(), list.end(), std::back_inserter(all));
    return all;
}

} // namespace

bool is_valid_sequential(const EventSequence& seq, std::span<const EventIndex> events) {
    std::vector<NodeId> nodes;
    for (EventIndex i : events) {
        const HyperEvent& e = seq[i];
        nodes.insert(nodes.end(), e.sources.begin(), e.sources.end());
        nodes.insert(nodes.end(), e.targets.begin(), e.targets.end());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<EventIndex> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end());
    for (NodeId x : nodes) {
        auto list = seq.events_of(x);
        // Positions of the motif's x-events in x's own event list must be
        // contiguous.
        std::size_t first = list.size(), last = 0, count = 0;
        for (std::size_t p = 0; p < list.size(); ++p) {
            if (std::binary_search(sorted.begin(), sorted.end(), list[p])) {
                first = std::min(first, p);
                last = p;
                ++count;
            }
        }
        if (count > 0 && last - first + 1 != count) return false;
    }
    return true;
}

std::string canonical_signature(const EventSequence& seq, std::span<const EventIndex> events) {
    std::vector<EventIndex> order(events.begin(), events.end());
    std::sort(order.begin(), order.end());

    // Occurrence pattern of each node: (position, side) pairs in order.
    std::map<NodeId, std::vector<std::pair<std::size_t, int>>> pattern;
    for (std::size_t p = 0; p < order.size(); ++p) {
        const HyperEvent& e = seq[order[p]];
        for (NodeId v : e.sources) pattern[v].emplace_back(p, 0);
        for (NodeId v : e.targets) pattern[v].emplace_back(p, 1);
    }
    std::vector<std::pair<std::vector<std::pair<std::size_t, int>>, NodeId>> ranked;
    for (auto& [v, occ] : pattern) ranked.emplace_back(occ, v);
    std::sort(ranked.begin(), ranked.end());
    std::map<NodeId, std::size_t> label;
    for (std::size_t r = 0; r < ranked.size(); ++r) label[ranked[r].second] = r;

    auto render = [&](const std::vector<NodeId>& nodes, const char* sep) {
        std::vector<std::size_t> ids;
        for (NodeId v : nodes) ids.push_back(label[v]);
        std::sort(ids.begin(), ids.end());
        std::string s;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (k) s += sep;
            s += std::to_string(ids[k]);
        }
        return s;
    };

    std::string sig;
    for (std::size_t p = 0; p < order.size(); ++p) {
        const HyperEvent& e = seq[order[p]];
        if (p) sig += ';';
        if (seq.directed()) sig += render(e.sources, ",") + "→" + render(e.targets, ",");
        else sig += render(e.sources, "-");
    }
    return sig;
}

std::vector<MotifInstance> enumerate_sequential(const EventGraph& graph, double dt, std::size_t l,
                                                const MotifOptions& options) {
    check_size(l, options);
    auto neighbours = [&graph, dt](EventIndex v) {
        std::vector<EventIndex> hood;
        for (const Edge& e : graph.out_edges(v))
            if (e.tau <= dt) hood.push_back(e.target);
        for (const Edge& e : graph.in_edges(v))
            if (e.tau <= dt) hood.push_back(e.target);
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        return hood;
    };
    auto allowed = [](EventIndex, EventIndex) { return true; };
    const EventSequence& seq = graph.sequence();
    return enumerate(graph, l, options, MotifKind::sequential, neighbours, allowed,
                     [&seq](const std::vector<EventIndex>& events) { return is_valid_sequential(seq, events); });
}

std::vector<MotifInstance> enumerate_windowed(const EventGraph& graph, double delta, std::size_t l,
                                              std::optional<std::size_t> k, const MotifOptions& options) {
    check_size(l, options);
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
    const EventSequence& seq = graph.sequence();
    auto neighbours = [&graph](EventIndex v) {
        std::vector<EventIndex> hood;
        for (const Edge& e : graph.out_edges(v)) hood.push_back(e.target);
        for (const Edge& e : graph.in_edges(v)) hood.push_back(e.target);
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        return hood;
    };
    // The root is the earliest member, so the span bound prunes candidates.
    auto allowed = [&seq, delta](EventIndex root, EventIndex v) { return seq[v].time - seq[root].time <= delta; };
    return enumerate(graph, l, options, MotifKind::windowed, neighbours, allowed,
                     [&seq, k](const std::vector<EventIndex>& events) {
                         if (!k) return true;
                         std::vector<NodeId> nodes;
                         for (EventIndex i : events) {
                             auto n = seq[i].nodes();
                             nodes.insert(nodes.end(), n.begin(), n.end());
                         }
                         std::sort(nodes.begin(), nodes.end());
                         return static_cast<std::size_t>(std::unique(nodes.begin(), nodes.end()) - nodes.begin()) == *k;
                     });
}

std::map<std::string, std::size_t> motif_census(const EventSequence& seq, std::span<const MotifInstance> instances,
                                                CensusKey key) {
    std::map<std::string, std::size_t> table;
    for (const MotifInstance& inst : instances) {
        if (key == CensusKey::signature) {
            ++table[inst.signature];
            continue;
        }
        std::map<NodeId, std::string> roles;
        for (std::size_t p = 0; p < inst.event_indices.size(); ++p) {
            const HyperEvent& e = seq[inst.event_indices[p]];
            const char* src_tag = seq.directed() ? "s" : "n";
            for (NodeId v : e.sources) {
                auto& r = roles[v];
                r += (r.empty() ? "" : ",") + std::string(src_tag) + std::to_string(p);
            }
            for (NodeId v : e.targets) {
                auto& r = roles[v];
                r += (r.empty() ? "" : ",") + std::string("t") + std::to_string(p);
            }
        }
        for (const auto& [v, role] : roles) {
            if (key == CensusKey::node) ++table[seq.label(v)];
            else ++table[seq.label(v) + "|" + role];
        }
    }
    return table;
}

void write_instances_jsonl(std::ostream& out, std::span<const MotifInstance> instances) {
    for (const MotifInstance& inst : instances) {
        nlohmann::ordered_json obj;
        obj["indices"] = inst.event_indices;
        obj["signature"] = inst.signature;
        obj["t_start"] = inst.t_start;
        obj["t_end"] = inst.t_end;
        out << obj.dump() << '\n';
    }
}

void write_census_csv(std::ostream& out, const std::map<std::string, std::size_t>& census) {
    out << "key,count\n";
    for (const auto& [key, count] : census) out << csv_field(key) << ',' << count << '\n';
}

} // namespace evg
