#include "evg/event_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "evg/error.hpp"
#include "evg/format.hpp"

namespace evg {

namespace {

// Nodes whose later events can satisfy the rule's node condition.
std::vector<NodeId> candidate_nodes(const JoiningRule& rule, const HyperEvent& e, bool directed) {
    if (directed && rule.kind() != RuleKind::adjacency) return e.targets;
    return e.nodes();
}

void sort_unique(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.target < b.target; });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return a.target == b.target; }),
                edges.end());
}

// Index of the first event in `list` starting strictly after `time`.
std::size_t first_after(std::span<const EventIndex> list, const EventSequence& seq, double time) {
    auto it = std::upper_bound(list.begin(), list.end(), time,
                               [&](double t, EventIndex k) { return t < seq[k].time; });
    return static_cast<std::size_t>(it - list.begin());
}

std::string node_list(const EventSequence& seq, const std::vector<NodeId>& nodes) {
    std::string s = "[";
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k) s += ',';
        s += seq.label(nodes[k]);
    }
    return s + "]";
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

EventGraph::EventGraph(std::shared_ptr<const EventSequence> sequence, JoiningRule rule,
                       std::vector<std::vector<Edge>> adjacency)
    : sequence_(std::move(sequence)), rule_(rule) {
    const std::size_t m = sequence_->size();
    if (adjacency.size() != m) throw ValidationError("adjacency size does not match the event count");

    offsets_.assign(m + 1, 0);
    std::vector<std::size_t> in_counts(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        sort_unique(adjacency[i]);
        for (const Edge& e : adjacency[i]) {
            if (e.target <= i || e.target >= m)
                throw ValidationError("edge " + std::to_string(i) + "->" + std::to_string(e.target) +
                                      " does not point forward");
            if (!(e.tau > 0.0))
                throw ValidationError("edge " + std::to_string(i) + "->" + std::to_string(e.target) +
                                      " has non-positive tau");
            ++in_counts[e.target + 1];
        }
        offsets_[i + 1] = offsets_[i] + adjacency[i].size();
    }
    edges_.reserve(offsets_.back());
    for (auto& list : adjacency) edges_.insert(edges_.end(), list.begin(), list.end());

    in_offsets_.assign(m + 1, 0);
    for (std::size_t j = 0; j < m; ++j) in_offsets_[j + 1] = in_offsets_[j] + in_counts[j + 1];
    in_edges_.resize(edges_.size());
    std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t i = 0; i < m; ++i)
        for (const Edge& e : out_edges(static_cast<EventIndex>(i)))
            in_edges_[cursor[e.target]++] = Edge{static_cast<EventIndex>(i), e.tau};
}

double EventGraph::tau(EventIndex i, EventIndex j) const {
    auto out = out_edges(i);
    auto it = std::lower_bound(out.begin(), out.end(), j, [](const Edge& e, EventIndex t) { return e.target < t; });
    return (it != out.end() && it->target == j) ? it->tau : 0.0;
}

std::vector<double> EventGraph::weights() const {
    std::vector<double> w;
    w.reserve(edges_.size());
    for (const Edge& e : edges_) w.push_back(e.tau);
    return w;
}

bool EventGraph::same_edges(const EventGraph& other) const {
    return offsets_ == other.offsets_ && edges_ == other.edges_;
}

EventGraph build(std::shared_ptr<const EventSequence> sequence, const JoiningRule& rule) {
    const EventSequence& seq = *sequence;
    const bool directed = seq.directed();
    const std::size_t m = seq.size();
    const JoiningRule base = rule.context_free();
    std::vector<std::vector<Edge>> adjacency(m);

    for (std::size_t i = 0; i < m; ++i) {
        const HyperEvent& e = seq[i];
        auto& out = adjacency[i];

        if (rule.subsequent() == Subsequent::none) {
            // Only events sharing a candidate node can join; scanning each
            // node's later events stops once tau exceeds dt.
            for (NodeId x : candidate_nodes(rule, e, directed)) {
                auto list = seq.events_of(x);
                for (std::size_t k = first_after(list, seq, e.time); k < list.size(); ++k) {
                    const HyperEvent& f = seq[list[k]];
                    if (f.time - e.end() > rule.dt()) break;
                    if (joins(base, e, f, directed)) out.push_back(Edge{list[k], inter_event_time(e, f)});
                }
            }
            continue;
        }

        // Subsequent rules: the next later event of each node, or the
        // earliest of those for the per-event restriction.
        std::vector<EventIndex> next;
        for (NodeId x : e.nodes()) {
            auto list = seq.events_of(x);
            std::size_t k = first_after(list, seq, e.time);
            if (k < list.size()) next.push_back(list[k]);
        }
        if (next.empty()) continue;
        if (rule.subsequent() == Subsequent::per_event) {
            EventIndex first = *std::min_element(next.begin(), next.end());
            next.assign(1, first);
        }
        for (EventIndex j : next) {
            const double tau = inter_event_time(e, seq[j]);
            if (tau > 0.0 && tau <= rule.dt()) out.push_back(Edge{j, tau});
        }
    }
    return EventGraph(std::move(sequence), rule, std::move(adjacency));
}

EventGraph build(const EventSequence& sequence, const JoiningRule& rule) {
    return build(std::make_shared<const EventSequence>(sequence), rule);
}

StreamingBuilder::StreamingBuilder(JoiningRule rule, bool directed, std::vector<std::string> labels)
    : rule_(rule), directed_(directed), labels_(std::move(labels)) {
    if (rule_.kind() != RuleKind::adjacency || rule_.subsequent() == Subsequent::none)
        throw std::invalid_argument("streaming construction needs an adjacency rule with subsequent=event|node");
}

void StreamingBuilder::append(HyperEvent event) {
    if (!events_.empty() && event.time < events_.back().time) throw OrderingError(event.time);
    // Normalise node sets the same way EventSequence does.
    for (auto* set : {&event.sources, &event.targets}) {
        std::sort(set->begin(), set->end());
        set->erase(std::unique(set->begin(), set->end()), set->end());
    }
    if (!directed_) {
        event.sources = event.nodes();
        event.targets.clear();
    }

    const auto j = static_cast<EventIndex>(events_.size());
    const bool per_event = rule_.subsequent() == Subsequent::per_event;
    const auto nodes = event.nodes();
    events_.push_back(std::move(event));
    adjacency_.emplace_back();
    resolved_.push_back(0);
    const HyperEvent& e = events_.back();

    for (NodeId x : nodes) {
        if (x >= pending_.size()) pending_.resize(static_cast<std::size_t>(x) + 1);
        auto& pending = pending_[x];
        std::size_t keep = 0;
        for (EventIndex i : pending) {
            if (resolved_[i]) continue;
            const HyperEvent& prior = events_[i];
            if (prior.time < e.time) {
                // e is the subsequent event of `prior` through node x.
                const double tau = inter_event_time(prior, e);
                auto& out = adjacency_[i];
                if (tau > 0.0 && tau <= rule_.dt() && (out.empty() || out.back().target != j))
                    out.push_back(Edge{j, tau});
                if (per_event) resolved_[i] = 1;
            } else {
                pending[keep++] = i;
            }
        }
        pending.resize(keep);
        pending.push_back(j);
    }
}

EventGraph StreamingBuilder::snapshot() const {
    auto seq = std::make_shared<const EventSequence>(events_, directed_, labels_, OverlapPolicy::ignore);
    return EventGraph(std::move(seq), rule_, adjacency_);
}

EventGraph build_streaming(std::span<const HyperEvent> feed, const JoiningRule& rule, bool directed,
                           std::vector<std::string> labels) {
    StreamingBuilder builder(rule, directed, std::move(labels));
    for (const HyperEvent& e : feed) builder.append(e);
    return builder.snapshot();
}

std::size_t EventGraphView::edge_count() const {
    std::size_t n = 0;
    for (EventIndex i = 0; i < event_count(); ++i)
        for ([[maybe_unused]] const Edge& e : out_edges(i)) ++n;
    return n;
}

EventGraph EventGraphView::materialize() const {
    std::vector<std::vector<Edge>> adjacency(event_count());
    for (EventIndex i = 0; i < event_count(); ++i)
        for (const Edge& e : out_edges(i)) adjacency[i].push_back(e);
    JoiningRule rule = graph_->rule();
    if (max_tau_ > rule.dt_min() && max_tau_ < rule.dt()) rule = rule.with_dt(max_tau_);
    return EventGraph(graph_->sequence_ptr(), rule, std::move(adjacency));
}

EventGraphView threshold_view(const EventGraph& graph, double dt) {
    if (std::isnan(dt) || dt < 0.0) throw std::invalid_argument("threshold must be non-negative");
    if (dt > graph.rule().dt())
        throw std::invalid_argument("threshold " + format_number(dt) + " exceeds the graph's bound " +
                                    format_number(graph.rule().dt()));
    return EventGraphView(graph, dt);
}

void export_graph(std::ostream& out, const EventGraph& graph, ExportFormat format) {
    const EventSequence& seq = graph.sequence();
    if (format == ExportFormat::edge_list) {
        out << "# event_count=" << graph.event_count() << '\n';
        out << "# rule=" << graph.rule().to_string() << '\n';
        for (EventIndex i = 0; i < graph.event_count(); ++i)
            for (const Edge& e : graph.out_edges(i)) out << i << ' ' << e.target << ' ' << format_number(e.tau) << '\n';
    } else {
        out << "digraph event_graph {\n";
        for (EventIndex i = 0; i < graph.event_count(); ++i) {
            const HyperEvent& e = seq[i];
            const std::string label =
                node_list(seq, e.sources) + ":" + node_list(seq, e.targets) + "-" + format_number(e.time);
            out << "  " << i << " [label=\"" << dot_escape(label) << "\"];\n";
        }
        for (EventIndex i = 0; i < graph.event_count(); ++i)
            for (const Edge& e : graph.out_edges(i))
                out << "  " << i << " -> " << e.target << " [label=\"" << format_number(e.tau) << "\"];\n";
        out << "}\n";
    }
    if (!out) throw Error("failed to write graph");
}

EdgeList read_edge_list(std::istream& in) {
    EdgeList list;
    bool have_count = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            body.erase(0, body.find_first_not_of(' '));
            if (body.rfind("event_count=", 0) == 0) {
                list.event_count = std::stoull(body.substr(12));
                list.adjacency.assign(list.event_count, {});
                have_count = true;
            } else if (body.rfind("rule=", 0) == 0) {
                list.rule = body.substr(5);
            }
            continue;
        }
        if (!have_count) throw ParseError(line_no, "edge before the event_count header");
        std::istringstream fields(line);
        std::size_t src = 0, dst = 0;
        std::string tau_text;
        if (!(fields >> src >> dst >> tau_text)) throw ParseError(line_no, "expected 'src dst tau'");
        if (src >= list.event_count || dst >= list.event_count) throw ParseError(line_no, "event index out of range");
        double tau = 0.0;
        try {
            tau = parse_number(tau_text);
        } catch (const std::invalid_argument&) {
            throw ParseError(line_no, "bad tau '" + tau_text + "'");
        }
        list.adjacency[src].push_back(Edge{static_cast<EventIndex>(dst), tau});
    }
    if (!have_count) throw ParseError(line_no, "missing event_count header");
    return list;
}

std::vector<EventIndex> topological_order(const EventGraph& graph) {
    const std::size_t m = graph.event_count();
    std::vector<std::size_t> indegree(m);
    std::vector<EventIndex> order, stack;
    order.reserve(m);
    for (EventIndex j = 0; j < m; ++j) {
        indegree[j] = graph.in_edges(j).size();
        if (indegree[j] == 0) stack.push_back(j);
    }
    std::reverse(stack.begin(), stack.end());
    while (!stack.empty()) {
        EventIndex i = stack.back();
        stack.pop_back();
        order.push_back(i);
        auto out = graph.out_edges(i);
        for (auto it = out.rbegin(); it != out.rend(); ++it)
            if (--indegree[it->target] == 0) stack.push_back(it->target);
    }
    if (order.size() != m) throw ValidationError("event graph contains a cycle");
    return order;
}

std::size_t longest_path_length(const EventGraph& graph) {
    const std::size_t m = graph.event_count();
    std::vector<std::size_t> depth(m, 0);
    std::size_t best = 0;
    for (std::size_t k = m; k-- > 0;) {
        for (const Edge& e : graph.out_edges(static_cast<EventIndex>(k)))
            depth[k] = std::max(depth[k], depth[e.target] + 1);
        best = std::max(best, depth[k]);
    }
    return best;
}

} // namespace evg
