#include "evg/events.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "evg/error.hpp"
#include "evg/format.hpp"
#include "evg/union_find.hpp"

namespace evg {

namespace {

void normalize(std::vector<NodeId>& nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

bool intersects(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i;
        else ++j;
    }
    return false;
}

} // namespace

HyperEvent HyperEvent::directed(NodeId source, NodeId target, double time, double duration) {
    return HyperEvent{{source}, {target}, time, duration};
}

HyperEvent HyperEvent::undirected(NodeId a, NodeId b, double time, double duration) {
    HyperEvent e{{a, b}, {}, time, duration};
    normalize(e.sources);
    return e;
}

std::vector<NodeId> HyperEvent::nodes() const {
    std::vector<NodeId> all;
    all.reserve(sources.size() + targets.size());
    std::merge(sources.begin(), sources.end(), targets.begin(), targets.end(), std::back_inserter(all));
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

bool HyperEvent::involves(NodeId node) const {
    return std::binary_search(sources.begin(), sources.end(), node) ||
           std::binary_search(targets.begin(), targets.end(), node);
}

double inter_event_time(const HyperEvent& first, const HyperEvent& second) {
    const double end = first.time + first.duration;
    return second.time > end ? second.time - end : 0.0;
}

EventSequence::EventSequence(std::vector<HyperEvent> events, bool directed,
                             std::vector<std::string> labels, OverlapPolicy policy)
    : events_(std::move(events)), labels_(std::move(labels)), directed_(directed),
      strict_overlap_check_(policy == OverlapPolicy::error) {
    NodeId max_node = 0;
    bool any_node = false;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        HyperEvent& e = events_[i];
        normalize(e.sources);
        normalize(e.targets);
        if (!directed_) {
            e.sources = e.nodes();
            e.targets.clear();
        }
        if (e.sources.empty())
            throw ValidationError("event " + std::to_string(i) + " has no source nodes");
        if (directed_ && intersects(e.sources, e.targets))
            throw ValidationError("event " + std::to_string(i) + " has a node that is both source and target");
        if (!std::isfinite(e.time))
            throw ValidationError("event " + std::to_string(i) + " has a non-finite time");
        if (!(e.duration >= 0.0) || !std::isfinite(e.duration))
            throw ValidationError("event " + std::to_string(i) + " has a negative or non-finite duration");
        for (const auto* set : {&e.sources, &e.targets}) {
            if (!set->empty()) {
                max_node = std::max(max_node, set->back());
                any_node = true;
            }
        }
    }

    if (labels_.empty()) {
        const std::size_t n = any_node ? static_cast<std::size_t>(max_node) + 1 : 0;
        labels_.reserve(n);
        for (std::size_t v = 0; v < n; ++v) labels_.push_back(std::to_string(v));
    } else if (any_node && max_node >= labels_.size()) {
        throw ValidationError("node id " + std::to_string(max_node) + " has no label");
    }

    std::stable_sort(events_.begin(), events_.end(),
                     [](const HyperEvent& a, const HyperEvent& b) { return a.time < b.time; });

    // Per-node event lists in CSR form.
    std::vector<std::size_t> counts(labels_.size() + 1, 0);
    for (const auto& e : events_) {
        for (NodeId v : e.sources) ++counts[v + 1];
        for (NodeId v : e.targets) ++counts[v + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    node_offsets_ = counts;
    node_events_.resize(node_offsets_.back());
    std::vector<std::size_t> cursor(node_offsets_.begin(), node_offsets_.end() - 1);
    for (std::size_t i = 0; i < events_.size(); ++i) {
        for (const auto* set : {&events_[i].sources, &events_[i].targets})
            for (NodeId v : *set) node_events_[cursor[v]++] = static_cast<EventIndex>(i);
    }

    if (policy == OverlapPolicy::ignore) return;

    // A node may take part in one event at a time: closed active intervals
    // [t, t + duration] of a node's events must not intersect.
    std::string first_report;
    for (NodeId v = 0; v < labels_.size(); ++v) {
        auto list = events_of(v);
        double latest_end = -kInfinity;
        double latest_start = 0.0;
        for (EventIndex idx : list) {
            const HyperEvent& e = events_[idx];
            if (e.time <= latest_end) {
                ++overlap_violations_;
                if (first_report.empty())
                    first_report = "node '" + labels_[v] + "' is active in overlapping events at times " +
                                   format_number(latest_start) + " and " + format_number(e.time);
            }
            if (e.end() > latest_end) {
                latest_end = e.end();
                latest_start = e.time;
            }
        }
    }
    if (overlap_violations_ > 0) {
        if (policy == OverlapPolicy::error) throw ValidationError(first_report);
        std::cerr << "warning: " << overlap_violations_ << " overlapping event(s); first: " << first_report << '\n';
    }
}

std::optional<NodeId> EventSequence::find_node(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<NodeId>(it - labels_.begin());
}

std::span<const EventIndex> EventSequence::events_of(NodeId node) const {
    if (node >= labels_.size()) return {};
    return std::span<const EventIndex>(node_events_).subspan(
        node_offsets_[node], node_offsets_[node + 1] - node_offsets_[node]);
}

double EventSequence::start_time() const { return events_.empty() ? 0.0 : events_.front().time; }
double EventSequence::end_time() const { return events_.empty() ? 0.0 : events_.back().time; }

bool EventSequence::is_dyadic() const {
    return std::all_of(events_.begin(), events_.end(), [&](const HyperEvent& e) {
        return directed_ ? (e.sources.size() == 1 && e.targets.size() == 1) : e.sources.size() == 2;
    });
}

EventSequence ingest(const std::vector<RawRecord>& records, bool directed, OverlapPolicy policy) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::vector<HyperEvent> events;
    events.reserve(records.size());
    for (const RawRecord& r : records) {
        if (r.sources.empty()) throw ParseError(r.line, "missing source");
        if (!r.time) throw ParseError(r.line, "missing time");
        HyperEvent e;
        for (const auto& s : r.sources) {
            if (s.empty()) throw ParseError(r.line, "empty source label");
            e.sources.push_back(intern(s));
        }
        for (const auto& t : r.targets) {
            if (t.empty()) throw ParseError(r.line, "empty target label");
            e.targets.push_back(intern(t));
        }
        e.time = *r.time;
        e.duration = r.duration.value_or(0.0);
        if (e.duration < 0.0) throw ParseError(r.line, "negative duration");
        events.push_back(std::move(e));
    }
    return EventSequence(std::move(events), directed, std::move(labels), policy);
}

EventSequence dyadic_to_hyper(const EventSequence& contacts, std::optional<double> snapshot_step) {
    if (contacts.directed())
        throw UnsupportedInput("dyadic_to_hyper expects undirected contacts");

    const auto events = contacts.events();
    std::vector<double> times;
    for (const auto& e : events)
        if (times.empty() || times.back() != e.time) times.push_back(e.time);

    double step = kInfinity;
    if (snapshot_step) {
        if (!(*snapshot_step > 0.0)) throw std::invalid_argument("snapshot step must be positive");
        step = *snapshot_step;
    } else {
        for (std::size_t i = 1; i < times.size(); ++i) step = std::min(step, times[i] - times[i - 1]);
    }
    const double tolerance = std::isfinite(step) ? step * 1e-9 : 0.0;

    struct Active {
        double start;
        double last;
    };
    std::map<std::vector<NodeId>, Active> active;
    std::vector<HyperEvent> out;
    auto close = [&](const std::vector<NodeId>& group, const Active& a) {
        out.push_back(HyperEvent{group, {}, a.start, a.last - a.start});
    };

    std::size_t pos = 0;
    for (double t : times) {
        const std::size_t first = pos;
        std::vector<NodeId> touched;
        for (; pos < events.size() && events[pos].time == t; ++pos)
            touched.insert(touched.end(), events[pos].sources.begin(), events[pos].sources.end());
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

        auto local = [&](NodeId v) {
            return static_cast<std::size_t>(std::lower_bound(touched.begin(), touched.end(), v) - touched.begin());
        };
        UnionFind uf(touched.size());
        for (std::size_t k = first; k < pos; ++k) {
            const auto& members = events[k].sources;
            for (std::size_t j = 1; j < members.size(); ++j) uf.unite(local(members[0]), local(members[j]));
        }

        std::map<std::size_t, std::vector<NodeId>> by_root;
        for (std::size_t k = 0; k < touched.size(); ++k) by_root[uf.find(k)].push_back(touched[k]);
        std::map<std::vector<NodeId>, Active> next;
        for (auto& [root, group] : by_root) {
            auto it = active.find(group);
            if (it != active.end() && t - it->second.last <= step + tolerance) {
                next.emplace(group, Active{it->second.start, t});
                active.erase(it);
            } else {
                next.emplace(group, Active{t, t});
            }
        }
        for (const auto& [group, a] : active) close(group, a);
        active = std::move(next);
    }
    for (const auto& [group, a] : active) close(group, a);

    std::sort(out.begin(), out.end(), [](const HyperEvent& a, const HyperEvent& b) {
        return a.time != b.time ? a.time < b.time : a.sources < b.sources;
    });
    std::vector<std::string> labels(contacts.labels().begin(), contacts.labels().end());
    return EventSequence(std::move(out), false, std::move(labels), OverlapPolicy::ignore);
}

} // namespace evg
