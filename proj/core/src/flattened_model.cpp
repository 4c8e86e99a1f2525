#include "evg/flattened_model.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "evg/error.hpp"

namespace evg {

using json = nlohmann::ordered_json;

namespace {

EdgeType edge_type_of(const EventSequence& seq, const HyperEvent& e) {
    if (seq.directed()) return {seq.label(e.sources[0]), seq.label(e.targets[0])};
    std::string a = seq.label(e.sources[0]);
    std::string b = seq.label(e.sources[1]);
    if (b < a) std::swap(a, b);
    return {a, b};
}

json edge_type_json(const EdgeType& t) { return json::array({t.source, t.target}); }

EdgeType edge_type_from(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw ValidationError("edge type must be a pair of labels");
    return {j[0].get<std::string>(), j[1].get<std::string>()};
}

} // namespace

const std::vector<Transition>* FlattenedModel::outgoing(const EdgeType& state) const {
    auto it = transitions.find(state);
    return it == transitions.end() || it->second.empty() ? nullptr : &it->second;
}

FlattenedModel fit_flattened(const EventGraph& graph) {
    const auto& seq = graph.sequence();
    if (!seq.is_dyadic()) throw UnsupportedInput("flattened model fitting needs a dyadic sequence");

    FlattenedModel model;
    model.directed = seq.directed();
    std::vector<EdgeType> types;
    types.reserve(seq.size());
    for (const auto& e : seq.events()) types.push_back(edge_type_of(seq, e));
    model.states = types;
    std::sort(model.states.begin(), model.states.end());
    model.states.erase(std::unique(model.states.begin(), model.states.end()), model.states.end());

    std::map<EdgeType, std::map<EdgeType, std::vector<double>>> tally;
    for (EventIndex i = 0; i < graph.event_count(); ++i)
        for (const Edge& e : graph.out_edges(i)) tally[types[i]][types[e.target]].push_back(e.tau);

    for (auto& [from, row] : tally) {
        std::size_t total = 0;
        for (const auto& [to, iets] : row) total += iets.size();
        auto& out = model.transitions[from];
        for (auto& [to, iets] : row) {
            const double p = static_cast<double>(iets.size()) / static_cast<double>(total);
            out.push_back({to, p, std::move(iets)});
        }
    }
    return model;
}

SampleResult sample(const FlattenedModel& model, const EdgeType& start, std::size_t length, std::uint64_t seed,
                    SampleMode mode) {
    if (!model.outgoing(start)) throw std::invalid_argument("start state " + start.source + "," + start.target +
                                                            " has no outgoing transitions");
    std::mt19937_64 rng(seed);
    std::vector<std::string> labels;
    std::map<std::string, NodeId> ids;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = ids.emplace(label, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };
    auto make_event = [&](const EdgeType& t, double time) {
        const NodeId u = intern(t.source);
        const NodeId v = intern(t.target);
        return model.directed ? HyperEvent::directed(u, v, time) : HyperEvent::undirected(u, v, time);
    };
    auto draw_iet = [&](const std::vector<double>& iets) {
        std::uniform_int_distribution<std::size_t> pick(0, iets.size() - 1);
        return iets[pick(rng)];
    };

    std::vector<HyperEvent> events;
    bool truncated = false;
    EdgeType state = start;
    double t = 0.0;
    if (length > 0) events.push_back(make_event(state, t));
    while (events.size() < length) {
        const auto* out = model.outgoing(state);
        if (!out) {
            truncated = true;
            break;
        }
        std::size_t chosen = 0;
        double gap = 0.0;
        if (mode == SampleMode::probability) {
            std::vector<double> weights;
            for (const auto& tr : *out) weights.push_back(tr.probability);
            std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
            chosen = pick(rng);
            gap = draw_iet((*out)[chosen].iets);
        } else {
            gap = kInfinity;
            for (std::size_t k = 0; k < out->size(); ++k) {
                const double wait = draw_iet((*out)[k].iets);
                if (wait < gap) {
                    gap = wait;
                    chosen = k;
                }
            }
        }
        state = (*out)[chosen].next;
        t += gap;
        events.push_back(make_event(state, t));
    }
    return {EventSequence(std::move(events), model.directed, std::move(labels), OverlapPolicy::ignore), truncated};
}

std::string to_json(const FlattenedModel& model) {
    json j;
    j["directed"] = model.directed;
    j["states"] = json::array();
    for (const auto& s : model.states) j["states"].push_back(edge_type_json(s));
    j["transitions"] = json::array();
    for (const auto& [from, row] : model.transitions)
        for (const auto& tr : row)
            j["transitions"].push_back(
                {{"from", edge_type_json(from)}, {"to", edge_type_json(tr.next)}, {"probability", tr.probability},
                 {"iets", tr.iets}});
    return j.dump(2) + "\n";
}

FlattenedModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model JSON: ") + e.what());
    }
    try {
        FlattenedModel model;
        model.directed = j.at("directed").get<bool>();
        for (const auto& s : j.at("states")) model.states.push_back(edge_type_from(s));
        std::sort(model.states.begin(), model.states.end());
        for (const auto& tr : j.at("transitions")) {
            Transition t{edge_type_from(tr.at("to")), tr.at("probability").get<double>(),
                         tr.at("iets").get<std::vector<double>>()};
            if (t.iets.empty()) throw ValidationError("transition without inter-event times");
            model.transitions[edge_type_from(tr.at("from"))].push_back(std::move(t));
        }
        for (auto& [from, row] : model.transitions)
            std::sort(row.begin(), row.end(), [](const Transition& a, const Transition& b) { return a.next < b.next; });
        return model;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model JSON: ") + e.what());
    }
}

} // namespace evg
