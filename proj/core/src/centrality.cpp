#include "evg/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "evg/error.hpp"
#include "evg/format.hpp"
#include "evg/io.hpp"
#include "evg/parallel.hpp"

namespace evg {

void DecayParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be non-negative");
}

EventMatrix::EventMatrix(const EventGraph& graph, double beta, bool weighted)
    : graph_(&graph), beta_(beta), weighted_(weighted) {}

double EventMatrix::entry(EventIndex i, EventIndex j) const {
    if (!graph_->has_edge(i, j)) return 0.0;
    if (!weighted_) return 1.0;
    const auto& seq = graph_->sequence();
    return std::exp(-beta_ * (seq[j].time - seq[i].time));
}

std::vector<double> EventMatrix::multiply(std::span<const double> x) const {
    const auto& seq = graph_->sequence();
    std::vector<double> y(size(), 0.0);
    for (EventIndex i = 0; i < size(); ++i) {
        double acc = 0.0;
        for (const Edge& e : graph_->out_edges(i)) {
            const double w = weighted_ ? std::exp(-beta_ * (seq[e.target].time - seq[i].time)) : 1.0;
            acc += w * x[e.target];
        }
        y[i] = acc;
    }
    return y;
}

Eigen::MatrixXd EventMatrix::dense(std::size_t max_size) const {
    if (size() > max_size) throw CapacityError("dense event matrix requested for " + std::to_string(size()) + " events");
    const auto m = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (EventIndex i = 0; i < size(); ++i)
        for (const Edge& e : graph_->out_edges(i)) a(i, e.target) = entry(i, e.target);
    return a;
}

EventMatrix event_matrix(const EventGraph& graph, const DecayParams& params, bool weighted) {
    params.validate();
    return EventMatrix(graph, params.beta, weighted);
}

std::vector<double> apply_communicability(const EventGraph& graph, const DecayParams& params, bool weighted,
                                          std::span<const double> rhs) {
    params.validate();
    const std::size_t m = graph.event_count();
    if (rhs.size() != m) throw std::invalid_argument("right-hand side length differs from the event count");
    const auto& seq = graph.sequence();
    const double a = params.alpha;
    // b = alpha (rhs + A b); edges point forward so b_j is known for j > i.
    std::vector<double> b(m, 0.0);
    for (std::size_t k = m; k-- > 0;) {
        double acc = 0.0;
        for (const Edge& e : graph.out_edges(static_cast<EventIndex>(k))) {
            const double w = weighted ? std::exp(-params.beta * (seq[e.target].time - seq[k].time)) : 1.0;
            acc += w * b[e.target];
        }
        b[k] = a * (rhs[k] + acc);
    }
    return b;
}

std::vector<double> event_communicability(const EventGraph& graph, const DecayParams& params, bool weighted) {
    std::vector<double> ones(graph.event_count(), 1.0);
    return apply_communicability(graph, params, weighted, ones);
}

std::vector<double> decayed_broadcast(const EventGraph& graph, const DecayParams& params) {
    params.validate();
    const auto& seq = graph.sequence();
    if (seq.empty()) return {};
    const double horizon = params.horizon.value_or(seq.end_time());
    if (horizon < seq.start_time())
        throw std::invalid_argument("horizon " + format_number(horizon) + " precedes the first event");
    std::vector<double> d(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) d[i] = std::exp(-params.beta * (horizon - seq[i].time));
    return apply_communicability(graph, params, true, d);
}

std::vector<double> event_broadcast(const EventGraph& graph, const DecayParams& params, CentralityVariant variant) {
    switch (variant) {
    case CentralityVariant::unweighted: return event_communicability(graph, params, false);
    case CentralityVariant::decayed: return event_communicability(graph, params, true);
    case CentralityVariant::decayed_with_dT: return decayed_broadcast(graph, params);
    }
    return {};
}

CommunicabilityResult node_projections(const EventGraph& graph, const DecayParams& params,
                                       CentralityVariant variant, bool with_q, std::size_t max_dense_nodes) {
    const auto& seq = graph.sequence();
    CommunicabilityResult result;
    result.variant = variant;
    result.event_broadcast = event_broadcast(graph, params, variant);
    result.node_broadcast.assign(seq.node_count(), 0.0);
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (NodeId u : seq[i].sources) result.node_broadcast[u] += result.event_broadcast[i];

    if (!with_q) return result;
    if (!seq.directed() || !seq.is_dyadic())
        throw UnsupportedInput("the node communicability matrix needs a directed dyadic sequence");
    const std::size_t n = seq.node_count();
    if (n > max_dense_nodes)
        throw CapacityError("node communicability matrix for " + std::to_string(n) + " nodes exceeds the limit of " +
                            std::to_string(max_dense_nodes));

    const bool weighted = variant != CentralityVariant::unweighted;
    std::vector<double> terminal(seq.size(), 1.0);
    if (variant == CentralityVariant::decayed_with_dT && !seq.empty()) {
        const double horizon = params.horizon.value_or(seq.end_time());
        for (std::size_t i = 0; i < seq.size(); ++i) terminal[i] = std::exp(-params.beta * (horizon - seq[i].time));
    }

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> rhs(seq.size());
    for (NodeId v = 0; v < n; ++v) {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        bool any = false;
        for (EventIndex e : seq.events_of(v)) {
            if (seq[e].targets[0] == v) {
                rhs[e] = terminal[e];
                any = true;
            }
        }
        if (!any) continue;
        auto column = apply_communicability(graph, params, weighted, rhs);
        for (std::size_t i = 0; i < seq.size(); ++i) q(seq[i].sources[0], v) += column[i];
    }
    result.q = std::move(q);
    return result;
}

std::vector<std::vector<double>> per_node_event_distribution(const EventGraph& graph, const DecayParams& params,
                                                             CentralityVariant variant) {
    const auto& seq = graph.sequence();
    auto b = event_broadcast(graph, params, variant);
    std::vector<std::vector<double>> dist(seq.node_count());
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (NodeId u : seq[i].sources) dist[u].push_back(b[i]);
    for (auto& d : dist) std::sort(d.begin(), d.end());
    return dist;
}

DynamicCommunicability oracle_dynamic_communicability(const EventSequence& seq, const DecayParams& params) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(seq.node_count());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    DynamicCommunicability out{id, Eigen::MatrixXd::Zero(n, n)};

    std::size_t pos = 0;
    double previous_time = 0.0;
    bool first = true;
    while (pos < seq.size()) {
        const double t = seq[pos].time;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (; pos < seq.size() && seq[pos].time == t; ++pos) {
            const HyperEvent& e = seq[pos];
            if (seq.directed()) {
                for (NodeId u : e.sources)
                    for (NodeId v : e.targets) a(u, v) += 1.0;
            } else {
                for (NodeId u : e.sources)
                    for (NodeId v : e.sources)
                        if (u != v) a(u, v) += 1.0;
            }
        }
        Eigen::MatrixXd resolvent_base = id - params.alpha * a;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(resolvent_base);
        if (!lu.isInvertible()) throw DivergenceError("I - alpha A(s) is singular at time " + format_number(t));
        Eigen::MatrixXd resolvent = lu.inverse();
        // For non-negative A the series sum_k (alpha A)^k converges exactly
        // when the inverse is entrywise non-negative.
        if (!resolvent.allFinite() || resolvent.minCoeff() < -1e-12)
            throw DivergenceError("walk series diverges at time " + format_number(t));

        out.q = out.q * resolvent;
        const double decay = first ? 1.0 : std::exp(-params.beta * (t - previous_time));
        out.s = (id + decay * out.s) * resolvent - id;
        previous_time = t;
        first = false;
    }
    return out;
}

std::size_t nilpotency_index(const EventGraph& graph) {
    const std::size_t m = graph.event_count();
    if (m == 0) return 0;
    // Row patterns of A^r: events reachable by walks of exactly r edges.
    std::vector<std::vector<EventIndex>> power(m);
    for (EventIndex i = 0; i < m; ++i) power[i].push_back(i);
    std::size_t r = 0;
    auto empty = [&] {
        return std::all_of(power.begin(), power.end(), [](const auto& row) { return row.empty(); });
    };
    while (!empty()) {
        std::vector<std::vector<EventIndex>> next(m);
        for (EventIndex i = 0; i < m; ++i) {
            for (EventIndex k : power[i])
                for (const Edge& e : graph.out_edges(k)) next[i].push_back(e.target);
            std::sort(next[i].begin(), next[i].end());
            next[i].erase(std::unique(next[i].begin(), next[i].end()), next[i].end());
        }
        power.swap(next);
        ++r;
    }
    return r;
}

std::vector<SweepRow> parameter_sweep(const EventGraph& graph, std::span<const double> alphas,
                                      std::span<const double> betas, CentralityVariant variant,
                                      std::optional<double> horizon, unsigned threads) {
    std::vector<SweepRow> rows;
    for (double a : alphas)
        for (double b : betas) {
            DecayParams p{a, b, horizon};
            p.validate();
            rows.push_back({a, b, {}});
        }
    parallel_for(rows.size(), resolve_threads(threads), [&](std::size_t k) {
        DecayParams p{rows[k].alpha, rows[k].beta, horizon};
        rows[k].node_broadcast = node_projections(graph, p, variant).node_broadcast;
    });
    return rows;
}

void write_event_table(std::ostream& out, const EventSequence& seq, std::span<const double> broadcast) {
    out << "index,t,broadcast\n";
    for (std::size_t i = 0; i < seq.size(); ++i)
        out << i << ',' << format_number(seq[i].time) << ',' << format_number(broadcast[i]) << '\n';
}

void write_node_table(std::ostream& out, const EventSequence& seq, std::span<const double> broadcast) {
    out << "node,broadcast\n";
    for (NodeId v = 0; v < seq.node_count(); ++v)
        out << csv_field(seq.label(v)) << ',' << format_number(broadcast[v]) << '\n';
}

} // namespace evg

namespace evg {

void write_sweep_table(std::ostream& out, const EventSequence& seq, std::span<const SweepRow> rows) {
    out << "alpha,beta,node,broadcast\n";
    for (const SweepRow& row : rows)
        for (NodeId v = 0; v < seq.node_count(); ++v)
            out << format_number(row.alpha) << ',' << format_number(row.beta) << ',' << csv_field(seq.label(v)) << ','
                << format_number(row.node_broadcast[v]) << '\n';
}

} // namespace evg
