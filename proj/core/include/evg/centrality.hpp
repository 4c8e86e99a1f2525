#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evg/event_graph.hpp"

namespace evg {

struct DecayParams {
    double alpha = 0.5; // weight per traversed event, > 0
    double beta = 0.0;  // decay rate per unit time, >= 0
    // Horizon T for the terminal-decay vector; defaults to the last event time.
    std::optional<double> horizon;

    // Throws std::invalid_argument.
    void validate() const;
};

enum class CentralityVariant {
    unweighted,      // M 1
    decayed,         // M* 1
    decayed_with_dT, // M* d(T)
};

// Implicit adjacency of an event graph: 1 per edge, or exp(-beta (t_j - t_i))
// when weighted. Never stored densely except on request.
class EventMatrix {
public:
    EventMatrix(const EventGraph& graph, double beta, bool weighted);

    std::size_t size() const { return graph_->event_count(); }
    double entry(EventIndex i, EventIndex j) const;
    // y = A x
    std::vector<double> multiply(std::span<const double> x) const;
    // Throws CapacityError above `max_size` events.
    Eigen::MatrixXd dense(std::size_t max_size = 2000) const;

private:
    const EventGraph* graph_;
    double beta_;
    bool weighted_;
};

EventMatrix event_matrix(const EventGraph& graph, const DecayParams& params, bool weighted);

// alpha (I - alpha A)^{-1} rhs by back-substitution in reverse index order.
std::vector<double> apply_communicability(const EventGraph& graph, const DecayParams& params, bool weighted,
                                          std::span<const double> rhs);

// Broadcast centrality b = M 1 (or M* 1 when weighted).
std::vector<double> event_communicability(const EventGraph& graph, const DecayParams& params, bool weighted);

// M* d(T) with d_i = exp(-beta (T - t_i)). Throws std::invalid_argument if T
// precedes the first event.
std::vector<double> decayed_broadcast(const EventGraph& graph, const DecayParams& params);

std::vector<double> event_broadcast(const EventGraph& graph, const DecayParams& params, CentralityVariant variant);

struct CommunicabilityResult {
    std::vector<double> event_broadcast;
    std::vector<double> node_broadcast; // summed over events the node sources
    std::optional<Eigen::MatrixXd> q;   // X_s M X_t^T
    CentralityVariant variant = CentralityVariant::unweighted;
};

// Node broadcast and optionally the node communicability matrix, which
// requires a directed dyadic sequence (UnsupportedInput) and at most
// `max_dense_nodes` nodes (CapacityError). For the d(T) variant Q carries
// the terminal decay on its columns.
CommunicabilityResult node_projections(const EventGraph& graph, const DecayParams& params,
                                       CentralityVariant variant, bool with_q = false,
                                       std::size_t max_dense_nodes = 4096);

// Per node id, the sorted broadcast values of the events it sources.
std::vector<std::vector<double>> per_node_event_distribution(const EventGraph& graph, const DecayParams& params,
                                                             CentralityVariant variant);

// Dense reference values from the interval-product definitions: one
// interval per distinct timestamp, Q(T) = prod (I - alpha A(s))^{-1} and the
// running S(t) = [I + exp(-beta dt) S(t-1)] (I - alpha A(t))^{-1} - I.
// Throws DivergenceError when an interval's resolvent is not a convergent
// series.
struct DynamicCommunicability {
    Eigen::MatrixXd q;
    Eigen::MatrixXd s;
};
DynamicCommunicability oracle_dynamic_communicability(const EventSequence& seq, const DecayParams& params);

// Smallest R with A^R = 0, found by repeated sparse multiplication.
std::size_t nilpotency_index(const EventGraph& graph);

struct SweepRow {
    double alpha;
    double beta;
    std::vector<double> node_broadcast;
};
// Node broadcast over an (alpha, beta) grid; settings evaluate concurrently.
std::vector<SweepRow> parameter_sweep(const EventGraph& graph, std::span<const double> alphas,
                                      std::span<const double> betas, CentralityVariant variant,
                                      std::optional<double> horizon = std::nullopt, unsigned threads = 0);

// index,t,broadcast
void write_event_table(std::ostream& out, const EventSequence& seq, std::span<const double> broadcast);
// node,broadcast
void write_node_table(std::ostream& out, const EventSequence& seq, std::span<const double> broadcast);
// alpha,beta,node,broadcast
void write_sweep_table(std::ostream& out, const EventSequence& seq, std::span<const SweepRow> rows);

} // namespace evg
