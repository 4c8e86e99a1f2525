#pragma once

#include <string>
#include <string_view>

#include "evg/events.hpp"

namespace evg {

enum class RuleKind { adjacency, walk_forming, min_gap_nonbacktracking };

// Restricts an adjacency rule to the next later event overall (per_event)
// or the next later event of each participating node (per_node).
enum class Subsequent { none, per_event, per_node };

// Decides whether an ordered pair of events is linked in the event graph.
// Immutable value type; build with the factories so invariants hold.
class JoiningRule {
public:
    static JoiningRule adjacency(double dt = kInfinity, Subsequent subsequent = Subsequent::none);
    static JoiningRule walk_forming(double dt = kInfinity);
    // Links pairs with dt_min < tau <= dt that form a walk without
    // immediately stepping back.
    static JoiningRule min_gap(double dt_min, double dt);

    // Parses `adjacency dt=20 subsequent=node`, `walk dt=inf`,
    // `mingap dt1=5 dt2=15`. Throws std::invalid_argument.
    static JoiningRule parse(std::string_view text);

    RuleKind kind() const { return kind_; }
    double dt() const { return dt_; }
    double dt_min() const { return dt_min_; }
    Subsequent subsequent() const { return subsequent_; }

    // Same rule without the subsequent restriction.
    JoiningRule context_free() const;
    // Same rule with its upper bound replaced.
    JoiningRule with_dt(double dt) const;

    // Canonical text form accepted by parse().
    std::string to_string() const;

    friend bool operator==(const JoiningRule&, const JoiningRule&) = default;

private:
    JoiningRule(RuleKind kind, double dt, double dt_min, Subsequent subsequent);

    RuleKind kind_ = RuleKind::adjacency;
    double dt_ = kInfinity;
    double dt_min_ = 0.0;
    Subsequent subsequent_ = Subsequent::none;
};

// The pair predicate f(e_i, e_j). Requires rule.subsequent() == none; the
// subsequent restrictions depend on the whole sequence and are resolved by
// the graph builder.
bool joins(const JoiningRule& rule, const HyperEvent& first, const HyperEvent& second, bool directed);

// Inter-event time when the pair joins, 0 otherwise.
double weight(const JoiningRule& rule, const HyperEvent& first, const HyperEvent& second, bool directed);

// Whether the node sets satisfy the rule, ignoring the time bounds.
bool nodes_join(const JoiningRule& rule, const HyperEvent& first, const HyperEvent& second, bool directed);

} // namespace evg
