#include "evg/joining.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "evg/format.hpp"

namespace evg {

namespace {

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

bool any_shared(const HyperEvent& a, const HyperEvent& b) {
    return intersects(a.sources, b.sources) || intersects(a.sources, b.targets) ||
           intersects(a.targets, b.sources) || intersects(a.targets, b.targets);
}

void check_dt(double dt, const char* name) {
    if (std::isnan(dt) || dt <= 0.0) throw std::invalid_argument(std::string(name) + " must be positive");
}

} // namespace

JoiningRule::JoiningRule(RuleKind kind, double dt, double dt_min, Subsequent subsequent)
    : kind_(kind), dt_(dt), dt_min_(dt_min), subsequent_(subsequent) {}

JoiningRule JoiningRule::adjacency(double dt, Subsequent subsequent) {
    check_dt(dt, "dt");
    return JoiningRule(RuleKind::adjacency, dt, 0.0, subsequent);
}

JoiningRule JoiningRule::walk_forming(double dt) {
    check_dt(dt, "dt");
    return JoiningRule(RuleKind::walk_forming, dt, 0.0, Subsequent::none);
}

JoiningRule JoiningRule::min_gap(double dt_min, double dt) {
    check_dt(dt, "dt2");
    if (std::isnan(dt_min) || dt_min < 0.0) throw std::invalid_argument("dt1 must be non-negative");
    if (!(dt_min < dt)) throw std::invalid_argument("dt1 must be smaller than dt2");
    return JoiningRule(RuleKind::min_gap_nonbacktracking, dt, dt_min, Subsequent::none);
}

JoiningRule JoiningRule::context_free() const {
    JoiningRule r = *this;
    r.subsequent_ = Subsequent::none;
    return r;
}

JoiningRule JoiningRule::with_dt(double dt) const {
    check_dt(dt, "dt");
    if (kind_ == RuleKind::min_gap_nonbacktracking && !(dt_min_ < dt))
        throw std::invalid_argument("dt1 must be smaller than dt2");
    JoiningRule r = *this;
    r.dt_ = dt;
    return r;
}

JoiningRule JoiningRule::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string name;
    if (!(in >> name)) throw std::invalid_argument("empty rule");

    double dt = kInfinity, dt1 = 0.0, dt2 = kInfinity;
    bool saw_dt1 = false, saw_dt2 = false;
    Subsequent sub = Subsequent::none;
    bool saw_sub = false;
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("rule parameter '" + token + "' is not key=value");
        std::string key = token.substr(0, eq), value = token.substr(eq + 1);
        if (key == "subsequent") {
            saw_sub = true;
            if (value == "none") sub = Subsequent::none;
            else if (value == "event" || value == "per_event") sub = Subsequent::per_event;
            else if (value == "node" || value == "per_node") sub = Subsequent::per_node;
            else throw std::invalid_argument("unknown subsequent mode '" + value + "'");
            continue;
        }
        double v = parse_number(value);
        if (key == "dt") dt = v;
        else if (key == "dt1") dt1 = v, saw_dt1 = true;
        else if (key == "dt2") dt2 = v, saw_dt2 = true;
        else throw std::invalid_argument("unknown rule parameter '" + key + "'");
    }

    if (name == "adjacency" || name == "adjacent") {
        if (saw_dt1 || saw_dt2) throw std::invalid_argument("adjacency takes dt, not dt1/dt2");
        return adjacency(dt, sub);
    }
    if (saw_sub && sub != Subsequent::none)
        throw std::invalid_argument("subsequent modes apply to adjacency rules only");
    if (name == "walk" || name == "walk_forming") {
        if (saw_dt1 || saw_dt2) throw std::invalid_argument("walk takes dt, not dt1/dt2");
        return walk_forming(dt);
    }
    if (name == "mingap" || name == "min_gap") {
        if (!saw_dt2) dt2 = dt;
        return min_gap(dt1, dt2);
    }
    throw std::invalid_argument("unknown rule '" + name + "'");
}

std::string JoiningRule::to_string() const {
    switch (kind_) {
    case RuleKind::adjacency: {
        std::string s = "adjacency dt=" + format_number(dt_);
        if (subsequent_ == Subsequent::per_event) s += " subsequent=event";
        if (subsequent_ == Subsequent::per_node) s += " subsequent=node";
        return s;
    }
    case RuleKind::walk_forming:
        return "walk dt=" + format_number(dt_);
    case RuleKind::min_gap_nonbacktracking:
        return "mingap dt1=" + format_number(dt_min_) + " dt2=" + format_number(dt_);
    }
    return {};
}

bool nodes_join(const JoiningRule& rule, const HyperEvent& a, const HyperEvent& b, bool directed) {
    if (!directed || rule.kind() == RuleKind::adjacency) {
        if (!any_shared(a, b)) return false;
        if (rule.kind() == RuleKind::min_gap_nonbacktracking && !directed) {
            // Undirected analogue of non-backtracking: the second event may
            // not stay entirely within the first event's nodes.
            auto na = a.nodes();
            auto nb = b.nodes();
            return !std::includes(na.begin(), na.end(), nb.begin(), nb.end());
        }
        return true;
    }
    if (!intersects(a.targets, b.sources)) return false;
    if (rule.kind() == RuleKind::min_gap_nonbacktracking) return !intersects(a.sources, b.targets);
    return true;
}

bool joins(const JoiningRule& rule, const HyperEvent& first, const HyperEvent& second, bool directed) {
    if (rule.subsequent() != Subsequent::none)
        throw std::invalid_argument("joins() is only defined for rules without a subsequent restriction");
    const double tau = inter_event_time(first, second);
    if (!(tau > rule.dt_min() && tau > 0.0 && tau <= rule.dt())) return false;
    return nodes_join(rule, first, second, directed);
}

double weight(const JoiningRule& rule, const HyperEvent& first, const HyperEvent& second, bool directed) {
    return joins(rule, first, second, directed) ? inter_event_time(first, second) : 0.0;
}

} // namespace evg
