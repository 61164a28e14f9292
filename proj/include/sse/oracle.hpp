#pragma once

#include <vector>

#include "sse/system_model.hpp"

namespace sse {

/// Exhaustive ground truth for the support-identification problem at desk
/// scale: every candidate support is tested through the same feasibility
/// predicate the search uses.
struct OracleReport {
    std::vector<SensorSet> minimal_supports;  // all feasible supports of minimum cardinality
    std::vector<SensorSet> all_feasible;      // every feasible support <= s_bar (optional pass)
    int cardinality_checked = 0;

    [[nodiscard]] bool feasible() const { return !minimal_supports.empty(); }
    [[nodiscard]] int minimal_cardinality() const {
        return minimal_supports.empty() ? -1 : minimal_supports.front().size();
    }
};

/// Enumerate supports in increasing cardinality 0..s_bar (lexicographic
/// within a cardinality). At the first cardinality with a feasible support,
/// all feasible supports of that cardinality are recorded; with `list_all`
/// the enumeration continues and records every feasible support <= s_bar.
/// Refuses p > 20.
OracleReport brute_force_min_support(const StackedWindow& window, const LtiSystem& sys,
                                     const std::vector<double>& w_bars, double epsilon, int s_bar,
                                     bool list_all = false);

/// True iff every feasible support of cardinality <= s_bar contains
/// `true_support`.
bool feasible_superset_check(const StackedWindow& window, const LtiSystem& sys,
                             const std::vector<double>& w_bars, double epsilon, int s_bar,
                             const SensorSet& true_support);

}  // namespace sse
