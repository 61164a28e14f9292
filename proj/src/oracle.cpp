#include "sse/oracle.hpp"

#include <stdexcept>

#include "sse/residual.hpp"

namespace sse {

namespace {

constexpr int kMaxOracleSensors = 20;

/// Shared feasibility test, identical to the search's predicate so that
/// any solver/oracle disagreement isolates the search logic.
bool support_feasible(const StackedWindow& window, const ObservabilityMatrix& full,
                      const std::vector<double>& w_bars, double epsilon, const SensorSet& support) {
    const SensorSet I = support.complement(window.p);
    return is_feasible(stack_and_restrict(window, I), restrict(full, I),
                       combine_noise_bound(w_bars, I), epsilon);
}

}  // namespace

OracleReport brute_force_min_support(const StackedWindow& window, const LtiSystem& sys,
                                     const std::vector<double>& w_bars, double epsilon, int s_bar,
                                     bool list_all) {
    const int p = sys.p();
    if (p > kMaxOracleSensors) {
        throw std::invalid_argument("oracle enumeration refuses p > " + std::to_string(kMaxOracleSensors));
    }
    if (s_bar < 0 || s_bar > p) { throw std::invalid_argument("s_bar out of range"); }

    const ObservabilityMatrix full = build_observability(sys, window.T);
    OracleReport report;
    for (int c = 0; c <= s_bar; ++c) {
        report.cardinality_checked = c;
        std::vector<SensorSet> feasible_here;
        for_each_subset(p, c, [&](const SensorSet& support) {
            if (support_feasible(window, full, w_bars, epsilon, support)) {
                feasible_here.push_back(support);
            }
            return true;
        });
        if (!feasible_here.empty() && report.minimal_supports.empty()) {
            report.minimal_supports = feasible_here;
        }
        if (list_all) {
            report.all_feasible.insert(report.all_feasible.end(), feasible_here.begin(), feasible_here.end());
        } else if (!report.minimal_supports.empty()) {
            break;
        }
    }
    return report;
}

bool feasible_superset_check(const StackedWindow& window, const LtiSystem& sys,
                             const std::vector<double>& w_bars, double epsilon, int s_bar,
                             const SensorSet& true_support) {
    const OracleReport report = brute_force_min_support(window, sys, w_bars, epsilon, s_bar,
                                                        /*list_all=*/true);
    for (const SensorSet& support : report.all_feasible) {
        if (!true_support.subset_of(support)) { return false; }
    }
    return true;
}

}  // namespace sse
