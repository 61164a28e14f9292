#pragma once

#include <chrono>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sse/residual.hpp"
#include "sse/system_model.hpp"

namespace sse {

/// One node of the layered assignment graph. Level l > 0 carries the truth
/// assignment of sensor l (value 1 = attacked, 0 = attack-free); level 0 is
/// the artificial root. `attack_free` is the set of levels assigned 0 so
/// far, and `residual` records whether that set has already failed the
/// feasibility test (1 = infeasible).
struct SearchNode {
    int level = 0;
    int value = 1;
    int parent = -1;  // arena index; -1 for the root
    SensorSet attack_free;
    int residual = 0;
    std::uint64_t seq = 0;  // creation order, used as FIFO tie-break

    [[nodiscard]] int attacked_count() const { return level - attack_free.size(); }
};

/// Nodes are interchangeable for queue-membership purposes when they assign
/// the same value to the same sensor, regardless of the path taken.
[[nodiscard]] bool node_equiv(const SearchNode& a, const SearchNode& b);

/// Priority comparison: +1 when a outranks b, -1 when b outranks a, 0 on a
/// tie. Fewer attacked sensors on the path wins; at equal attacked counts
/// the deeper node wins.
[[nodiscard]] int node_cmp(const SearchNode& a, const SearchNode& b);

enum class SearchMode {
    Exact,  // prune paths with more than s_bar attacked sensors
    HalfP,  // prune paths with at least ceil(p/2) attacked sensors
};

enum class SearchStatus { Solved, Failure };

[[nodiscard]] constexpr const char* to_string(SearchStatus s) noexcept {
    return s == SearchStatus::Solved ? "solved" : "failure";
}

/// Shared, read-only data for one search run plus the per-run feasibility
/// cache keyed by the attack-free set. Holds references to the window and
/// system, which must outlive the context. Not meant to be shared across
/// threads; independent runs each build their own.
class SearchContext {
  public:
    SearchContext(const StackedWindow& window, const LtiSystem& sys, std::vector<double> w_bars,
                  double epsilon);

    /// Strict feasibility of the index set I (cached).
    bool feasible(const SensorSet& I) const;

    /// Fresh minimum-norm least-squares solve over I.
    [[nodiscard]] ResidualResult solve(const SensorSet& I) const;

    [[nodiscard]] int p() const { return p_; }
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int T() const { return T_; }
    [[nodiscard]] double epsilon() const { return epsilon_; }
    [[nodiscard]] const std::vector<double>& w_bars() const { return w_bars_; }
    [[nodiscard]] std::uint64_t solves() const { return solves_; }

  private:
    const StackedWindow& window_;
    ObservabilityMatrix full_obs_;
    std::vector<double> w_bars_;
    double epsilon_;
    int p_, n_, T_;
    mutable std::unordered_map<std::uint64_t, bool> cache_;
    mutable std::uint64_t solves_ = 0;
};

/// Child generation: a 0-child extends the attack-free set with its level
/// and runs the feasibility test; a 1-child keeps the set and inherits the
/// parent's residual flag. The parent must be below level p.
SearchNode get_child(const SearchNode& parent, int parent_index, int id, const SearchContext& ctx);

struct SearchStats {
    std::uint64_t repo_pushes = 0;
    std::uint64_t repo_promotions = 0;
    std::uint64_t duplicate_pops = 0;   // pops sharing (level, value, I) with an earlier pop
    std::uint64_t residual_solves = 0;
    std::uint64_t class_collisions = 0; // instants where frontier+explored held 2+ nodes of a class
};

struct EstimationResult {
    Vector x_hat;
    SensorSet attacked;
    SensorSet attack_free;
    std::uint64_t iterations = 0;  // number of frontier pops
    SearchStatus status = SearchStatus::Failure;
    std::chrono::duration<double, std::milli> runtime{0.0};
    SearchStats stats;
};

/// Snapshot view of one node for trace logs.
struct TraceNode {
    int level;
    int value;
    std::vector<int> attack_free;
    int residual;
};

/// State of the three node sets: entry 1 is taken right after
/// initialization and each later entry right after one iteration (frontier
/// and repo in priority order, explored in insertion order; the accepting
/// node appears in explored in the final entry).
struct TraceEntry {
    int iteration = 0;
    std::vector<TraceNode> frontier;
    std::vector<TraceNode> explored;
    std::vector<TraceNode> repo;
};

struct TraceResult {
    EstimationResult result;
    std::vector<TraceEntry> log;
};

/// Best-first search over the assignment graph: pops the highest-priority
/// node, accepts at level p, discards infeasible or over-budget children,
/// and routes children whose (level, value) class is already present in
/// frontier or explored into the repo for delayed expansion. When the
/// frontier drains, the best repo node is promoted and explored is cleared.
EstimationResult secure_estimate(const StackedWindow& window, const LtiSystem& sys,
                                 const std::vector<double>& w_bars, double epsilon, int s_bar,
                                 SearchMode mode = SearchMode::Exact);

/// secure_estimate plus the per-iteration set evolution.
TraceResult trace_search(const StackedWindow& window, const LtiSystem& sys,
                         const std::vector<double>& w_bars, double epsilon, int s_bar,
                         SearchMode mode = SearchMode::Exact);

}  // namespace sse
