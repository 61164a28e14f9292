#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "sse/attack_scenario.hpp"
#include "sse/sensor_set.hpp"

namespace sse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Discrete-time plant x(t+1) = A x(t), y(t) = C x(t), with n states and
/// p sensors. Control inputs are assumed known and already subtracted.
struct LtiSystem {
    Matrix A;  // n x n state transition
    Matrix C;  // p x n output map

    LtiSystem() = default;
    LtiSystem(Matrix a, Matrix c);

    [[nodiscard]] int n() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int p() const { return static_cast<int>(C.rows()); }
};

/// Stacked observability matrix over a T-step window, restricted to the
/// sensors in `index_set`. Rows are time-major: within time block t the rows
/// follow the ascending sensor order of `index_set`, and block t of the
/// full-sensor matrix equals C*A^t.
struct ObservabilityMatrix {
    Matrix O;  // (T * |index_set|) x n
    int T = 0;
    SensorSet index_set;

    [[nodiscard]] int n() const { return static_cast<int>(O.cols()); }
};

/// T-step stacked measurement vector, time-major (all p sensors at the
/// window start come first). When produced by a simulator, carries the
/// ground truth that generated it.
struct StackedWindow {
    Vector Y;  // length T*p
    int T = 0;
    int p = 0;

    struct GroundTruth {
        Vector x0;
        AttackScenario attack;
        std::vector<double> noise_bounds;  // per-sensor bounds on ||w_i||
    };
    std::optional<GroundTruth> ground_truth;

    /// The length-T measurement vector of one sensor (every p-th entry
    /// of Y starting at offset i-1).
    [[nodiscard]] Vector per_sensor(int i) const;
};

/// [C; CA; ...; CA^(T-1)] over all p sensors.
ObservabilityMatrix build_observability(const LtiSystem& sys, int T);

/// Row restriction to the sensors in I, selecting within each time block.
/// Equals build_observability applied to the row-restricted output map.
ObservabilityMatrix restrict(const ObservabilityMatrix& O, const SensorSet& I);

/// Y restricted to the sensors in I, row order matching restrict().
Vector stack_and_restrict(const StackedWindow& window, const SensorSet& I);

/// Numerical rank from singular values, using the threshold
/// max(rows, cols) * sigma_max * rel_tol.
int numerical_rank(const Matrix& M, double rel_tol = 1e-10);

/// True iff every observability matrix obtained by removing any k sensors
/// retains full column rank n over a T-step window.
bool is_sparse_observable(const LtiSystem& sys, int k, int T, double rank_rel_tol = 1e-10);

/// Largest s_bar in {0, ..., ceil(p/2)-1} such that the system is
/// 2*s_bar-sparse observable; 0 when the system tolerates no attack
/// (including the case where it is not observable at all).
int max_allowable_attacks(const LtiSystem& sys, int T);

/// Visits every k-subset of {1..p} in lexicographic order.
/// `visit` returns false to stop early; the function returns false iff
/// the enumeration was stopped.
bool for_each_subset(int p, int k, const std::function<bool(const SensorSet&)>& visit);

}  // namespace sse
