#pragma once

#include <vector>

#include "sse/system_model.hpp"

namespace sse {

/// Outcome of the least-squares subproblem min_x ||Y_I - O_I x||_2.
struct ResidualResult {
    Vector x_hat;     // minimum-norm minimizer
    double residual;  // the attained minimum
    int rank;         // numerical rank of O_I
};

/// Solve min_x ||Y_I - O_I x||_2 via a rank-revealing orthogonal
/// factorization (complete orthogonal decomposition). Rank-deficient
/// systems return the minimum-norm solution. An empty index set (zero
/// rows) yields residual 0 and x_hat = 0.
ResidualResult min_residual(const Vector& Y_I, const ObservabilityMatrix& O_I);

/// Constraint test used throughout the search: strictly
/// min ||Y_I - O_I x|| < w_bar_I + sqrt(epsilon).
bool is_feasible(const Vector& Y_I, const ObservabilityMatrix& O_I, double w_bar_I, double epsilon);

/// sqrt(sum of squared per-sensor bounds over I).
double combine_noise_bound(const std::vector<double>& per_sensor_bounds, const SensorSet& I);

/// Sampled diagnostic for the solution-accuracy floor: the largest squared
/// residual of min_x ||O x' - O x|| over sampled states x' (the origin is
/// always the first sample). Near machine zero for consistent systems; a
/// caller's epsilon should dominate this value.
double estimate_epsilon_star(const LtiSystem& sys, int T, int sample_count, std::uint64_t seed);

}  // namespace sse
