#pragma once

#include <cstdint>

#include "sse/system_model.hpp"

namespace sse {

enum class NoiseKind { None, TruncatedGaussian };

/// Bounded noise model: either noiseless, or i.i.d. truncated-Gaussian
/// process and measurement noise with every scalar confined to
/// [-k*sigma, k*sigma].
struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    double sigma = 0.0;
    double k = 0.0;  // truncation multiple

    static NoiseModel none() { return NoiseModel{}; }
    static NoiseModel truncated_gaussian(double sigma, double k) {
        return NoiseModel{NoiseKind::TruncatedGaussian, sigma, k};
    }
};

/// Random system with Bernoulli(density) sparsity pattern and nonzero
/// entries uniform on [0, 1], for both A and C. Deterministic per seed.
LtiSystem random_sparse_system(int n, int p, double density, std::uint64_t seed);

/// Greedy scheme attacks sensors {1..s}; Random draws a uniform s-subset.
/// Each attacked sensor gets an independent standard-normal stacked
/// T-vector, normalized to unit norm and scaled by `magnitude`.
AttackScenario generate_attack(AttackScheme scheme, int p, int s, double magnitude, int T,
                               std::uint64_t seed);

/// Simulate the window: run the state/measurement recursion from x0 with
/// realized noise, then add the attack signals into the slots of the
/// attacked sensors. Ground truth (x0, attack, analytic noise bounds) is
/// recorded on the result.
StackedWindow simulate_window(const LtiSystem& sys, const Vector& x0, int T, const NoiseModel& noise,
                              const AttackScenario& attack, std::uint64_t seed);

/// Analytic worst-case bound on ||w_i|| for the stacked per-sensor noise:
/// every scalar noise sample is bounded by k*sigma, and process noise is
/// propagated through the C A^m terms of the stacked-window expansion by
/// the triangle inequality. Dominates every realization by construction.
double noise_bound_for(const NoiseModel& model, const LtiSystem& sys, int T, int sensor);

/// noise_bound_for evaluated for every sensor 1..p.
std::vector<double> noise_bounds(const NoiseModel& model, const LtiSystem& sys, int T);

}  // namespace sse
