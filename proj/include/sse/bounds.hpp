#pragma once

#include <cstdint>

#include "sse/system_model.hpp"

namespace sse {

/// Analytic quantities controlling attack detectability and search effort.
struct BoundReport {
    int p = 0;
    int n = 0;
    int T = 0;
    int s_bar = 0;
    int s = 0;
    double delta_s = 0.0;      // worst-case subset eigenvalue ratio, < 1 under sparse observability
    double threshold = 0.0;    // minimum detectable per-sensor attack norm
    std::uint64_t n_upper = 0; // iteration cap for the ideal worst case
    bool has_delta = false;    // false when p exceeds the enumeration cap
};

/// Worst case over sensor subsets Gamma inside I (|Gamma| <= s_bar,
/// |I| >= p - s_bar) of the largest generalized eigenvalue of the pencil
/// (sum_{i in Gamma} O_i^T O_i, sum_{i in I} O_i^T O_i). Exact maximum;
/// refuses p > 16 as combinatorially intractable. Throws if some Sigma_I
/// is singular, naming the offending subset.
double delta_s(const LtiSystem& sys, int s_bar, int T);

/// Right-hand side of the detectability inequality:
/// 2 * w_bar / sqrt(1 - delta) + sqrt(epsilon) / sqrt(1 - delta),
/// where w_bar is the all-sensor noise bound. Errors when delta >= 1.
double attack_threshold(double delta, double w_bar_global, double epsilon);

/// Closed-form cap on search iterations for the ideal worst case:
/// sum_{i=1}^{S} C(s,i) C(s_bar+S-s, S-i) (s_bar+S) + p with S = p - 2*s_bar
/// (binomials vanish when the upper index is smaller). Returns p when S <= 0.
/// Exact big-integer evaluation; throws std::overflow_error if the result
/// exceeds 64 bits.
std::uint64_t n_upper(int p, int s_bar, int s);

/// Convenience wrapper assembling a full report (delta/threshold omitted
/// when p is over the enumeration cap).
BoundReport bound_report(const LtiSystem& sys, int s_bar, int s, int T, double epsilon,
                         double w_bar_global);

}  // namespace sse
