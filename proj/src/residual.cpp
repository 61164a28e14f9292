#include "sse/residual.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "sse/rng.hpp"

namespace sse {

ResidualResult min_residual(const Vector& Y_I, const ObservabilityMatrix& O_I) {
    if (Y_I.size() != O_I.O.rows()) { throw std::domain_error("Y_I and O_I row counts differ"); }
    const Eigen::Index n = O_I.O.cols();
    if (O_I.O.rows() == 0) { return ResidualResult{Vector::Zero(n), 0.0, 0}; }

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(O_I.O);
    ResidualResult result;
    result.x_hat = cod.solve(Y_I);
    result.residual = (Y_I - O_I.O * result.x_hat).norm();
    result.rank = static_cast<int>(cod.rank());
    return result;
}

bool is_feasible(const Vector& Y_I, const ObservabilityMatrix& O_I, double w_bar_I, double epsilon) {
    if (epsilon < 0.0 || w_bar_I < 0.0) { throw std::domain_error("epsilon and noise bound must be nonnegative"); }
    return min_residual(Y_I, O_I).residual < w_bar_I + std::sqrt(epsilon);
}

double combine_noise_bound(const std::vector<double>& per_sensor_bounds, const SensorSet& I) {
    double sum_sq = 0.0;
    for (int i : I.to_vector()) {
        if (i > static_cast<int>(per_sensor_bounds.size())) { throw std::domain_error("missing noise bound for sensor"); }
        const double w = per_sensor_bounds[static_cast<std::size_t>(i - 1)];
        if (w < 0.0) { throw std::domain_error("noise bounds must be nonnegative"); }
        sum_sq += w * w;
    }
    return std::sqrt(sum_sq);
}

double estimate_epsilon_star(const LtiSystem& sys, int T, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) { throw std::invalid_argument("sample_count must be >= 1"); }
    const ObservabilityMatrix O = build_observability(sys, T);
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < sample_count; ++k) {
        Vector x_prime = Vector::Zero(sys.n());
        if (k > 0) {
            for (Eigen::Index j = 0; j < x_prime.size(); ++j) { x_prime(j) = rng.uniform(-1.0, 1.0); }
        }
        const Vector y = O.O * x_prime;
        const double r = min_residual(y, O).residual;
        worst = std::max(worst, r * r);
    }
    return worst;
}

}  // namespace sse
