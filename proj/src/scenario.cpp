#include "sse/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "sse/rng.hpp"

namespace sse {

LtiSystem random_sparse_system(int n, int p, double density, std::uint64_t seed) {
    if (n < 1 || p < 1) { throw std::invalid_argument("need n >= 1 and p >= 1"); }
    if (!(density > 0.0) || density > 1.0) { throw std::domain_error("density must be in (0, 1]"); }
    Rng rng(seed);
    auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
        Matrix m = Matrix::Zero(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                if (rng.bernoulli(density)) { m(r, c) = rng.uniform01(); }
            }
        }
        return m;
    };
    Matrix A = draw(n, n);
    Matrix C = draw(p, n);
    return LtiSystem(std::move(A), std::move(C));
}

AttackScenario generate_attack(AttackScheme scheme, int p, int s, double magnitude, int T,
                               std::uint64_t seed) {
    if (s < 0 || s > (p + 1) / 2 - 1) {
        throw std::domain_error("attacked count s must satisfy 0 <= s <= ceil(p/2)-1");
    }
    if (magnitude < 0.0) { throw std::domain_error("magnitude must be nonnegative"); }

    Rng rng(seed);
    AttackScenario attack;
    attack.scheme = scheme;
    attack.magnitude = magnitude;

    if (scheme == AttackScheme::Greedy) {
        for (int i = 1; i <= s; ++i) { attack.support.insert(i); }
    } else {
        // Partial Fisher-Yates: the first s entries form a uniform s-subset.
        std::vector<int> pool(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) { pool[static_cast<std::size_t>(i)] = i + 1; }
        for (int i = 0; i < s; ++i) {
            const auto j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
            attack.support.insert(pool[static_cast<std::size_t>(i)]);
        }
    }

    for (int i : attack.support.to_vector()) {
        Vector signal(T);
        for (int t = 0; t < T; ++t) { signal(t) = rng.normal(); }
        const double norm = signal.norm();
        signal = (norm > 0.0) ? Vector(signal / norm * magnitude) : Vector(Vector::Zero(T));
        attack.signals.emplace(i, std::move(signal));
    }
    return attack;
}

StackedWindow simulate_window(const LtiSystem& sys, const Vector& x0, int T, const NoiseModel& noise,
                              const AttackScenario& attack, std::uint64_t seed) {
    const int n = sys.n();
    const int p = sys.p();
    if (x0.size() != n) { throw std::invalid_argument("x0 has wrong dimension"); }
    if (T < 1) { throw std::invalid_argument("window length T must be >= 1"); }
    for (int i : attack.support.to_vector()) {
        if (i > p) { throw std::invalid_argument("attack support exceeds sensor count"); }
        if (attack.signals.at(i).size() != T) { throw std::invalid_argument("attack signal length differs from T"); }
    }

    Rng rng(seed);
    auto sample = [&]() {
        return noise.kind == NoiseKind::None ? 0.0 : rng.truncated_normal(noise.sigma, noise.k);
    };

    StackedWindow window;
    window.T = T;
    window.p = p;
    window.Y.resize(static_cast<Eigen::Index>(T) * p);

    Vector x = x0;
    for (int t = 0; t < T; ++t) {
        Vector w(p);
        for (int i = 0; i < p; ++i) { w(i) = sample(); }
        window.Y.segment(static_cast<Eigen::Index>(t) * p, p) = sys.C * x + w;
        if (t + 1 < T) {
            Vector v(n);
            for (int i = 0; i < n; ++i) { v(i) = sample(); }
            x = sys.A * x + v;
        }
    }

    for (const auto& [sensor, signal] : attack.signals) {
        for (int t = 0; t < T; ++t) { window.Y(static_cast<Eigen::Index>(t) * p + (sensor - 1)) += signal(t); }
    }

    window.ground_truth = StackedWindow::GroundTruth{x0, attack, noise_bounds(noise, sys, T)};
    return window;
}

double noise_bound_for(const NoiseModel& model, const LtiSystem& sys, int T, int sensor) {
    if (model.kind == NoiseKind::None) { return 0.0; }
    if (sensor < 1 || sensor > sys.p()) { throw std::invalid_argument("sensor index out of range"); }

    const double scalar_bound = model.k * model.sigma;
    // Block t of the stacked noise is w(t) + C * sum_{m=0}^{t-1} A^m v(.),
    // so each scalar of block t is bounded by
    // k*sigma * (1 + sum_m ||row_i(C A^m)||_1).
    double sum_sq = 0.0;
    Eigen::RowVectorXd row = sys.C.row(sensor - 1);  // row_i(C) * A^m, updated in place
    double propagation = 0.0;
    for (int t = 0; t < T; ++t) {
        const double entry_bound = scalar_bound * (1.0 + propagation);
        sum_sq += entry_bound * entry_bound;
        propagation += row.lpNorm<1>();
        row = row * sys.A;
    }
    return std::sqrt(sum_sq);
}

std::vector<double> noise_bounds(const NoiseModel& model, const LtiSystem& sys, int T) {
    std::vector<double> out(static_cast<std::size_t>(sys.p()));
    for (int i = 1; i <= sys.p(); ++i) { out[static_cast<std::size_t>(i - 1)] = noise_bound_for(model, sys, T, i); }
    return out;
}

}  // namespace sse
