#pragma once

#include "sse/bounds.hpp"
#include "sse/scenario.hpp"
#include "sse/system_model.hpp"

namespace sse::testing {

/// Four-sensor, two-state plant where every single-sensor observability
/// matrix over T = 2 steps has full rank, so any one sensor reconstructs
/// the state (the system stays observable after removing any 3 sensors).
inline LtiSystem four_sensor_system() {
    Matrix A(2, 2);
    A << 1, 1,
         1, 0;
    Matrix C(4, 2);
    C << 1, 0,
         0, 1,
         1, 1,
         1, 2;
    return LtiSystem(A, C);
}

struct SingleAttackFixture {
    LtiSystem sys;
    StackedWindow window;
    std::vector<double> w_bars;  // all zero (noiseless)
    double epsilon = 1e-5;
    Vector x0;
    double attack_norm = 0.0;
};

/// Noiseless window on four_sensor_system with only sensor 1 attacked,
/// attack strength above the detectability threshold for s_bar = 1.
inline SingleAttackFixture single_attack_fixture() {
    SingleAttackFixture fx;
    fx.sys = four_sensor_system();
    const int T = 2;

    fx.x0 = Vector(2);
    fx.x0 << 0.7, -0.4;

    const double threshold = attack_threshold(delta_s(fx.sys, 1, T), 0.0, fx.epsilon);
    fx.attack_norm = 2.0 * threshold + 1.0;

    AttackScenario attack;
    attack.scheme = AttackScheme::Greedy;
    attack.support = SensorSet{1};
    attack.magnitude = fx.attack_norm;
    Vector signal(T);
    signal << 3.0, -1.0;  // generic direction, not in the range of O_1's sensor rows
    attack.signals.emplace(1, Vector(signal / signal.norm() * fx.attack_norm));

    fx.window = simulate_window(fx.sys, fx.x0, T, NoiseModel::none(), attack, /*seed=*/7);
    fx.w_bars = std::vector<double>(4, 0.0);
    return fx;
}

}  // namespace sse::testing
