#pragma once

#include <Eigen/Core>
#include <map>

#include "sse/sensor_set.hpp"

namespace sse {

enum class AttackScheme { Greedy, Random };

[[nodiscard]] constexpr const char* to_string(AttackScheme scheme) noexcept {
    return scheme == AttackScheme::Greedy ? "greedy" : "random";
}

/// A fixed-support sensor attack over one measurement window. Each attacked
/// sensor carries a stacked signal of length T whose 2-norm equals
/// `magnitude`; sensors outside the support have no signal.
struct AttackScenario {
    SensorSet support;
    std::map<int, Eigen::VectorXd> signals;  // sensor -> length-T stacked signal
    AttackScheme scheme = AttackScheme::Greedy;
    double magnitude = 0.0;

    [[nodiscard]] bool empty() const { return support.empty(); }
};

}  // namespace sse
