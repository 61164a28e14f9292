#pragma once

#include <filesystem>
#include <string>

#include "sse/bounds.hpp"
#include "sse/oracle.hpp"
#include "sse/scenario.hpp"
#include "sse/search.hpp"

namespace sse {

/// Everything needed to rebuild one simulated measurement window
/// deterministically: which system it belongs to, the window-start state,
/// the noise model, the materialized attack, and the noise seed.
struct Scenario {
    std::string system_ref;  // file name of the system this scenario was built for
    Vector x0;
    int T = 0;
    NoiseModel noise;
    AttackScenario attack;
    std::uint64_t seed = 0;
};

void save_system(const LtiSystem& sys, const std::filesystem::path& path);
LtiSystem load_system(const std::filesystem::path& path);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

void save_result(const EstimationResult& result, const std::filesystem::path& path);
void save_trace(const TraceResult& trace, const std::filesystem::path& path);
void save_bound_report(const BoundReport& report, const std::filesystem::path& path);
void save_oracle_report(const OracleReport& report, const std::filesystem::path& path);

/// One row per time step, one column per sensor.
void save_window_csv(const StackedWindow& window, const std::filesystem::path& path);

/// Rebuild the window a scenario describes.
StackedWindow realize(const Scenario& scenario, const LtiSystem& sys);

std::string to_json_string(const EstimationResult& result);
std::string to_json_string(const BoundReport& report);
std::string to_json_string(const OracleReport& report);

}  // namespace sse
