#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sse/bounds.hpp"
#include "sse/io.hpp"
#include "sse/scenario.hpp"
#include "sse/search.hpp"

namespace sse {

enum class Preset { SmallOptimality, ScalingP, ScalingN, NoiselessBench, NoisyBench, Custom };

/// Declarative description of a bench run. A cell is one combination of
/// (p, n, fraction, scheme); `trials` trials run per cell with seeds derived
/// from `seed`, the cell index, and the trial index.
struct ExperimentConfig {
    Preset preset = Preset::Custom;
    std::vector<int> p_values;
    std::vector<int> n_values;
    std::vector<double> fractions;  // s = max(1, round(fraction * p)); ignored when s_equals_s_bar
    std::vector<AttackScheme> schemes;
    int trials = 25;
    std::uint64_t seed = 1;
    double epsilon = 1e-5;
    NoiseModel noise;
    SearchMode mode = SearchMode::HalfP;
    bool s_equals_s_bar = false;  // small-system protocol: compute s_bar, attack s_bar sensors
    double density = 0.0;         // 0 = auto: min(0.3, 2.0/n) keeps the window numerically sane
    double magnitude = 0.0;       // 0 = auto: threshold-derived (exact mode) or large fixed
    int T = 0;                    // 0 = auto: T = n
    int max_p = 60;               // resource guard for bench cells
    int max_n = 60;
};

struct TrialRecord {
    int p = 0;
    int n = 0;
    int s = 0;
    AttackScheme scheme = AttackScheme::Greedy;
    NoiseKind noise = NoiseKind::None;
    std::uint64_t seed = 0;
    std::uint64_t iterations = 0;
    double runtime_ms = 0.0;
    double relative_error = 0.0;
    bool identified_correctly = false;
    SearchStatus status = SearchStatus::Failure;
};

/// Full per-trial artifacts, for callers that need more than the record.
struct TrialOutcome {
    TrialRecord record;
    LtiSystem system;
    Scenario scenario;
    EstimationResult estimation;
    int s_bar_used = 0;
    double threshold = 0.0;  // detectability threshold when computed, else 0
    double w_bar_global = 0.0;
};

struct CellSummary {
    int p = 0;
    int n = 0;
    int s = 0;
    AttackScheme scheme = AttackScheme::Greedy;
    NoiseKind noise = NoiseKind::None;
    int trials = 0;
    double mean_iterations = 0.0;
    double std_iterations = 0.0;
    std::uint64_t min_iterations = 0;
    std::uint64_t max_iterations = 0;
    double mean_runtime_ms = 0.0;
    double misidentification_ratio = 0.0;
};

struct BenchResult {
    std::vector<TrialRecord> records;
    std::vector<CellSummary> summaries;
    std::vector<SearchStats> stats;  // parallel to records
};

/// Built-in configurations mirroring the experiment protocol at desk scale.
ExperimentConfig preset_config(Preset preset);
std::optional<Preset> parse_preset(const std::string& name);
const char* to_string(Preset preset);

/// A drawn system plus the quantities the attack protocol needs.
struct DrawnSystem {
    LtiSystem sys;
    int s_bar = 0;           // computed attack budget (only when requested)
    double threshold = 0.0;  // detectability threshold (only when requested)
    std::vector<double> w_bars;
    double w_bar_global = 0.0;
};

/// Draw random sparse systems until one satisfies the protocol: budget of at
/// least `min_s_bar` (skip the budget entirely with min_s_bar < 0) and, when
/// `need_threshold` is set, a finite detectability threshold. Deterministic
/// per seed.
DrawnSystem draw_system(int n, int p, double density, int T, const NoiseModel& noise, double epsilon,
                        int min_s_bar, bool need_threshold, std::uint64_t seed);

/// One deterministic trial: draw the system (regenerating until it supports
/// the requested attack budget), build the attack and window, run the
/// search, and score it against ground truth.
TrialOutcome run_trial(const ExperimentConfig& cfg, int p, int n, int s, AttackScheme scheme,
                       std::uint64_t seed);

/// All cells of the config, trials parallelized with deterministic seeding
/// and output order. SSE_THREADS caps the worker count.
BenchResult run_bench(const ExperimentConfig& cfg);

void write_records_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
std::string records_csv_header();
std::string record_csv_row(const TrialRecord& r);
void write_summary(const std::vector<CellSummary>& summaries, const std::filesystem::path& path);

/// Write system/scenario/window files for every trial of the config into
/// `dir` (sys_NNNN.json, scn_NNNN.json, win_NNNN.csv) plus a manifest.
/// Returns the number of trials written.
int generate_files(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Worker-count cap: SSE_THREADS when set, else hardware concurrency.
int thread_cap();

/// Run fn(0..count-1) on up to thread_cap() workers.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace sse
