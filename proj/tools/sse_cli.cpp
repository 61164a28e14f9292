// Command-line front end: generate systems and attack scenarios, run the
// secure estimator, compute detectability bounds, execute bench matrices,
// and cross-check against the brute-force oracle.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "sse/harness.hpp"
#include "sse/io.hpp"
#include "sse/oracle.hpp"
#include "sse/rng.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitFailureStatus = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
    double epsilon = 1e-5;
    std::string mode = "exact";
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

sse::SearchMode parse_mode(const std::string& mode) {
    if (mode == "exact") { return sse::SearchMode::Exact; }
    if (mode == "halfp") { return sse::SearchMode::HalfP; }
    throw CLI::ValidationError("--mode must be 'exact' or 'halfp'");
}

int cmd_generate(const sse::ExperimentConfig& cfg, const std::string& out_dir) {
    const int written = sse::generate_files(cfg, out_dir);
    std::cout << "wrote " << written << " trial(s) to " << out_dir << "\n";
    return kExitSolved;
}

int cmd_estimate(const std::string& system_file, const std::string& scenario_file, double epsilon,
                 sse::SearchMode mode, int s_bar, const std::string& trace_file,
                 const std::string& out_file, bool oracle_check) {
    const sse::LtiSystem sys = sse::load_system(system_file);
    const sse::Scenario scenario = sse::load_scenario(scenario_file);
    const sse::StackedWindow window = sse::realize(scenario, sys);
    const std::vector<double> w_bars = sse::noise_bounds(scenario.noise, sys, scenario.T);

    if (s_bar < 0) {  // auto
        if (mode == sse::SearchMode::Exact) {
            if (sys.p() > 20) {
                std::cerr << "error: computing s_bar by enumeration needs p <= 20; "
                             "pass --s-bar explicitly or use --mode halfp\n";
                return kExitUsage;
            }
            s_bar = sse::max_allowable_attacks(sys, scenario.T);
        } else {
            s_bar = (sys.p() + 1) / 2 - 1;
        }
    }

    sse::TraceResult trace;
    if (!trace_file.empty()) {
        trace = sse::trace_search(window, sys, w_bars, epsilon, s_bar, mode);
        sse::save_trace(trace, trace_file);
    } else {
        trace.result = sse::secure_estimate(window, sys, w_bars, epsilon, s_bar, mode);
    }
    const sse::EstimationResult& result = trace.result;

    std::cout << sse::to_json_string(result) << "\n";
    if (!out_file.empty()) { sse::save_result(result, out_file); }

    if (oracle_check) {
        const sse::OracleReport report =
            sse::brute_force_min_support(window, sys, w_bars, epsilon, s_bar);
        std::cout << sse::to_json_string(report) << "\n";
        const bool status_agrees =
            report.feasible() == (result.status == sse::SearchStatus::Solved);
        const bool cardinality_agrees =
            !report.feasible() || report.minimal_cardinality() == result.attacked.size();
        std::cout << "{\"oracle_agreement\": " << ((status_agrees && cardinality_agrees) ? "true" : "false")
                  << "}\n";
    }
    return result.status == sse::SearchStatus::Solved ? kExitSolved : kExitFailureStatus;
}

int cmd_bench(const sse::ExperimentConfig& cfg, const std::string& out_dir) {
    const sse::BenchResult bench = sse::run_bench(cfg);
    std::filesystem::create_directories(out_dir);
    const auto csv = std::filesystem::path(out_dir) / "trials.csv";
    const auto summary = std::filesystem::path(out_dir) / "summary.json";
    sse::write_records_csv(bench.records, csv);
    sse::write_summary(bench.summaries, summary);
    std::cout << "wrote " << bench.records.size() << " trial rows to " << csv.string() << "\n";
    std::cout << "wrote " << bench.summaries.size() << " cell summaries to " << summary.string() << "\n";

    // Exact-mode cells at enumerable scale also get a representative bound
    // report, computed from each cell's first trial.
    if (cfg.mode == sse::SearchMode::Exact) {
        for (std::size_t cell = 0; cell < bench.summaries.size(); ++cell) {
            const sse::CellSummary& sum = bench.summaries[cell];
            if (sum.p > 16) { continue; }
            const std::uint64_t seed = sse::Rng::mix(cfg.seed, cell + 1, 1);
            const sse::TrialOutcome outcome =
                sse::run_trial(cfg, sum.p, sum.n, sum.s, sum.scheme, seed);
            const sse::BoundReport report =
                sse::bound_report(outcome.system, outcome.s_bar_used, outcome.record.s,
                                  outcome.scenario.T, cfg.epsilon, outcome.w_bar_global);
            sse::save_bound_report(report, std::filesystem::path(out_dir) /
                                               ("bounds_cell" + std::to_string(cell) + ".json"));
        }
    }
    return kExitSolved;
}

int cmd_bound(const std::string& system_file, int s_bar, int s, int T, double epsilon,
              const std::string& out_file) {
    const sse::LtiSystem sys = sse::load_system(system_file);
    if (T <= 0) { T = sys.n(); }
    const std::vector<double> w_bars(static_cast<std::size_t>(sys.p()), 0.0);
    const sse::BoundReport report = sse::bound_report(sys, s_bar, s, T, epsilon, 0.0);
    std::cout << sse::to_json_string(report) << "\n";
    if (!out_file.empty()) { sse::save_bound_report(report, out_file); }
    return kExitSolved;
}

int cmd_oracle(const std::string& system_file, const std::string& scenario_file, double epsilon,
               int s_bar, bool list_all, const std::string& out_file) {
    const sse::LtiSystem sys = sse::load_system(system_file);
    const sse::Scenario scenario = sse::load_scenario(scenario_file);
    const sse::StackedWindow window = sse::realize(scenario, sys);
    const std::vector<double> w_bars = sse::noise_bounds(scenario.noise, sys, scenario.T);
    if (s_bar < 0) { s_bar = sse::max_allowable_attacks(sys, scenario.T); }
    const sse::OracleReport report =
        sse::brute_force_min_support(window, sys, w_bars, epsilon, s_bar, list_all);
    std::cout << sse::to_json_string(report) << "\n";
    if (!out_file.empty()) { sse::save_oracle_report(report, out_file); }
    return report.feasible() ? kExitSolved : kExitFailureStatus;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secure state estimation for LTI systems under sensor attack"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write system/scenario/window files for a config");
    std::string gen_preset = "small-optimality";
    sse::ExperimentConfig gen_cfg = sse::preset_config(sse::Preset::SmallOptimality);
    std::string gen_out = "generated";
    gen->add_option("--preset", gen_preset, "small-optimality|scaling-p|scaling-n|noiseless|noisy");
    gen->add_option("--trials", gen_cfg.trials, "trials per cell");
    gen->add_option("--seed", gen_cfg.seed, "base seed");
    gen->add_option("--epsilon", gen_cfg.epsilon, "solution accuracy");
    gen->add_option("--density", gen_cfg.density, "sparsity density (0 = auto)");
    gen->add_option("--out", gen_out, "output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "Identify attacked sensors and reconstruct the state");
    std::string est_system, est_scenario, est_trace, est_out, est_mode = "exact";
    double est_epsilon = 1e-5;
    int est_s_bar = -1;
    bool est_oracle = false;
    est->add_option("--system", est_system, "system JSON file")->required();
    est->add_option("--scenario", est_scenario, "scenario JSON file")->required();
    est->add_option("--epsilon", est_epsilon, "solution accuracy");
    est->add_option("--mode", est_mode, "exact|halfp");
    est->add_option("--s-bar", est_s_bar, "attack budget (default: computed/halfp rule)");
    est->add_option("--trace", est_trace, "write per-iteration trace JSON here");
    est->add_option("--out", est_out, "write result JSON here");
    est->add_flag("--oracle-check", est_oracle, "also run the brute-force oracle and report agreement");

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment matrix and write CSV + summary");
    std::string bench_preset = "scaling-p";
    std::string bench_out = "bench_out";
    std::string bench_mode;
    sse::ExperimentConfig bench_cfg = sse::preset_config(sse::Preset::ScalingP);
    int bench_trials = -1;
    std::uint64_t bench_seed = 1;
    int bench_max_p = 60;
    double bench_density = -1.0;
    bench->add_option("--preset", bench_preset, "small-optimality|scaling-p|scaling-n|noiseless|noisy");
    bench->add_option("--trials", bench_trials, "trials per cell (preset default when omitted)");
    bench->add_option("--seed", bench_seed, "base seed");
    bench->add_option("--mode", bench_mode, "exact|halfp (preset default when omitted)");
    bench->add_option("--density", bench_density, "sparsity density (preset default when omitted)");
    bench->add_option("--max-p", bench_max_p, "resource guard on sensor count");
    bench->add_option("--out", bench_out, "output directory");

    // bound
    auto* bound = app.add_subcommand("bound", "Detectability threshold and iteration cap for a system");
    std::string bound_system, bound_out;
    int bound_s_bar = 1, bound_s = 1, bound_T = 0;
    double bound_epsilon = 1e-5;
    bound->add_option("--system", bound_system, "system JSON file")->required();
    bound->add_option("--s-bar", bound_s_bar, "attack budget")->required();
    bound->add_option("--s", bound_s, "true attacked count")->required();
    bound->add_option("--T", bound_T, "window length (default n)");
    bound->add_option("--epsilon", bound_epsilon, "solution accuracy");
    bound->add_option("--out", bound_out, "write report JSON here");

    // oracle
    auto* orc = app.add_subcommand("oracle", "Brute-force minimum-support enumeration");
    std::string orc_system, orc_scenario, orc_out;
    double orc_epsilon = 1e-5;
    int orc_s_bar = -1;
    bool orc_all = false;
    orc->add_option("--system", orc_system, "system JSON file")->required();
    orc->add_option("--scenario", orc_scenario, "scenario JSON file")->required();
    orc->add_option("--epsilon", orc_epsilon, "solution accuracy");
    orc->add_option("--s-bar", orc_s_bar, "attack budget (default: computed)");
    orc->add_flag("--all", orc_all, "list every feasible support up to s_bar");
    orc->add_option("--out", orc_out, "write report JSON here");

    try {
        app.parse(argc, argv);

        if (gen->parsed()) {
            const auto preset = sse::parse_preset(gen_preset);
            if (!preset) { throw CLI::ValidationError("unknown preset: " + gen_preset); }
            sse::ExperimentConfig cfg = sse::preset_config(*preset);
            if (gen->count("--trials")) { cfg.trials = gen_cfg.trials; }
            if (gen->count("--seed")) { cfg.seed = gen_cfg.seed; }
            if (gen->count("--epsilon")) { cfg.epsilon = gen_cfg.epsilon; }
            if (gen->count("--density")) { cfg.density = gen_cfg.density; }
            return cmd_generate(cfg, gen_out);
        }
        if (est->parsed()) {
            return cmd_estimate(est_system, est_scenario, est_epsilon, parse_mode(est_mode), est_s_bar,
                                est_trace, est_out, est_oracle);
        }
        if (bench->parsed()) {
            const auto preset = sse::parse_preset(bench_preset);
            if (!preset) { throw CLI::ValidationError("unknown preset: " + bench_preset); }
            sse::ExperimentConfig cfg = sse::preset_config(*preset);
            if (bench_trials > 0) { cfg.trials = bench_trials; }
            cfg.seed = bench_seed;
            cfg.max_p = bench_max_p;
            if (bench_density >= 0.0) { cfg.density = bench_density; }
            if (!bench_mode.empty()) { cfg.mode = parse_mode(bench_mode); }
            return cmd_bench(cfg, bench_out);
        }
        if (bound->parsed()) {
            return cmd_bound(bound_system, bound_s_bar, bound_s, bound_T, bound_epsilon, bound_out);
        }
        if (orc->parsed()) {
            return cmd_oracle(orc_system, orc_scenario, orc_epsilon, orc_s_bar, orc_all, orc_out);
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitSolved;
}
