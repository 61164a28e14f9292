#include "sse/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sse/rng.hpp"

namespace sse {

namespace {

double auto_density(const ExperimentConfig& cfg, int n) {
    if (cfg.density > 0.0) { return cfg.density; }
    // Keep the expected spectral radius of A near 1 so that A^(T-1) stays
    // representable; 0.3 matches the small-system protocol.
    return std::min(0.3, 2.0 / n);
}

int auto_window(const ExperimentConfig& cfg, int n) { return cfg.T > 0 ? cfg.T : n; }

double auto_magnitude(const ExperimentConfig& cfg, double threshold, double w_bar_global) {
    if (cfg.magnitude > 0.0) { return cfg.magnitude; }
    if (threshold > 0.0) { return 1.25 * threshold; }
    // No computable threshold (large p): pick a strength that clearly
    // clears the feasibility slack.
    return std::max(1.0, 10.0 * (w_bar_global + std::sqrt(cfg.epsilon)));
}

}  // namespace

ExperimentConfig preset_config(Preset preset) {
    ExperimentConfig cfg;
    cfg.preset = preset;
    switch (preset) {
        case Preset::SmallOptimality:
            cfg.p_values = {10};
            cfg.n_values = {10};
            cfg.schemes = {AttackScheme::Greedy, AttackScheme::Random};
            cfg.s_equals_s_bar = true;
            cfg.mode = SearchMode::Exact;
            cfg.density = 0.3;
            cfg.trials = 50;
            break;
        case Preset::ScalingP:
            cfg.p_values = {20, 40, 60};
            cfg.n_values = {40};
            cfg.fractions = {0.3};
            cfg.schemes = {AttackScheme::Random};
            cfg.trials = 15;
            break;
        case Preset::ScalingN:
            cfg.p_values = {20, 40};
            cfg.n_values = {20, 40, 60};
            cfg.fractions = {0.3};
            cfg.schemes = {AttackScheme::Random};
            cfg.trials = 15;
            break;
        case Preset::NoiselessBench:
            cfg.p_values = {20, 40, 60};
            cfg.n_values = {20, 40, 60};
            cfg.fractions = {0.1, 0.2, 0.3};
            cfg.schemes = {AttackScheme::Greedy, AttackScheme::Random};
            cfg.trials = 25;
            break;
        case Preset::NoisyBench:
            cfg.p_values = {20, 40, 60};
            cfg.n_values = {20, 40, 60};
            cfg.fractions = {0.1, 0.2, 0.3};
            cfg.schemes = {AttackScheme::Greedy, AttackScheme::Random};
            cfg.noise = NoiseModel::truncated_gaussian(0.01, 2.0);
            cfg.trials = 25;
            break;
        case Preset::Custom:
            break;
    }
    return cfg;
}

std::optional<Preset> parse_preset(const std::string& name) {
    if (name == "small-optimality") { return Preset::SmallOptimality; }
    if (name == "scaling-p") { return Preset::ScalingP; }
    if (name == "scaling-n") { return Preset::ScalingN; }
    if (name == "noiseless") { return Preset::NoiselessBench; }
    if (name == "noisy") { return Preset::NoisyBench; }
    if (name == "custom") { return Preset::Custom; }
    return std::nullopt;
}

const char* to_string(Preset preset) {
    switch (preset) {
        case Preset::SmallOptimality: return "small-optimality";
        case Preset::ScalingP: return "scaling-p";
        case Preset::ScalingN: return "scaling-n";
        case Preset::NoiselessBench: return "noiseless";
        case Preset::NoisyBench: return "noisy";
        case Preset::Custom: return "custom";
    }
    return "custom";
}

DrawnSystem draw_system(int n, int p, double density, int T, const NoiseModel& noise, double epsilon,
                        int min_s_bar, bool need_threshold, std::uint64_t seed) {
    std::uint64_t sys_seed = Rng::mix(seed, 0x5e57);
    for (int attempt = 0; attempt <= 300; ++attempt) {
        DrawnSystem out;
        out.sys = random_sparse_system(n, p, density, sys_seed);
        sys_seed = Rng::mix(sys_seed, 0xdead + static_cast<std::uint64_t>(attempt));

        out.w_bars = noise_bounds(noise, out.sys, T);
        out.w_bar_global = combine_noise_bound(out.w_bars, SensorSet::full(p));
        if (min_s_bar < 0) { return out; }

        out.s_bar = max_allowable_attacks(out.sys, T);
        if (out.s_bar < min_s_bar) { continue; }
        if (!need_threshold) { return out; }

        // The detectability threshold exists only while the worst subset
        // eigenvalue ratio stays below one; redraw degenerate systems.
        try {
            const double delta = delta_s(out.sys, out.s_bar, T);
            if (delta >= 1.0 - 1e-12) { continue; }
            out.threshold = attack_threshold(delta, out.w_bar_global, epsilon);
        } catch (const std::exception&) {
            continue;
        }
        return out;
    }
    throw std::runtime_error("no usable system found after 300 draws");
}

TrialOutcome run_trial(const ExperimentConfig& cfg, int p, int n, int s, AttackScheme scheme,
                       std::uint64_t seed) {
    const double density = auto_density(cfg, n);
    const int T = auto_window(cfg, n);

    TrialOutcome out;

    const bool exact = cfg.mode == SearchMode::Exact;
    const bool need_threshold = exact && p <= 16 && cfg.magnitude <= 0.0;
    const int min_s_bar = exact ? (cfg.s_equals_s_bar ? 1 : s) : -1;
    DrawnSystem drawn =
        draw_system(n, p, density, T, cfg.noise, cfg.epsilon, min_s_bar, need_threshold, seed);
    out.system = std::move(drawn.sys);
    out.threshold = drawn.threshold;
    out.w_bar_global = drawn.w_bar_global;
    if (cfg.s_equals_s_bar) { s = drawn.s_bar; }
    out.s_bar_used = exact ? drawn.s_bar : (p + 1) / 2 - 1;

    const std::vector<double>& w_bars = drawn.w_bars;
    const double magnitude = auto_magnitude(cfg, out.threshold, out.w_bar_global);

    Rng x0_rng(Rng::mix(seed, 0x0f1e));
    Vector x0(n);
    for (int i = 0; i < n; ++i) { x0(i) = x0_rng.uniform(-1.0, 1.0); }

    out.scenario.x0 = x0;
    out.scenario.T = T;
    out.scenario.noise = cfg.noise;
    out.scenario.attack = generate_attack(scheme, p, s, magnitude, T, Rng::mix(seed, 0xa77a));
    out.scenario.seed = Rng::mix(seed, 0x0153);

    const StackedWindow window = realize(out.scenario, out.system);
    out.estimation = secure_estimate(window, out.system, w_bars, cfg.epsilon, out.s_bar_used, cfg.mode);

    TrialRecord& rec = out.record;
    rec.p = p;
    rec.n = n;
    rec.s = s;
    rec.scheme = scheme;
    rec.noise = cfg.noise.kind;
    rec.seed = seed;
    rec.iterations = out.estimation.iterations;
    rec.runtime_ms = out.estimation.runtime.count();
    rec.status = out.estimation.status;
    rec.identified_correctly = out.estimation.status == SearchStatus::Solved &&
                               out.estimation.attacked == out.scenario.attack.support;
    const double x0_norm = x0.norm();
    rec.relative_error = (out.estimation.status == SearchStatus::Solved && x0_norm > 0.0)
                             ? (x0 - out.estimation.x_hat).norm() / x0_norm
                             : std::numeric_limits<double>::quiet_NaN();
    return out;
}

int thread_cap() {
    if (const char* env = std::getenv("SSE_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) { return v; }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) { fn(i); }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) { first_error = std::current_exception(); }
                }
            }
        });
    }
    for (auto& t : pool) { t.join(); }
    if (first_error) { std::rethrow_exception(first_error); }
}

BenchResult run_bench(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) { throw std::invalid_argument("trials must be >= 1"); }
    if (cfg.p_values.empty() || cfg.n_values.empty() || cfg.schemes.empty()) {
        throw std::invalid_argument("config needs nonempty p, n, and scheme lists");
    }
    if (!cfg.s_equals_s_bar && cfg.fractions.empty()) {
        throw std::invalid_argument("config needs attack fractions (or the s = s_bar protocol)");
    }

    struct Cell {
        int p, n;
        double fraction;
        AttackScheme scheme;
    };
    std::vector<Cell> cells;
    for (int p : cfg.p_values) {
        for (int n : cfg.n_values) {
            if (p > cfg.max_p || n > cfg.max_n) {
                throw std::invalid_argument("cell exceeds the resource guard (p <= " +
                                            std::to_string(cfg.max_p) + ", n <= " +
                                            std::to_string(cfg.max_n) + ")");
            }
            const std::vector<double> fracs = cfg.s_equals_s_bar ? std::vector<double>{0.0} : cfg.fractions;
            for (double f : fracs) {
                const int s = std::max(1, static_cast<int>(std::lround(f * p)));
                if (!cfg.s_equals_s_bar && s > (p + 1) / 2 - 1) {
                    throw std::invalid_argument("attack fraction " + std::to_string(f) +
                                                " yields s above ceil(p/2)-1 at p = " + std::to_string(p));
                }
                for (AttackScheme scheme : cfg.schemes) { cells.push_back({p, n, f, scheme}); }
            }
        }
    }

    const std::size_t total = cells.size() * static_cast<std::size_t>(cfg.trials);
    BenchResult result;
    result.records.resize(total);
    result.stats.resize(total);

    parallel_for_index(total, [&](std::size_t idx) {
        const std::size_t cell_idx = idx / static_cast<std::size_t>(cfg.trials);
        const std::size_t trial_idx = idx % static_cast<std::size_t>(cfg.trials);
        const Cell& cell = cells[cell_idx];
        const int s = cfg.s_equals_s_bar
                          ? 0
                          : std::max(1, static_cast<int>(std::lround(cell.fraction * cell.p)));
        const std::uint64_t seed = Rng::mix(cfg.seed, cell_idx + 1, trial_idx + 1);
        TrialOutcome outcome = run_trial(cfg, cell.p, cell.n, s, cell.scheme, seed);
        result.records[idx] = outcome.record;
        result.stats[idx] = outcome.estimation.stats;
    });

    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellSummary sum;
        const TrialRecord& first = result.records[c * static_cast<std::size_t>(cfg.trials)];
        sum.p = first.p;
        sum.n = first.n;
        sum.s = first.s;
        sum.scheme = cells[c].scheme;
        sum.noise = cfg.noise.kind;
        sum.trials = cfg.trials;
        sum.min_iterations = first.iterations;
        sum.max_iterations = first.iterations;
        double mean = 0.0;
        double mean_rt = 0.0;
        int wrong = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const TrialRecord& r = result.records[c * static_cast<std::size_t>(cfg.trials) +
                                                  static_cast<std::size_t>(t)];
            mean += static_cast<double>(r.iterations);
            mean_rt += r.runtime_ms;
            sum.min_iterations = std::min(sum.min_iterations, r.iterations);
            sum.max_iterations = std::max(sum.max_iterations, r.iterations);
            if (!r.identified_correctly) { ++wrong; }
        }
        mean /= cfg.trials;
        mean_rt /= cfg.trials;
        double var = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const double d = static_cast<double>(result.records[c * static_cast<std::size_t>(cfg.trials) +
                                                                static_cast<std::size_t>(t)]
                                                     .iterations) -
                             mean;
            var += d * d;
        }
        sum.mean_iterations = mean;
        sum.std_iterations = cfg.trials > 1 ? std::sqrt(var / (cfg.trials - 1)) : 0.0;
        sum.mean_runtime_ms = mean_rt;
        sum.misidentification_ratio = static_cast<double>(wrong) / cfg.trials;
        result.summaries.push_back(sum);
    }
    return result;
}

std::string records_csv_header() {
    return "p,n,s,scheme,noise,seed,iterations,runtime_ms,rel_error,identified,status";
}

std::string record_csv_row(const TrialRecord& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.p << ',' << r.n << ',' << r.s << ',' << to_string(r.scheme) << ','
       << (r.noise == NoiseKind::None ? "none" : "tgauss") << ',' << r.seed << ',' << r.iterations
       << ',' << r.runtime_ms << ',' << r.relative_error << ',' << (r.identified_correctly ? 1 : 0)
       << ',' << to_string(r.status);
    return os.str();
}

void write_records_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) { throw std::runtime_error("cannot open for writing: " + path.string()); }
    out << records_csv_header() << "\n";
    for (const TrialRecord& r : records) { out << record_csv_row(r) << "\n"; }
}

void write_summary(const std::vector<CellSummary>& summaries, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) { throw std::runtime_error("cannot open for writing: " + path.string()); }
    out << "{\n  \"cells\": [\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const CellSummary& s = summaries[i];
        out << "    {\"p\": " << s.p << ", \"n\": " << s.n << ", \"s\": " << s.s
            << ", \"scheme\": \"" << to_string(s.scheme) << "\""
            << ", \"noise\": \"" << (s.noise == NoiseKind::None ? "none" : "tgauss") << "\""
            << ", \"trials\": " << s.trials << ", \"mean_iterations\": " << s.mean_iterations
            << ", \"std_iterations\": " << s.std_iterations
            << ", \"min_iterations\": " << s.min_iterations
            << ", \"max_iterations\": " << s.max_iterations
            << ", \"mean_runtime_ms\": " << s.mean_runtime_ms
            << ", \"misidentification_ratio\": " << s.misidentification_ratio << "}"
            << (i + 1 < summaries.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

int generate_files(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    struct Cell {
        int p, n;
        double fraction;
        AttackScheme scheme;
    };
    std::vector<Cell> cells;
    for (int p : cfg.p_values) {
        for (int n : cfg.n_values) {
            const std::vector<double> fracs = cfg.s_equals_s_bar ? std::vector<double>{0.0} : cfg.fractions;
            for (double f : fracs) {
                for (AttackScheme scheme : cfg.schemes) { cells.push_back({p, n, f, scheme}); }
            }
        }
    }

    std::ofstream manifest(dir / "manifest.csv");
    manifest << "index,system,scenario,window,p,n,s,s_bar,scheme,noise,seed\n";
    int written = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int t = 0; t < cfg.trials; ++t) {
            const Cell& cell = cells[c];
            const int s = cfg.s_equals_s_bar
                              ? 0
                              : std::max(1, static_cast<int>(std::lround(cell.fraction * cell.p)));
            const std::uint64_t seed = Rng::mix(cfg.seed, c + 1, static_cast<std::uint64_t>(t) + 1);
            TrialOutcome outcome = run_trial(cfg, cell.p, cell.n, s, cell.scheme, seed);

            char tag[16];
            std::snprintf(tag, sizeof(tag), "%04d", written);
            const std::string sys_name = std::string("sys_") + tag + ".json";
            const std::string scn_name = std::string("scn_") + tag + ".json";
            const std::string win_name = std::string("win_") + tag + ".csv";
            outcome.scenario.system_ref = sys_name;
            save_system(outcome.system, dir / sys_name);
            save_scenario(outcome.scenario, dir / scn_name);
            save_window_csv(realize(outcome.scenario, outcome.system), dir / win_name);
            manifest << written << ',' << sys_name << ',' << scn_name << ',' << win_name << ','
                     << cell.p << ',' << cell.n << ',' << outcome.record.s << ','
                     << outcome.s_bar_used << ',' << to_string(cell.scheme) << ','
                     << (cfg.noise.kind == NoiseKind::None ? "none" : "tgauss") << ',' << seed << "\n";
            ++written;
        }
    }
    return written;
}

}  // namespace sse
