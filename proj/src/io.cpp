#include "sse/io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace sse {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) { rows.push_back(m(r, c)); }
    }
    return rows;
}

Matrix matrix_from_json(const json& flat, Eigen::Index rows, Eigen::Index cols) {
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
        throw std::runtime_error("matrix entry count does not match declared shape");
    }
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) { m(r, c) = flat.at(static_cast<std::size_t>(k++)).get<double>(); }
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) { out.push_back(v(i)); }
    return out;
}

Vector vector_from_json(const json& arr) {
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) { v(i) = arr.at(static_cast<std::size_t>(i)).get<double>(); }
    return v;
}

void write_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) { throw std::runtime_error("cannot open for writing: " + path.string()); }
    out << j.dump(2) << "\n";
}

json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) { throw std::runtime_error("cannot open for reading: " + path.string()); }
    json j;
    in >> j;
    return j;
}

json sensors_to_json(const SensorSet& s) {
    json out = json::array();
    for (int i : s.to_vector()) { out.push_back(i); }
    return out;
}

SensorSet sensors_from_json(const json& arr) {
    SensorSet s;
    for (const auto& v : arr) { s.insert(v.get<int>()); }
    return s;
}

json node_to_json(const TraceNode& v) {
    return json{{"level", v.level},
                {"value", v.value},
                {"attack_free", v.attack_free},
                {"residual", v.residual}};
}

json result_to_json(const EstimationResult& r) {
    return json{{"x_hat", vector_to_json(r.x_hat)},
                {"attacked", sensors_to_json(r.attacked)},
                {"attack_free", sensors_to_json(r.attack_free)},
                {"iterations", r.iterations},
                {"status", to_string(r.status)},
                {"runtime_ms", r.runtime.count()}};
}

json bound_to_json(const BoundReport& r) {
    json j{{"p", r.p},     {"n", r.n},         {"T", r.T},
           {"s_bar", r.s_bar}, {"s", r.s},     {"n_upper", r.n_upper}};
    if (r.has_delta) {
        j["delta_s"] = r.delta_s;
        j["threshold"] = r.threshold;
    } else {
        j["delta_s"] = nullptr;
        j["threshold"] = nullptr;
    }
    return j;
}

json oracle_to_json(const OracleReport& r) {
    json minimal = json::array();
    for (const auto& s : r.minimal_supports) { minimal.push_back(sensors_to_json(s)); }
    json all = json::array();
    for (const auto& s : r.all_feasible) { all.push_back(sensors_to_json(s)); }
    return json{{"minimal_supports", minimal},
                {"all_feasible", all},
                {"cardinality_checked", r.cardinality_checked},
                {"feasible", r.feasible()}};
}

}  // namespace

void save_system(const LtiSystem& sys, const std::filesystem::path& path) {
    write_file(json{{"n", sys.n()},
                    {"p", sys.p()},
                    {"A", matrix_to_json(sys.A)},
                    {"C", matrix_to_json(sys.C)}},
               path);
}

LtiSystem load_system(const std::filesystem::path& path) {
    const json j = read_file(path);
    const auto n = j.at("n").get<Eigen::Index>();
    const auto p = j.at("p").get<Eigen::Index>();
    return LtiSystem(matrix_from_json(j.at("A"), n, n), matrix_from_json(j.at("C"), p, n));
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    json signals = json::array();
    for (const auto& [sensor, signal] : scenario.attack.signals) {
        signals.push_back(json{{"sensor", sensor}, {"signal", vector_to_json(signal)}});
    }
    write_file(json{{"system", scenario.system_ref},
                    {"x0", vector_to_json(scenario.x0)},
                    {"T", scenario.T},
                    {"noise",
                     {{"kind", scenario.noise.kind == NoiseKind::None ? "none" : "truncated_gaussian"},
                      {"sigma", scenario.noise.sigma},
                      {"k", scenario.noise.k}}},
                    {"attack",
                     {{"scheme", to_string(scenario.attack.scheme)},
                      {"magnitude", scenario.attack.magnitude},
                      {"support", sensors_to_json(scenario.attack.support)},
                      {"signals", signals}}},
                    {"seed", scenario.seed}},
               path);
}

Scenario load_scenario(const std::filesystem::path& path) {
    const json j = read_file(path);
    Scenario s;
    s.system_ref = j.at("system").get<std::string>();
    s.x0 = vector_from_json(j.at("x0"));
    s.T = j.at("T").get<int>();
    const json& noise = j.at("noise");
    const std::string kind = noise.at("kind").get<std::string>();
    if (kind == "none") {
        s.noise = NoiseModel::none();
    } else if (kind == "truncated_gaussian") {
        s.noise = NoiseModel::truncated_gaussian(noise.at("sigma").get<double>(), noise.at("k").get<double>());
    } else {
        throw std::runtime_error("unknown noise kind: " + kind);
    }
    const json& attack = j.at("attack");
    const std::string scheme = attack.at("scheme").get<std::string>();
    if (scheme != "greedy" && scheme != "random") {
        throw std::runtime_error("unknown attack scheme: " + scheme);
    }
    s.attack.scheme = scheme == "greedy" ? AttackScheme::Greedy : AttackScheme::Random;
    s.attack.magnitude = attack.at("magnitude").get<double>();
    s.attack.support = sensors_from_json(attack.at("support"));
    for (const auto& entry : attack.at("signals")) {
        s.attack.signals.emplace(entry.at("sensor").get<int>(), vector_from_json(entry.at("signal")));
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

void save_result(const EstimationResult& result, const std::filesystem::path& path) {
    write_file(result_to_json(result), path);
}

void save_trace(const TraceResult& trace, const std::filesystem::path& path) {
    json entries = json::array();
    for (const TraceEntry& e : trace.log) {
        json frontier = json::array();
        for (const auto& v : e.frontier) { frontier.push_back(node_to_json(v)); }
        json explored = json::array();
        for (const auto& v : e.explored) { explored.push_back(node_to_json(v)); }
        json repo = json::array();
        for (const auto& v : e.repo) { repo.push_back(node_to_json(v)); }
        entries.push_back(json{{"iteration", e.iteration},
                               {"frontier", frontier},
                               {"explored", explored},
                               {"repo", repo}});
    }
    write_file(json{{"result", result_to_json(trace.result)}, {"log", entries}}, path);
}

void save_bound_report(const BoundReport& report, const std::filesystem::path& path) {
    write_file(bound_to_json(report), path);
}

void save_oracle_report(const OracleReport& report, const std::filesystem::path& path) {
    write_file(oracle_to_json(report), path);
}

void save_window_csv(const StackedWindow& window, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) { throw std::runtime_error("cannot open for writing: " + path.string()); }
    out.precision(17);
    for (int i = 1; i <= window.p; ++i) { out << (i > 1 ? "," : "") << "y" << i; }
    out << "\n";
    for (int t = 0; t < window.T; ++t) {
        for (int i = 0; i < window.p; ++i) {
            out << (i > 0 ? "," : "") << window.Y(static_cast<Eigen::Index>(t) * window.p + i);
        }
        out << "\n";
    }
}

StackedWindow realize(const Scenario& scenario, const LtiSystem& sys) {
    return simulate_window(sys, scenario.x0, scenario.T, scenario.noise, scenario.attack, scenario.seed);
}

std::string to_json_string(const EstimationResult& result) { return result_to_json(result).dump(2); }
std::string to_json_string(const BoundReport& report) { return bound_to_json(report).dump(2); }
std::string to_json_string(const OracleReport& report) { return oracle_to_json(report).dump(2); }

}  // namespace sse
