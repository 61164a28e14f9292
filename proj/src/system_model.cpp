#include "sse/system_model.hpp"

#include <Eigen/SVD>
#include <functional>
#include <stdexcept>

namespace sse {

LtiSystem::LtiSystem(Matrix a, Matrix c) : A(std::move(a)), C(std::move(c)) {
    if (A.rows() != A.cols()) { throw std::invalid_argument("A must be square"); }
    if (C.cols() != A.rows()) { throw std::invalid_argument("C must have n columns"); }
    if (A.rows() < 1 || C.rows() < 1) { throw std::invalid_argument("need n >= 1 and p >= 1"); }
}

Vector StackedWindow::per_sensor(int i) const {
    if (i < 1 || i > p) { throw std::domain_error("sensor index out of range"); }
    Vector out(T);
    for (int t = 0; t < T; ++t) { out(t) = Y(static_cast<Eigen::Index>(t) * p + (i - 1)); }
    return out;
}

ObservabilityMatrix build_observability(const LtiSystem& sys, int T) {
    if (T < 1) { throw std::invalid_argument("window length T must be >= 1"); }
    const int n = sys.n();
    const int p = sys.p();
    ObservabilityMatrix obs;
    obs.T = T;
    obs.index_set = SensorSet::full(p);
    obs.O.resize(static_cast<Eigen::Index>(T) * p, n);
    Matrix block = sys.C;  // C * A^t, updated in place
    for (int t = 0; t < T; ++t) {
        obs.O.middleRows(static_cast<Eigen::Index>(t) * p, p) = block;
        if (t + 1 < T) { block = block * sys.A; }
    }
    return obs;
}

ObservabilityMatrix restrict(const ObservabilityMatrix& O, const SensorSet& I) {
    if (!I.subset_of(O.index_set)) { throw std::domain_error("restriction set is not a subset of index_set"); }
    const std::vector<int> current = O.index_set.to_vector();
    const int block = static_cast<int>(current.size());

    // Positions of the requested sensors inside one time block.
    std::vector<int> offsets;
    offsets.reserve(static_cast<std::size_t>(I.size()));
    for (int pos = 0; pos < block; ++pos) {
        if (I.contains(current[static_cast<std::size_t>(pos)])) { offsets.push_back(pos); }
    }

    ObservabilityMatrix out;
    out.T = O.T;
    out.index_set = I;
    out.O.resize(static_cast<Eigen::Index>(O.T) * I.size(), O.n());
    Eigen::Index row = 0;
    for (int t = 0; t < O.T; ++t) {
        for (int pos : offsets) { out.O.row(row++) = O.O.row(static_cast<Eigen::Index>(t) * block + pos); }
    }
    return out;
}

Vector stack_and_restrict(const StackedWindow& window, const SensorSet& I) {
    if (!I.subset_of(SensorSet::full(window.p))) { throw std::domain_error("sensor index out of range"); }
    const std::vector<int> sensors = I.to_vector();
    Vector out(static_cast<Eigen::Index>(window.T) * I.size());
    Eigen::Index row = 0;
    for (int t = 0; t < window.T; ++t) {
        for (int i : sensors) { out(row++) = window.Y(static_cast<Eigen::Index>(t) * window.p + (i - 1)); }
    }
    return out;
}

int numerical_rank(const Matrix& M, double rel_tol) {
    if (M.rows() == 0 || M.cols() == 0) { return 0; }
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) { return 0; }
    const double tol = static_cast<double>(std::max(M.rows(), M.cols())) * sv(0) * rel_tol;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > tol) { ++rank; }
    return rank;
}

bool for_each_subset(int p, int k, const std::function<bool(const SensorSet&)>& visit) {
    if (k < 0 || k > p) { throw std::invalid_argument("subset size out of range"); }
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) { pick[static_cast<std::size_t>(i)] = i + 1; }
    while (true) {
        SensorSet s;
        for (int v : pick) { s.insert(v); }
        if (!visit(s)) { return false; }
        // Advance to the next combination in lexicographic order.
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == p - (k - 1 - i)) { --i; }
        if (i < 0) { return true; }
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

bool is_sparse_observable(const LtiSystem& sys, int k, int T, double rank_rel_tol) {
    const int p = sys.p();
    const int n = sys.n();
    if (k < 0 || k > p) { throw std::invalid_argument("removal count k must be in 0..p"); }
    const int kept = p - k;
    if (static_cast<long>(T) * kept < n) { return false; }  // too few rows to reach rank n

    const ObservabilityMatrix full = build_observability(sys, T);
    return for_each_subset(p, kept, [&](const SensorSet& I) {
        return numerical_rank(restrict(full, I).O, rank_rel_tol) == n;
    });
}

int max_allowable_attacks(const LtiSystem& sys, int T) {
    const int p = sys.p();
    const int cap = (p + 1) / 2 - 1;
    for (int s_bar = cap; s_bar >= 0; --s_bar) {
        if (is_sparse_observable(sys, 2 * s_bar, T)) { return s_bar; }
    }
    return 0;
}

}  // namespace sse
