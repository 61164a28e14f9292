#include "sse/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sse {

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int top, int bottom) {
    if (bottom < 0 || bottom > top) { return 0; }
    BigInt result = 1;
    for (int i = 1; i <= bottom; ++i) {
        result *= top - (bottom - i);
        result /= i;
    }
    return result;
}

std::string describe_set(const SensorSet& s) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (int i : s.to_vector()) {
        os << (first ? "" : ",") << i;
        first = false;
    }
    os << "}";
    return os.str();
}

}  // namespace

double delta_s(const LtiSystem& sys, int s_bar, int T) {
    const int p = sys.p();
    const int n = sys.n();
    if (p > 16) { throw std::invalid_argument("delta_s is combinatorially intractable for p > 16"); }
    if (s_bar < 0 || 2 * s_bar > p) { throw std::invalid_argument("require 0 <= s_bar <= p/2"); }
    if (s_bar == 0) { return 0.0; }

    const ObservabilityMatrix full = build_observability(sys, T);
    std::vector<Matrix> gram(static_cast<std::size_t>(p));
    for (int i = 1; i <= p; ++i) {
        const Matrix O_i = restrict(full, SensorSet{i}).O;
        gram[static_cast<std::size_t>(i - 1)] = O_i.transpose() * O_i;
    }

    // The pencil eigenvalue is monotone in both arguments: enlarging Gamma
    // grows the numerator quadratic form, and shrinking I shrinks the
    // denominator one. The maximum over the full constraint set is therefore
    // attained at |I| = p - s_bar and |Gamma| = s_bar, which is all we
    // enumerate. Singular Sigma_I is still diagnosed for every visited I.
    double worst = 0.0;
    for_each_subset(p, p - s_bar, [&](const SensorSet& I) {
        Matrix sigma_I = Matrix::Zero(n, n);
        for (int i : I.to_vector()) { sigma_I += gram[static_cast<std::size_t>(i - 1)]; }

        Eigen::LDLT<Matrix> ldlt(sigma_I);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().minCoeff() <= n * 1e-14 * ldlt.vectorD().maxCoeff()) {
            throw std::runtime_error("delta_s: singular sensor Gramian for I = " + describe_set(I) +
                                     "; the system is not sufficiently sparse observable");
        }

        const std::vector<int> members = I.to_vector();
        const int gamma_size = std::min<int>(s_bar, static_cast<int>(members.size()));
        for_each_subset(static_cast<int>(members.size()), gamma_size, [&](const SensorSet& pick) {
            Matrix sigma_gamma = Matrix::Zero(n, n);
            for (int pos : pick.to_vector()) {
                sigma_gamma += gram[static_cast<std::size_t>(members[static_cast<std::size_t>(pos - 1)] - 1)];
            }
            Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(sigma_gamma, sigma_I,
                                                                 Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
            worst = std::max(worst, eig.eigenvalues().maxCoeff());
            return true;
        });
        return true;
    });
    return worst;
}

double attack_threshold(double delta, double w_bar_global, double epsilon) {
    if (w_bar_global < 0.0 || epsilon < 0.0) { throw std::domain_error("bounds must be nonnegative"); }
    if (delta >= 1.0) {
        throw std::domain_error("attack threshold undefined: delta_s >= 1 (system too close to losing "
                                "observability on some sensor subset)");
    }
    const double root = std::sqrt(1.0 - delta);
    return 2.0 * w_bar_global / root + std::sqrt(epsilon) / root;
}

std::uint64_t n_upper(int p, int s_bar, int s) {
    if (p < 1) { throw std::invalid_argument("p must be >= 1"); }
    if (s_bar < 0 || s_bar > (p + 1) / 2 - 1) {
        throw std::invalid_argument("s_bar must be in 0..ceil(p/2)-1");
    }
    if (s < 0 || s > p) { throw std::invalid_argument("s must be in 0..p"); }

    const int S = p - 2 * s_bar;
    BigInt total = p;
    if (S > 0) {
        BigInt paths = 0;
        for (int i = 1; i <= S; ++i) { paths += binomial(s, i) * binomial(s_bar + S - s, S - i); }
        total += paths * (s_bar + S);
    }
    if (total > BigInt(~std::uint64_t{0})) { throw std::overflow_error("n_upper exceeds 64 bits"); }
    return static_cast<std::uint64_t>(total);
}

BoundReport bound_report(const LtiSystem& sys, int s_bar, int s, int T, double epsilon,
                         double w_bar_global) {
    BoundReport report;
    report.p = sys.p();
    report.n = sys.n();
    report.T = T;
    report.s_bar = s_bar;
    report.s = s;
    report.n_upper = n_upper(report.p, s_bar, s);
    if (report.p <= 16) {
        report.delta_s = delta_s(sys, s_bar, T);
        report.threshold = attack_threshold(report.delta_s, w_bar_global, epsilon);
        report.has_delta = true;
    }
    return report;
}

}  // namespace sse
