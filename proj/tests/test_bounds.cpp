#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <chrono>

#include "fixtures.hpp"
#include "sse/bounds.hpp"
#include "sse/rng.hpp"
#include "sse/scenario.hpp"

using namespace sse;

namespace {

// Independent route: enumerate the whole constraint set (every I with
// |I| >= p - s_bar, every Gamma inside I with |Gamma| <= s_bar) and take
// the largest real eigenvalue of the explicit product.
double delta_s_full_enumeration(const LtiSystem& sys, int s_bar, int T) {
    const int p = sys.p();
    const ObservabilityMatrix full = build_observability(sys, T);
    std::vector<Matrix> gram(static_cast<std::size_t>(p));
    for (int i = 1; i <= p; ++i) {
        const Matrix O_i = restrict(full, SensorSet{i}).O;
        gram[static_cast<std::size_t>(i - 1)] = O_i.transpose() * O_i;
    }
    double worst = 0.0;
    for (int isize = p - s_bar; isize <= p; ++isize) {
        for_each_subset(p, isize, [&](const SensorSet& I) {
            Matrix sigma_I = Matrix::Zero(sys.n(), sys.n());
            for (int i : I.to_vector()) { sigma_I += gram[static_cast<std::size_t>(i - 1)]; }
            const Matrix inv = sigma_I.inverse();
            const std::vector<int> members = I.to_vector();
            for (int gsize = 0; gsize <= s_bar; ++gsize) {
                for_each_subset(isize, gsize, [&](const SensorSet& pick) {
                    Matrix sigma_g = Matrix::Zero(sys.n(), sys.n());
                    for (int pos : pick.to_vector()) {
                        sigma_g += gram[static_cast<std::size_t>(members[static_cast<std::size_t>(pos - 1)] - 1)];
                    }
                    const Eigen::EigenSolver<Matrix> eig(sigma_g * inv);
                    worst = std::max(worst, eig.eigenvalues().real().maxCoeff());
                    return true;
                });
            }
            return true;
        });
    }
    return worst;
}

}  // namespace

TEST_CASE("iteration bound closed form") {
    CHECK(n_upper(10, 2, 2) == 226);
    CHECK(n_upper(10, 3, 3) == 248);
    CHECK(n_upper(10, 4, 4) == 94);
    CHECK(n_upper(200, 1, 20) == 39801);

    // Larger budgets at p = 200, all hand-derived from the formula (the
    // binomial products collapse to two or three terms each).
    CHECK(n_upper(200, 2, 20) == 3861594 + 200);
    CHECK(n_upper(200, 3, 20) == 247213330 + 200);
    CHECK(n_upper(200, 97, 20) == 108396498261ULL + 200);
    CHECK(n_upper(200, 98, 20) == 255052530 + 200);
    CHECK(n_upper(200, 99, 20) == 182810 + 200);

    SUBCASE("no attacks leaves only the direct path") {
        CHECK(n_upper(10, 2, 0) == 10);
        CHECK(n_upper(7, 3, 0) == 7);
    }
    SUBCASE("small hand-evaluated cases") {
        CHECK(n_upper(4, 1, 1) == 10);  // 1*C(2,1)*3 + 4
        CHECK(n_upper(5, 2, 2) == 11);  // C(2,1)*C(1,0)*3 + 5
        CHECK(n_upper(3, 1, 1) == 5);   // S = 1: C(1,1)*C(1,0)*2 + 3
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(n_upper(10, 5, 1), std::invalid_argument);  // s_bar above ceil(p/2)-1
        CHECK_THROWS_AS(n_upper(10, -1, 1), std::invalid_argument);
        CHECK_THROWS_AS(n_upper(10, 2, 11), std::invalid_argument);
    }
    SUBCASE("evaluation is well under a millisecond") {
        const auto start = std::chrono::steady_clock::now();
        const std::uint64_t value = n_upper(200, 1, 20);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        CHECK(value == 39801);
        CHECK(ms < 1.0);
    }
}

TEST_CASE("delta_s scalar fixture evaluates to one half") {
    // p = 3 identical scalar sensors: the ratio is |Gamma| / |I|, maximized
    // by one attacked sensor against the smallest admissible I of two.
    const LtiSystem sys(Matrix::Ones(1, 1), Matrix::Ones(3, 1));
    CHECK(delta_s(sys, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("delta_s equals the full-enumeration oracle on random systems") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const LtiSystem sys = random_sparse_system(3, 6, 0.8, seed);
        for (int s_bar = 1; s_bar <= 2; ++s_bar) {
            const double fast = delta_s(sys, s_bar, 3);
            const double slow = delta_s_full_enumeration(sys, s_bar, 3);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
        }
    }
}

TEST_CASE("delta_s is invariant under sensor relabeling") {
    Rng rng(4);
    const LtiSystem sys = random_sparse_system(3, 5, 0.9, 17);
    Matrix permuted_C = sys.C;
    permuted_C.row(0).swap(permuted_C.row(3));
    permuted_C.row(1).swap(permuted_C.row(4));
    const LtiSystem relabeled(sys.A, permuted_C);
    CHECK(delta_s(sys, 2, 3) == doctest::Approx(delta_s(relabeled, 2, 3)).epsilon(1e-10));
}

TEST_CASE("delta_s lies in [0, 1) for sparse-observable systems") {
    const auto fx = testing::single_attack_fixture();
    const double d = delta_s(fx.sys, 1, 2);
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
}

TEST_CASE("delta_s diagnostics") {
    SUBCASE("refuses large p") {
        const LtiSystem sys(Matrix::Identity(2, 2), Matrix::Ones(17, 2));
        CHECK_THROWS_AS(delta_s(sys, 1, 2), std::invalid_argument);
    }
    SUBCASE("names the failing subset when a Gramian is singular") {
        // Sensors 1 and 2 both read only the first state, so I = {1,2}
        // cannot span both states and its Gramian is singular.
        Matrix C(4, 2);
        C << 1, 0,
             1, 0,
             0, 0,
             0, 1;
        const LtiSystem sys(Matrix::Identity(2, 2), C);
        CHECK_THROWS_WITH_AS(delta_s(sys, 2, 1), doctest::Contains("{1,2}"), std::runtime_error);
    }
    SUBCASE("s_bar zero yields zero") {
        CHECK(delta_s(testing::four_sensor_system(), 0, 2) == 0.0);
    }
}

TEST_CASE("attack threshold formula") {
    CHECK(attack_threshold(0.0, 0.0, 0.0) == 0.0);
    CHECK(2.0 / std::sqrt(1.0 - 0.985) == doctest::Approx(16.33).epsilon(1e-3));
    CHECK(attack_threshold(0.999, 1.0, 0.0) == doctest::Approx(63.2456).epsilon(1e-4));

    SUBCASE("strictly increasing in delta and noise") {
        double prev = attack_threshold(0.0, 1.0, 1e-5);
        for (double d : {0.1, 0.5, 0.9, 0.99}) {
            const double t = attack_threshold(d, 1.0, 1e-5);
            CHECK(t > prev);
            prev = t;
        }
        CHECK(attack_threshold(0.5, 2.0, 1e-5) > attack_threshold(0.5, 1.0, 1e-5));
    }
    SUBCASE("undefined at delta >= 1") {
        CHECK_THROWS_AS(attack_threshold(1.0, 1.0, 1e-5), std::domain_error);
        CHECK_THROWS_AS(attack_threshold(1.5, 1.0, 1e-5), std::domain_error);
    }
}

TEST_CASE("bound report assembles the pieces") {
    const LtiSystem sys = testing::four_sensor_system();
    const BoundReport r = bound_report(sys, 1, 1, 2, 1e-5, 0.0);
    CHECK(r.p == 4);
    CHECK(r.n == 2);
    CHECK(r.has_delta);
    CHECK(r.n_upper == n_upper(4, 1, 1));
    CHECK(r.threshold == doctest::Approx(attack_threshold(r.delta_s, 0.0, 1e-5)));
}
