#include <doctest.h>

#include "fixtures.hpp"
#include "sse/rng.hpp"
#include "sse/scenario.hpp"
#include "sse/system_model.hpp"

using namespace sse;

namespace {

Matrix random_matrix(Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) { m(r, c) = rng.uniform(-1.0, 1.0); }
    }
    return m;
}

// Independent route: each block computed by a fresh t-fold multiply.
Matrix power_product(const Matrix& C, const Matrix& A, int t) {
    Matrix result = C;
    for (int k = 0; k < t; ++k) { result = result * A; }
    return result;
}

}  // namespace

TEST_CASE("observability matrix identity cases") {
    const LtiSystem sys(Matrix::Identity(2, 2), Matrix::Identity(2, 2));

    const ObservabilityMatrix o1 = build_observability(sys, 1);
    CHECK(o1.O.isApprox(Matrix::Identity(2, 2)));
    CHECK(o1.index_set == SensorSet::full(2));

    const ObservabilityMatrix o2 = build_observability(sys, 2);
    REQUIRE(o2.O.rows() == 4);
    CHECK(o2.O.topRows(2).isApprox(Matrix::Identity(2, 2)));
    CHECK(o2.O.bottomRows(2).isApprox(Matrix::Identity(2, 2)));
}

TEST_CASE("observability blocks equal C A^t computed independently") {
    Rng rng(11);
    const Matrix A = random_matrix(rng, 3, 3);
    const Matrix C = random_matrix(rng, 2, 3);
    const LtiSystem sys(A, C);
    const ObservabilityMatrix obs = build_observability(sys, 3);
    REQUIRE(obs.O.rows() == 6);
    for (int t = 0; t < 3; ++t) {
        const Matrix expected = power_product(C, A, t);
        CHECK(obs.O.middleRows(2 * t, 2).isApprox(expected, 1e-12));
    }
}

TEST_CASE("restrict selects sensors inside each time block") {
    Rng rng(23);
    const Matrix A = random_matrix(rng, 3, 3);
    const Matrix C = random_matrix(rng, 4, 3);
    const LtiSystem sys(A, C);
    const ObservabilityMatrix full = build_observability(sys, 3);

    SUBCASE("full restriction is identity") {
        const ObservabilityMatrix same = restrict(full, SensorSet::full(4));
        CHECK(same.O.isApprox(full.O));
    }
    SUBCASE("empty restriction has zero rows") {
        const ObservabilityMatrix empty = restrict(full, SensorSet{});
        CHECK(empty.O.rows() == 0);
        CHECK(empty.O.cols() == 3);
    }
    SUBCASE("restrict commutes with building from the restricted output map") {
        const SensorSet I{1, 3};
        const ObservabilityMatrix restricted = restrict(full, I);
        Matrix C_I(2, 3);
        C_I.row(0) = C.row(0);
        C_I.row(1) = C.row(2);
        const ObservabilityMatrix direct = build_observability(LtiSystem(A, C_I), 3);
        CHECK(restricted.O.isApprox(direct.O, 1e-10));
    }
    SUBCASE("restriction outside index_set is an error") {
        const ObservabilityMatrix sub = restrict(full, SensorSet{1, 2});
        CHECK_THROWS_AS(restrict(sub, SensorSet{3}), std::domain_error);
    }
    SUBCASE("restrict is idempotent") {
        const SensorSet I{2, 4};
        const ObservabilityMatrix once = restrict(full, I);
        const ObservabilityMatrix twice = restrict(once, I);
        CHECK(once.O.isApprox(twice.O));
    }
}

TEST_CASE("stack_and_restrict matches per-sensor extraction") {
    const LtiSystem sys = testing::four_sensor_system();
    const Vector x0 = (Vector(2) << 0.3, -0.9).finished();
    const StackedWindow w = simulate_window(sys, x0, 2, NoiseModel::none(), AttackScenario{}, 5);

    SUBCASE("full set returns Y itself") {
        CHECK(stack_and_restrict(w, SensorSet::full(4)).isApprox(w.Y));
    }
    SUBCASE("singleton equals per_sensor") {
        for (int i = 1; i <= 4; ++i) { CHECK(stack_and_restrict(w, SensorSet{i}).isApprox(w.per_sensor(i))); }
    }
    SUBCASE("noiseless attack-free window satisfies Y_I = O_I x0 for any I") {
        const ObservabilityMatrix full = build_observability(sys, 2);
        for (std::uint64_t bits = 0; bits < 16; ++bits) {
            const SensorSet I = SensorSet::from_bits(bits);
            const Vector lhs = stack_and_restrict(w, I);
            const Vector rhs = restrict(full, I).O * x0;
            CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
    SUBCASE("length and sub-vector property") {
        Rng rng(99);
        for (int rep = 0; rep < 50; ++rep) {
            const SensorSet I = SensorSet::from_bits(rng.next_u64() & 0xF);
            const Vector sel = stack_and_restrict(w, I);
            CHECK(sel.size() == 2 * I.size());
            for (Eigen::Index k = 0; k < sel.size(); ++k) {
                bool found = false;
                for (Eigen::Index j = 0; j < w.Y.size() && !found; ++j) { found = sel(k) == w.Y(j); }
                CHECK(found);
            }
        }
    }
    SUBCASE("out-of-range sensor is an error") {
        CHECK_THROWS_AS(stack_and_restrict(w, SensorSet{5}), std::domain_error);
    }
}

TEST_CASE("sparse observability") {
    SUBCASE("k = 0 is plain observability") {
        const LtiSystem sys = testing::four_sensor_system();
        CHECK(is_sparse_observable(sys, 0, 2));
    }
    SUBCASE("diagonal C loses a state per removed sensor") {
        const LtiSystem sys(Matrix::Identity(3, 3), Matrix::Identity(3, 3));
        CHECK(is_sparse_observable(sys, 0, 1));
        CHECK_FALSE(is_sparse_observable(sys, 1, 1));
    }
    SUBCASE("fixture system is 3-sparse observable") {
        CHECK(is_sparse_observable(testing::four_sensor_system(), 3, 2));
    }
    SUBCASE("too few remaining rows returns false") {
        const LtiSystem sys(Matrix::Identity(3, 3), Matrix::Ones(2, 3));
        CHECK_FALSE(is_sparse_observable(sys, 1, 1));  // 1 sensor * T=1 < 3 states
    }
    SUBCASE("monotone in the removal count") {
        Rng rng(3);
        for (int rep = 0; rep < 20; ++rep) {
            const LtiSystem sys = random_sparse_system(4, 5, 0.6, rng.next_u64());
            int first_false = 6;
            for (int k = 0; k <= 5; ++k) {
                if (!is_sparse_observable(sys, k, 4)) {
                    first_false = k;
                    break;
                }
            }
            for (int k = first_false; k <= 5; ++k) { CHECK_FALSE(is_sparse_observable(sys, k, 4)); }
        }
    }
}

TEST_CASE("max allowable attacks") {
    SUBCASE("unobservable system tolerates nothing") {
        const LtiSystem sys(Matrix::Zero(2, 2), Matrix::Zero(3, 2));
        CHECK(max_allowable_attacks(sys, 2) == 0);
    }
    SUBCASE("fixture reaches the ceil(p/2)-1 cap") {
        CHECK(max_allowable_attacks(testing::four_sensor_system(), 2) == 1);
    }
    SUBCASE("random 10-sensor systems land in the 2..4 budget classes") {
        int found = 0;
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            const LtiSystem sys = random_sparse_system(10, 10, 0.3, seed);
            const int s_bar = max_allowable_attacks(sys, 10);
            CHECK(s_bar <= 4);
            if (s_bar >= 2) { ++found; }
        }
        CHECK(found >= 6);  // the majority of draws
    }
}

TEST_CASE("constructor and argument validation") {
    CHECK_THROWS_AS(LtiSystem(Matrix::Ones(2, 3), Matrix::Ones(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(LtiSystem(Matrix::Ones(2, 2), Matrix::Ones(1, 3)), std::invalid_argument);
    const LtiSystem sys = testing::four_sensor_system();
    CHECK_THROWS_AS(build_observability(sys, 0), std::invalid_argument);
    CHECK_THROWS_AS(is_sparse_observable(sys, 5, 2), std::invalid_argument);

    SensorSet s;
    CHECK_THROWS_AS(s.insert(0), std::invalid_argument);
    CHECK_THROWS_AS(s.insert(65), std::invalid_argument);
    CHECK_FALSE(s.contains(0));
    CHECK_FALSE(s.contains(99));
}

TEST_CASE("restrict keeps the window length and records the new index set") {
    const LtiSystem sys = testing::four_sensor_system();
    const ObservabilityMatrix full = build_observability(sys, 2);
    const ObservabilityMatrix sub = restrict(full, SensorSet{2, 4});
    CHECK(sub.T == 2);
    CHECK(sub.index_set == SensorSet{2, 4});
    CHECK(sub.O.rows() == 4);
    CHECK(sub.n() == 2);
}

TEST_CASE("subset enumeration is lexicographic and complete") {
    std::vector<std::vector<int>> seen;
    for_each_subset(4, 2, [&](const SensorSet& s) {
        seen.push_back(s.to_vector());
        return true;
    });
    const std::vector<std::vector<int>> expected = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    CHECK(seen == expected);
}
