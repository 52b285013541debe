// Copyright 2026 The biphoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>

#include "biphoton/metrics.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace biphoton;

TEST_CASE("density matrix validation") {
    CHECK_THROWS_AS(DensityMatrix(Eigen::MatrixXcd::Identity(2, 3)), std::invalid_argument);
    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Identity(2, 2);
    neg(1, 1) = -0.5;
    neg(0, 0) = 1.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
    CHECK_THROWS(DensityMatrix::from_unnormalized(Eigen::MatrixXcd::Zero(2, 2)));
    CHECK_THROWS_AS(DensityMatrix::maximally_mixed(6, Bipartition{2, 2}), std::invalid_argument);
}

TEST_CASE("pure and mixed metrics") {
    std::mt19937_64 rng(1);
    const Eigen::VectorXcd psi = testing::random_unit_vector(3, rng);
    const DensityMatrix pure = DensityMatrix::from_pure(psi);
    CHECK(fidelity(pure, psi) == doctest::Approx(1.0));
    CHECK(linear_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(3);
    CHECK(linear_entropy(mixed) == doctest::Approx(1.0));
    CHECK(fidelity(mixed, psi) == doctest::Approx(1.0 / 3.0));
    CHECK(state_fidelity(mixed, pure) == doctest::Approx(1.0 / 3.0));
    CHECK(trace_distance(pure, pure) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(trace_distance(mixed, pure) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS(fidelity(pure, Eigen::VectorXcd::Ones(2) / std::sqrt(2.0)));
}

TEST_CASE("negativity") {
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(6);
    bell(0) = bell(4) = std::sqrt(0.5);
    const DensityMatrix b = DensityMatrix::from_pure(bell, Bipartition{2, 3});
    CHECK(negativity(b) == doctest::Approx(1.0));
    Eigen::VectorXcd product = Eigen::VectorXcd::Zero(6);
    product(1) = 1.0;
    CHECK(negativity(DensityMatrix::from_pure(product, Bipartition{2, 3})) < 1e-12);
    CHECK_THROWS_AS(negativity(DensityMatrix::from_pure(product)), std::invalid_argument);

    std::mt19937_64 rng(2);
    for (int k = 0; k < 10; ++k) {
        const DensityMatrix r(testing::random_density(6, 1 + k % 4, rng), Bipartition{2, 3});
        CHECK(negativity(r) == doctest::Approx(negativity_trace_norm(r)).epsilon(1e-10));
        // Partial transpose twice is the identity.
        const Eigen::MatrixXcd pt = partial_transpose_a(partial_transpose_a(r.matrix(), {2, 3}), {2, 3});
        CHECK((pt - r.matrix()).norm() < 1e-14);
    }
}

TEST_CASE("extinction ratio") {
    CHECK(extinction_ratio(0.3, 0.1, 0.1) == doctest::Approx(2.0));
    CHECK(std::isinf(extinction_ratio(0.1, 0.0, 0.1)));
    CHECK_THROWS_AS(extinction_ratio(0.0, 0.0, 0.0), std::invalid_argument);
}
