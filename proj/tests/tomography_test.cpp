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


#include <numbers>
#include <random>

#include "biphoton/circuit.hpp"
#include "biphoton/tomography.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace biphoton;

namespace {

std::vector<double> expected_counts(const Eigen::MatrixXcd &rho, const ProjectorSet &set, double intensity) {
    auto p = set.probabilities(rho);
    for (double &x : p) {
        x *= intensity;
    }
    return p;
}

double log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / x.size();
        my += std::log(y[i]) / y.size();
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

}  // namespace

TEST_CASE("standard sets are informationally complete") {
    const ProjectorSet q = ProjectorSet::qutrit();
    CHECK(q.size() == 9);
    CHECK(q.dimension() == 3);
    const ProjectorSet j = ProjectorSet::qubit_qutrit();
    CHECK(j.size() == 36);
    CHECK(j.dimension() == 6);
    REQUIRE(j.bipartition().has_value());
    CHECK(j.bipartition()->dim_a == 2);
    CHECK(j.find("H:0+1") >= 0);
    CHECK(j.find("nope") == -1);
    for (const auto &s : j.settings()) {
        CHECK(s.state.norm() == doctest::Approx(1.0));
        CHECK(s.analyzers.has_value());
    }
}

TEST_CASE("invalid sets are rejected") {
    std::vector<MeasurementSetting> few;
    few.push_back({"a", Eigen::Vector3cd(1, 0, 0), 1.0, std::nullopt});
    CHECK_THROWS_AS(ProjectorSet(3, few), std::invalid_argument);
    auto settings = ProjectorSet::qutrit().settings();
    settings[1].label = settings[0].label;
    CHECK_THROWS_AS(ProjectorSet(3, settings), std::invalid_argument);
    settings = ProjectorSet::qutrit().settings();
    settings[0].weight = 0.0;
    CHECK_THROWS_AS(ProjectorSet(3, settings), std::invalid_argument);
    settings = ProjectorSet::qutrit().settings();
    settings[0].state *= 2.0;
    CHECK_THROWS_AS(ProjectorSet(3, settings), std::invalid_argument);
}

TEST_CASE("analyzer weights") {
    const auto p = physical_analysis_probabilities();
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-12));
    const Eigen::Vector2cd h(1, 0), v(0, 1);
    CHECK(analyzer_weight(h, h) == doctest::Approx(0.5));
    CHECK(analyzer_weight(h, v) == doctest::Approx(0.25));
    // Majorana roots rebuild the qutrit vector.
    for (const auto &[label, t] : qutrit_analysis_states()) {
        const auto uw = majorana_pair(t);
        const Eigen::Vector2cd u = uw[0], w = uw[1];
        const Eigen::Vector3cd sym(u(0) * w(0), (u(0) * w(1) + u(1) * w(0)) / std::sqrt(2.0), u(1) * w(1));
        CHECK(std::abs(std::abs(sym.normalized().dot(t)) - 1.0) < 1e-12);
    }
}

TEST_CASE("calibrated projectors of an ideal splitter equal the ideal set") {
    const ProjectorSet cal = calibrated_qutrit_projectors(SplitterSpec::balanced(0.5));
    const ProjectorSet ideal = ProjectorSet::qutrit();
    REQUIRE(cal.size() == ideal.size());
    for (std::size_t i = 0; i < cal.size(); ++i) {
        CHECK(cal.settings()[i].label == ideal.settings()[i].label);
        CHECK(cal.settings()[i].weight == doctest::Approx(ideal.settings()[i].weight).epsilon(1e-12));
        CHECK(std::abs(std::abs(cal.settings()[i].state.dot(ideal.settings()[i].state)) - 1.0) < 1e-12);
    }
}

TEST_CASE("noiseless reconstruction recovers random states") {
    std::mt19937_64 rng(21);
    for (int dim : {3, 6}) {
        const ProjectorSet set = dim == 3 ? ProjectorSet::qutrit() : ProjectorSet::qubit_qutrit();
        for (int k = 0; k < 5; ++k) {
            const DensityMatrix truth(testing::random_density(dim, 1 + k % dim, rng));
            const Reconstruction r = reconstruct(expected_counts(truth.matrix(), set, 1e4), set);
            INFO("dim " << dim << " k " << k << " it " << r.iterations << " cost " << r.cost);
            CHECK(r.converged);
            CHECK(trace_distance(r.rho, truth) < 1e-4);
            CHECK(r.intensity == doctest::Approx(1e4).epsilon(1e-4));
        }
    }
}

TEST_CASE("equal counts give the maximally mixed qutrit") {
    const ProjectorSet set = ProjectorSet::qutrit().with_uniform_weights();
    const std::vector<double> counts(set.size(), 1000.0);
    const Reconstruction r = reconstruct(counts, set);
    CHECK(trace_distance(r.rho, DensityMatrix::maximally_mixed(3)) < 1e-6);
}

TEST_CASE("reconstruct input validation") {
    const ProjectorSet set = ProjectorSet::qutrit();
    CHECK_THROWS_AS(reconstruct(std::vector<double>(8, 1.0), set), std::invalid_argument);
    CHECK_THROWS_AS(reconstruct(std::vector<double>(9, 0.0), set), std::invalid_argument);
    std::vector<double> neg(9, 1.0);
    neg[3] = -1.0;
    CHECK_THROWS_AS(reconstruct(neg, set), std::invalid_argument);
}

TEST_CASE("linear inversion is exact on noiseless data") {
    std::mt19937_64 rng(22);
    const ProjectorSet set = ProjectorSet::qutrit();
    const Eigen::MatrixXcd rho = testing::random_density(3, 2, rng);
    const Eigen::MatrixXcd est = linear_inversion(expected_counts(rho, set, 50.0), set);
    CHECK((est - 50.0 * rho).norm() < 1e-9);
}

TEST_CASE("simulated counts are reproducible") {
    const ProjectorSet set = ProjectorSet::qutrit();
    const DensityMatrix rho = DensityMatrix::maximally_mixed(3);
    CHECK(simulate_counts(rho, set, 100.0, 5) == simulate_counts(rho, set, 100.0, 5));
    CHECK(simulate_counts(rho, set, 100.0, 5) != simulate_counts(rho, set, 100.0, 6));
    const double i = intensity_for_mean_counts(rho, set, 1000.0);
    const auto e = expected_counts(rho.matrix(), set, i);
    double mean = 0.0;
    for (double x : e) {
        mean += x / e.size();
    }
    CHECK(mean == doctest::Approx(1000.0));
}

TEST_CASE("joint state at 1e4 counts per setting") {
    const double theta = std::numbers::pi / 4;
    const DensityMatrix truth = *run_joint(theta, FilterConfig{}).rho;
    const ProjectorSet set = ProjectorSet::qubit_qutrit();
    const Reconstruction r = reconstruct(simulate_counts(truth, set, 1e4, 99), set);
    CHECK(std::abs(negativity(r.rho) - std::sqrt(8.0 / 9.0)) < 0.05);
    CHECK(fidelity(r.rho, ideal_joint_state(theta)) > 0.98);
}

TEST_CASE("Monte Carlo errors") {
    std::mt19937_64 rng(23);
    const ProjectorSet set = ProjectorSet::qutrit();
    const Eigen::VectorXcd ideal = testing::random_unit_vector(3, rng);
    const DensityMatrix truth(0.8 * ideal * ideal.adjoint() + 0.2 * testing::random_density(3, 3, rng));
    const auto counts = simulate_counts(truth, set, 1e4, 1);

    MonteCarloOptions fixed;
    fixed.trials = 4;
    fixed.resample = Resample::kFixed;
    const MonteCarloResult f = monte_carlo_errors(counts, set, ideal, fixed);
    CHECK(f.fidelity.stddev == 0.0);
    CHECK(f.linear_entropy.stddev == 0.0);
    CHECK_FALSE(f.negativity.has_value());

    MonteCarloOptions one;
    one.trials = 1;
    CHECK_THROWS_AS(monte_carlo_errors(counts, set, ideal, one), std::invalid_argument);

    MonteCarloOptions serial;
    serial.trials = 12;
    serial.seed = 77;
    MonteCarloOptions parallel = serial;
    parallel.threads = 4;
    const MonteCarloResult a = monte_carlo_errors(counts, set, ideal, serial);
    const MonteCarloResult b = monte_carlo_errors(counts, set, ideal, parallel);
    CHECK(a.fidelity.mean == b.fidelity.mean);
    CHECK(a.fidelity.stddev == b.fidelity.stddev);
    CHECK(a.linear_entropy.stddev == b.linear_entropy.stddev);
}

TEST_CASE("Monte Carlo spread shrinks as one over root N") {
    std::mt19937_64 rng(24);
    const ProjectorSet set = ProjectorSet::qutrit();
    const Eigen::VectorXcd ideal = testing::random_unit_vector(3, rng);
    const DensityMatrix truth(0.7 * ideal * ideal.adjoint() + 0.3 * testing::random_density(3, 3, rng));
    std::vector<double> totals, spreads;
    for (double total : {1e3, 1e4, 1e5}) {
        const double intensity = intensity_for_mean_counts(truth, set, total / set.size());
        MonteCarloOptions mc;
        mc.trials = 60;
        mc.seed = 5;
        mc.threads = 4;
        const auto result = monte_carlo_errors(expected_counts(truth.matrix(), set, intensity), set, ideal, mc);
        totals.push_back(total);
        spreads.push_back(result.fidelity.stddev);
    }
    const double slope = log_slope(totals, spreads);
    CHECK(std::abs(slope + 0.5) <= 0.15);
}
