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
#include "biphoton/qutrit.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace biphoton;

namespace {

constexpr double kPi = std::numbers::pi;

JonesMatrix random_jones(std::mt19937_64 &rng) {
    return testing::random_unitary(2, rng);
}

}  // namespace

TEST_CASE("jones_to_qutrit closed form") {
    std::mt19937_64 rng(3);
    const JonesMatrix j = random_jones(rng);
    const cplx a = j(0, 0), b = j(0, 1), c = j(1, 0), d = j(1, 1);
    const double r = std::sqrt(2.0);
    Eigen::Matrix3cd want;
    want << a * a, r * a * b, b * b, r * a * c, a * d + b * c, r * b * d, c * c, r * c * d, d * d;
    CHECK((jones_to_qutrit(j).matrix - want).norm() < 1e-14);
    CHECK((jones_to_qutrit(JonesMatrix::Identity()).matrix - Eigen::Matrix3cd::Identity()).norm() < 1e-15);
}

TEST_CASE("jones_to_qutrit is a unitary homomorphism") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
        const JonesMatrix j1 = random_jones(rng);
        const JonesMatrix j2 = random_jones(rng);
        const Eigen::Matrix3cd u = jones_to_qutrit(j1 * j2).matrix;
        CHECK((u - jones_to_qutrit(j1).matrix * jones_to_qutrit(j2).matrix).norm() < 1e-12);
        CHECK((u.adjoint() * u - Eigen::Matrix3cd::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("half-wave plate on |0_3> gives the single-photon-squared amplitudes") {
    for (int k = 0; k < 50; ++k) {
        const double t = kPi * k / 49.0;
        const QutritVector col = jones_to_qutrit(half_waveplate(t)).matrix.col(0);
        const QutritVector want(std::pow(std::cos(2 * t), 2), std::sin(4 * t) / std::sqrt(2.0),
                                std::pow(std::sin(2 * t), 2));
        CHECK((col - want).norm() < 1e-12);
    }
}

TEST_CASE("jones_to_qutrit agrees with the photon picture") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const JonesMatrix j = random_jones(rng);
        const QutritVector q = testing::random_unit_vector(3, rng);
        const Decoded d = decode(apply_mode_transform(encode(q, 0), jones_transform(j, 0)), 0);
        CHECK(d.leakage < 1e-12);
        CHECK(testing::phase_free_distance(d.state, jones_to_qutrit(j) * q) < 1e-10);
    }
}

TEST_CASE("encode and decode") {
    std::mt19937_64 rng(6);
    const QutritVector q = testing::random_unit_vector(3, rng);
    const Decoded d = decode(encode(q, 2), 2);
    CHECK((d.state - q).norm() < 1e-14);
    CHECK(d.leakage < 1e-15);
    CHECK_THROWS_AS(encode(QutritVector(1.0, 1.0, 0.0), 0), std::invalid_argument);
    const PureState one = PureState::basis(FockBasisState({{ModeId{2, Polarization::H, 0}, 1}}));
    CHECK(decode(one, 2).leakage == doctest::Approx(1.0));
}

TEST_CASE("filter amplitudes") {
    const FilterAmplitudes half = filter_amplitudes(0.5);
    CHECK(std::abs(half.f1) < 1e-15);
    CHECK(half.f0 == doctest::Approx(-half.f2));
    const Eigen::Matrix3cd p = p3_operator(0.5).matrix;
    CHECK((p - Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal().toDenseMatrix()).norm() < 1e-12);
    const FilterAmplitudes zero = filter_amplitudes(0.0);
    CHECK(zero.f0 == doctest::Approx(zero.f1));
    CHECK(zero.f1 == doctest::Approx(zero.f2));
    // f1 vanishes only at R = 1/2 on a fine grid away from the endpoints.
    for (int k = 1; k < 100; ++k) {
        const double r = k / 100.0;
        if (k != 50) {
            CHECK(std::abs(filter_amplitudes(r).f1) > 1e-4);
        }
    }
}

TEST_CASE("p3_operator matches the circuit-level filter") {
    std::mt19937_64 rng(7);
    for (int k = 0; k <= 20; ++k) {
        const double r = 0.025 + 0.045 * k;
        FilterConfig cfg;
        cfg.reflectivity = r;
        const Eigen::Matrix3cd p = p3_operator(r).matrix;
        CHECK(p.jacobiSvd().singularValues()(0) == doctest::Approx(1.0));
        const QutritVector q = testing::random_unit_vector(3, rng);
        const FilterOutcome out = run_filter(q, cfg);
        const QutritVector want = (p * q).normalized();
        CHECK(testing::phase_free_distance(out.effective, want) < 1e-9);
    }
}

TEST_CASE("|1_3> is reached exactly through the filter") {
    const QutritVector v = jones_to_qutrit(half_waveplate(kPi / 8)) * (p3_operator(0.5) *
                           (jones_to_qutrit(half_waveplate(kPi / 8)) * QutritVector(1.0, 0.0, 0.0)));
    CHECK(testing::phase_free_distance(v.normalized(), QutritVector(0.0, 1.0, 0.0)) < 1e-12);
}

TEST_CASE("fix_global_phase makes the largest amplitude real positive") {
    const QutritVector q = QutritVector(cplx(0.1, 0.0), cplx(0.0, -0.9), cplx(0.3, 0.3)).normalized();
    const QutritVector f = fix_global_phase(q);
    CHECK(std::abs(f(1).imag()) < 1e-15);
    CHECK(f(1).real() > 0.0);
    CHECK(std::abs(std::abs(f.dot(q)) - 1.0) < 1e-14);
}

TEST_CASE("waveplate-only sweep stays on the ring") {
    SweepGrid grid;
    grid.step = kPi / 20;
    const auto pts = reachability_sweep(grid, false);
    int real = 0;
    for (const auto &p : pts) {
        if (p.real) {
            ++real;
            CHECK(ring_distance(p.amplitudes) < 1e-9);
        }
    }
    CHECK(real > 0);
    CHECK(ring_distance({0.0, 1.0, 0.0}) > 0.5);
    CHECK(ring_distance({-0.5, std::sqrt(0.5), -0.5}) < 1e-15);
}

TEST_CASE("nearest_trace_distance") {
    std::vector<SweepPoint> cloud(2);
    cloud[0].amplitudes = {1.0, 0.0, 0.0};
    cloud[0].real = true;
    cloud[1].amplitudes = {0.0, 1.0, 0.0};
    cloud[1].real = false;
    const std::vector<Eigen::Vector3d> targets{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {std::sqrt(0.5), std::sqrt(0.5), 0.0}};
    const auto d = nearest_trace_distance(cloud, targets);
    CHECK(d[0] == doctest::Approx(0.0));
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == doctest::Approx(std::sqrt(0.5)));
}
