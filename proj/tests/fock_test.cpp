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


#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "biphoton/fock.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace biphoton;

namespace {

std::vector<ModeId> eight_modes() {
    std::vector<ModeId> m;
    for (int s = 0; s < 4; ++s) {
        m.push_back({s, Polarization::H, 0});
        m.push_back({s, Polarization::V, 0});
    }
    return m;
}

double factorial(int n) {
    return std::tgamma(n + 1.0);
}

// Ryser-free naive permanent; sizes here stay below 7.
cplx permanent(const Eigen::MatrixXcd &a) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    cplx sum = 0.0;
    do {
        cplx term = 1.0;
        for (int i = 0; i < n; ++i) {
            term *= a(i, p[i]);
        }
        sum += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return sum;
}

// <out| U |in> as a permanent of the photon-indexed submatrix.
cplx permanent_amplitude(const Eigen::MatrixXcd &u, const std::vector<int> &in_occ, const std::vector<int> &out_occ) {
    std::vector<int> rows, cols;
    double norm = 1.0;
    for (std::size_t k = 0; k < in_occ.size(); ++k) {
        for (int c = 0; c < in_occ[k]; ++c) {
            cols.push_back(static_cast<int>(k));
        }
        norm *= factorial(in_occ[k]);
    }
    for (std::size_t k = 0; k < out_occ.size(); ++k) {
        for (int c = 0; c < out_occ[k]; ++c) {
            rows.push_back(static_cast<int>(k));
        }
        norm *= factorial(out_occ[k]);
    }
    if (rows.size() != cols.size()) {
        return 0.0;
    }
    Eigen::MatrixXcd sub(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            sub(i, j) = u(rows[i], cols[j]);
        }
    }
    return permanent(sub) / std::sqrt(norm);
}

// Expands prod_photons (sum_j U(j, i) b_j^dag) term by term.
std::map<std::vector<int>, cplx> assignment_expansion(const Eigen::MatrixXcd &u, const std::vector<int> &in_occ) {
    const int n_modes = static_cast<int>(u.rows());
    std::vector<int> photons;
    double in_norm = 1.0;
    for (std::size_t k = 0; k < in_occ.size(); ++k) {
        for (int c = 0; c < in_occ[k]; ++c) {
            photons.push_back(static_cast<int>(k));
        }
        in_norm *= factorial(in_occ[k]);
    }
    std::map<std::vector<int>, cplx> monomials;
    std::vector<int> choice(photons.size(), 0);
    while (true) {
        std::vector<int> occ(n_modes, 0);
        cplx coeff = 1.0;
        for (std::size_t p = 0; p < photons.size(); ++p) {
            coeff *= u(choice[p], photons[p]);
            ++occ[choice[p]];
        }
        monomials[occ] += coeff;
        std::size_t p = 0;
        while (p < choice.size() && ++choice[p] == n_modes) {
            choice[p++] = 0;
        }
        if (p == choice.size()) {
            break;
        }
    }
    std::map<std::vector<int>, cplx> out;
    for (auto &[occ, c] : monomials) {
        double f = 1.0;
        for (int n : occ) {
            f *= factorial(n);
        }
        out[occ] = c * std::sqrt(f) / std::sqrt(in_norm);
    }
    return out;
}

FockBasisState from_occupation(const std::vector<ModeId> &modes, const std::vector<int> &occ) {
    std::vector<FockBasisState::Entry> e;
    for (std::size_t k = 0; k < occ.size(); ++k) {
        e.emplace_back(modes[k], occ[k]);
    }
    return FockBasisState(e);
}

std::vector<int> random_occupation(int n_modes, int photons, std::mt19937_64 &rng) {
    std::vector<int> occ(n_modes, 0);
    std::uniform_int_distribution<int> pick(0, n_modes - 1);
    for (int p = 0; p < photons; ++p) {
        ++occ[pick(rng)];
    }
    return occ;
}

}  // namespace

TEST_CASE("basis states are canonical") {
    const ModeId a{0, Polarization::H, 0};
    const ModeId b{1, Polarization::V, 0};
    const FockBasisState x({{b, 1}, {a, 2}, {b, 1}, {a, 0}});
    CHECK(x.count(a) == 2);
    CHECK(x.count(b) == 2);
    CHECK(x.total() == 4);
    CHECK(x.entries().size() == 2);
    CHECK(x.entries()[0].first == a);
    CHECK(x == FockBasisState({{a, 2}, {b, 2}}));
    CHECK(FockBasisState({{a, 0}}).empty());
    CHECK_THROWS_AS(FockBasisState({{a, -1}}), std::invalid_argument);
    CHECK(x.factorial_product() == doctest::Approx(4.0));
}

TEST_CASE("mode ordering is field-wise") {
    CHECK(ModeId{0, Polarization::V, 0} < ModeId{1, Polarization::H, 0});
    CHECK(ModeId{0, Polarization::H, 1} < ModeId{0, Polarization::V, 0});
    CHECK(ModeId{2, Polarization::H, 1} == ModeId{2, Polarization::H, 1});
}

TEST_CASE("apply_mode_transform matches permanent and assignment oracles") {
    std::mt19937_64 rng(11);
    const auto modes = eight_modes();
    for (int trial = 0; trial < 25; ++trial) {
        const int photons = 1 + trial % 6;
        const Eigen::MatrixXcd u = testing::random_unitary(8, rng);
        const std::vector<int> occ = random_occupation(8, photons, rng);
        const ModeTransform t(modes, modes, u, TransformKind::kUnitary);
        const PureState out = apply_mode_transform(PureState::basis(from_occupation(modes, occ)), t, 0.0);
        const auto oracle = assignment_expansion(u, occ);
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (const auto &[o, amp] : oracle) {
            const cplx got = out.amplitude(from_occupation(modes, o));
            CHECK(std::abs(got - amp) < 1e-10);
            if (photons <= 5) {
                CHECK(std::abs(got - permanent_amplitude(u, occ, o)) < 1e-10);
            }
        }
    }
}

TEST_CASE("unitary transforms preserve norm and inner products on random states") {
    std::mt19937_64 rng(12);
    const auto modes = eight_modes();
    std::normal_distribution<double> g;
    auto random_state = [&](int photons) {
        PureState s;
        for (int k = 0; k < 5; ++k) {
            s.add(from_occupation(modes, random_occupation(8, photons, rng)), {g(rng), g(rng)});
        }
        return normalize(s).state;
    };
    for (int trial = 0; trial < 20; ++trial) {
        const int photons = 1 + trial % 6;
        const PureState x = random_state(photons);
        const PureState y = random_state(photons);
        const ModeTransform t(modes, modes, testing::random_unitary(8, rng), TransformKind::kUnitary);
        const PureState tx = apply_mode_transform(x, t, 0.0);
        const PureState ty = apply_mode_transform(y, t, 0.0);
        CHECK(tx.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(inner_product(tx, ty) - inner_product(x, y)) < 1e-10);
    }
}

TEST_CASE("compose equals sequential application") {
    std::mt19937_64 rng(13);
    const auto modes = eight_modes();
    const ModeTransform a(modes, modes, testing::random_unitary(8, rng), TransformKind::kUnitary);
    const ModeTransform b(modes, modes, testing::random_unitary(8, rng), TransformKind::kUnitary);
    const PureState x = PureState::basis(from_occupation(modes, {1, 0, 2, 0, 0, 1, 0, 0}));
    const PureState seq = apply_mode_transform(apply_mode_transform(x, a, 0.0), b, 0.0);
    const PureState once = apply_mode_transform(x, compose(a, b), 0.0);
    CHECK(std::abs(inner_product(seq, once) - 1.0) < 1e-10);
}

TEST_CASE("label-blind transforms keep internal labels apart") {
    const ModeId a0{0, Polarization::H, 0};
    const ModeId a1{0, Polarization::H, 1};
    const ModeId b0{1, Polarization::H, 0};
    Eigen::MatrixXcd u(2, 2);
    const double r = std::sqrt(0.5);
    u << r, r, r, -r;
    const ModeTransform bs({a0, b0}, {a0, b0}, u, TransformKind::kUnitary);
    // Two photons with different labels do not bunch.
    const PureState x = PureState::basis(FockBasisState({{a1, 1}, {b0, 1}}));
    const PureState y = apply_mode_transform(x, bs);
    const ModeId b1{1, Polarization::H, 1};
    CHECK(std::norm(y.amplitude(FockBasisState({{a0, 1}, {b1, 1}}))) == doctest::Approx(0.25));
    CHECK(std::norm(y.amplitude(FockBasisState({{a1, 1}, {b0, 1}}))) == doctest::Approx(0.25));
    CHECK(std::norm(y.amplitude(FockBasisState({{a0, 1}, {a1, 1}}))) == doctest::Approx(0.25));
    // Identical labels bunch completely.
    const PureState z = apply_mode_transform(PureState::basis(FockBasisState({{a0, 1}, {b0, 1}})), bs);
    CHECK(std::norm(z.amplitude(FockBasisState({{a0, 1}, {b0, 1}}))) < 1e-24);
}

TEST_CASE("modes outside the transform pass through") {
    const ModeId a{0, Polarization::H, 0};
    const ModeId spectator{5, Polarization::V, 0};
    Eigen::MatrixXcd u(1, 1);
    u << cplx(0.0, 1.0);
    const ModeTransform phase({a}, {a}, u, TransformKind::kUnitary);
    const PureState y = apply_mode_transform(PureState::basis(FockBasisState({{a, 2}, {spectator, 1}})), phase);
    CHECK(std::abs(y.amplitude(FockBasisState({{a, 2}, {spectator, 1}})) - cplx(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("malformed transforms throw") {
    const ModeId a{0, Polarization::H, 0};
    const ModeId b{1, Polarization::H, 0};
    Eigen::MatrixXcd u(2, 2);
    u << 1, 1, 0, 1;
    CHECK_THROWS_AS(ModeTransform({a, b}, {a, b}, u, TransformKind::kUnitary), std::invalid_argument);
    CHECK_THROWS_AS(ModeTransform({a}, {a, b}, Eigen::MatrixXcd::Identity(2, 2), TransformKind::kUnitary),
                    std::invalid_argument);
}

TEST_CASE("tensor and normalize") {
    const ModeId a{0, Polarization::H, 0};
    const ModeId b{1, Polarization::V, 0};
    const PureState x = PureState::basis(FockBasisState({{a, 1}}), 2.0);
    const PureState y = PureState::basis(FockBasisState({{b, 1}}));
    const PureState t = tensor(x, y);
    CHECK(t.amplitude(FockBasisState({{a, 1}, {b, 1}})) == cplx(2.0, 0.0));
    const Normalized n = normalize(x);
    CHECK(n.norm == doctest::Approx(2.0));
    CHECK(n.state.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(tensor(x, x), std::invalid_argument);
}
