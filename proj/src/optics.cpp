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

#include "biphoton/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

namespace {

void check_fraction(double x, const char *what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
}

ModeId slot(int spatial, Polarization p) {
    return ModeId{spatial, p, 0};
}

}  // namespace

bool is_unitary(const JonesMatrix &j, double tolerance) {
    return (j.adjoint() * j - JonesMatrix::Identity()).cwiseAbs().maxCoeff() <= tolerance;
}

JonesMatrix waveplate(WaveplateKind kind, double angle) {
    JonesMatrix out;
    if (kind == WaveplateKind::kHalf) {
        double c = std::cos(2.0 * angle);
        double s = std::sin(2.0 * angle);
        out << c, s, s, -c;
        return out;
    }
    double c = std::cos(angle);
    double s = std::sin(angle);
    JonesMatrix rot;
    rot << c, -s, s, c;
    JonesMatrix retarder = JonesMatrix::Zero();
    retarder(0, 0) = 1.0;
    retarder(1, 1) = cplx{0.0, 1.0};
    return rot * retarder * rot.transpose();
}

ModeTransform beam_splitter(const SplitterSpec &spec, int in_a, int in_b, int out_c, int out_d) {
    check_fraction(spec.reflectivity_h, "reflectivity_h");
    check_fraction(spec.reflectivity_v, "reflectivity_v");
    if (in_a == in_b || out_c == out_d) {
        throw std::invalid_argument("beam splitter ports must be distinct");
    }
    for (const auto *j : {&spec.extra_unitary_transmitted, &spec.extra_unitary_reflected, &spec.input_unitary_a,
                          &spec.input_unitary_b}) {
        if (!is_unitary(*j)) {
            throw std::invalid_argument("beam splitter extra Jones matrix is not unitary");
        }
    }

    // Columns: aH aV bH bV. Rows: cH cV dH dV.
    Eigen::Matrix4cd ideal = Eigen::Matrix4cd::Zero();
    for (int p = 0; p < 2; ++p) {
        double r = p == 0 ? spec.reflectivity_h : spec.reflectivity_v;
        double sr = std::sqrt(r);
        double st = std::sqrt(1.0 - r);
        if (spec.convention == SplitterConvention::kMirrored) {
            std::swap(sr, st);
        }
        ideal(p, p) = st;
        ideal(2 + p, p) = sr;
        ideal(p, 2 + p) = sr;
        ideal(2 + p, 2 + p) = -st;
    }
    Eigen::Matrix4cd post = Eigen::Matrix4cd::Zero();
    post.block<2, 2>(0, 0) = spec.extra_unitary_transmitted;
    post.block<2, 2>(2, 2) = spec.extra_unitary_reflected;
    Eigen::Matrix4cd pre = Eigen::Matrix4cd::Zero();
    pre.block<2, 2>(0, 0) = spec.input_unitary_a;
    pre.block<2, 2>(2, 2) = spec.input_unitary_b;

    std::vector<ModeId> inputs{slot(in_a, Polarization::H), slot(in_a, Polarization::V), slot(in_b, Polarization::H),
                               slot(in_b, Polarization::V)};
    std::vector<ModeId> outputs{slot(out_c, Polarization::H), slot(out_c, Polarization::V),
                                slot(out_d, Polarization::H), slot(out_d, Polarization::V)};
    return ModeTransform(std::move(inputs), std::move(outputs), post * ideal * pre, TransformKind::kUnitary);
}

ModeTransform jones_transform(const JonesMatrix &jones, int spatial) {
    std::vector<ModeId> modes{slot(spatial, Polarization::H), slot(spatial, Polarization::V)};
    return ModeTransform(modes, modes, jones, TransformKind::kUnitary);
}

ModeTransform polarizer(Polarization pass, int spatial, int loss_spatial) {
    if (spatial == loss_spatial) {
        throw std::invalid_argument("polarizer loss slot must differ from the signal mode");
    }
    Polarization block = pass == Polarization::H ? Polarization::V : Polarization::H;
    std::vector<ModeId> inputs{slot(spatial, pass), slot(spatial, block)};
    std::vector<ModeId> outputs{slot(spatial, pass), slot(loss_spatial, block)};
    return ModeTransform(std::move(inputs), std::move(outputs), Eigen::Matrix2cd::Identity(),
                         TransformKind::kIsometry);
}

ModeTransform loss_channel(double efficiency, int spatial, int loss_spatial) {
    check_fraction(efficiency, "efficiency");
    if (spatial == loss_spatial) {
        throw std::invalid_argument("loss slot must differ from the signal mode");
    }
    const double keep = std::sqrt(efficiency);
    const double lose = std::sqrt(1.0 - efficiency);
    std::vector<ModeId> inputs{slot(spatial, Polarization::H), slot(spatial, Polarization::V)};
    std::vector<ModeId> outputs{slot(spatial, Polarization::H), slot(spatial, Polarization::V),
                                slot(loss_spatial, Polarization::H), slot(loss_spatial, Polarization::V)};
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 2);
    m(0, 0) = keep;
    m(1, 1) = keep;
    m(2, 0) = lose;
    m(3, 1) = lose;
    return ModeTransform(std::move(inputs), std::move(outputs), std::move(m), TransformKind::kIsometry);
}

}  // namespace biphoton
