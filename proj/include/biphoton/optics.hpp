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

#pragma once

#include <Eigen/Dense>

#include "biphoton/fock.hpp"

namespace biphoton {

/// 2x2 matrix on the (H, V) creation operators of one spatial mode.
using JonesMatrix = Eigen::Matrix2cd;

enum class WaveplateKind { kHalf, kQuarter };

/// HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]];
/// QWP(t) = Rot(t) diag(1, i) Rot(-t).
JonesMatrix waveplate(WaveplateKind kind, double angle);

inline JonesMatrix half_waveplate(double angle) {
    return waveplate(WaveplateKind::kHalf, angle);
}
inline JonesMatrix quarter_waveplate(double angle) {
    return waveplate(WaveplateKind::kQuarter, angle);
}

/// Which port carries the minus sign, and which output the a-input reaches
/// by reflection.
///
///   kStandard: a -> sqrt(T) c + sqrt(R) d,  b -> sqrt(R) c - sqrt(T) d
///   kMirrored: a -> sqrt(R) c + sqrt(T) d,  b -> sqrt(T) c - sqrt(R) d
///
/// The two are related by R <-> T.
enum class SplitterConvention { kStandard, kMirrored };

struct SplitterSpec {
    double reflectivity_h = 0.5;
    double reflectivity_v = 0.5;
    /// Applied after the ideal splitter on output c.
    JonesMatrix extra_unitary_transmitted = JonesMatrix::Identity();
    /// Applied after the ideal splitter on output d.
    JonesMatrix extra_unitary_reflected = JonesMatrix::Identity();
    /// Applied before the ideal splitter on inputs a and b.
    JonesMatrix input_unitary_a = JonesMatrix::Identity();
    JonesMatrix input_unitary_b = JonesMatrix::Identity();
    SplitterConvention convention = SplitterConvention::kStandard;

    static SplitterSpec balanced(double reflectivity,
                                 SplitterConvention convention = SplitterConvention::kStandard) {
        SplitterSpec s;
        s.reflectivity_h = reflectivity;
        s.reflectivity_v = reflectivity;
        s.convention = convention;
        return s;
    }
};

/// Four-port splitter acting on both polarizations of inputs (a, b) and
/// producing outputs (c, d). Throws on out-of-range reflectivity, repeated
/// spatial indices, or non-unitary extra Jones matrices.
ModeTransform beam_splitter(const SplitterSpec &spec, int in_a, int in_b, int out_c, int out_d);

/// Jones matrix applied in place on one spatial mode.
ModeTransform jones_transform(const JonesMatrix &jones, int spatial);

/// Passes `pass` and routes the orthogonal polarization to `loss_spatial`.
ModeTransform polarizer(Polarization pass, int spatial, int loss_spatial);

/// a^dag -> sqrt(eta) a^dag + sqrt(1 - eta) l^dag for both polarizations.
ModeTransform loss_channel(double efficiency, int spatial, int loss_spatial);

bool is_unitary(const JonesMatrix &j, double tolerance = 1e-12);

}  // namespace biphoton
