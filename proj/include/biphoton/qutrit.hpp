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

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/fock.hpp"
#include "biphoton/optics.hpp"

namespace biphoton {

/// Amplitudes over |0_3> = |2_H,0_V>, |1_3> = |1_H,1_V>, |2_3> = |0_H,2_V>.
using QutritVector = Eigen::Vector3cd;

struct QutritOperator {
    enum class Kind { kUnitary, kFilter };
    Eigen::Matrix3cd matrix = Eigen::Matrix3cd::Identity();
    Kind kind = Kind::kUnitary;

    QutritVector operator*(const QutritVector &q) const {
        return matrix * q;
    }
};

/// Two photons in `spatial` carrying the qutrit. Throws std::invalid_argument
/// unless |q| = 1 within 1e-9.
PureState encode(const QutritVector &q, int spatial);

struct Decoded {
    QutritVector state = QutritVector::Zero();
    /// Fraction of the input weight outside the symmetric two-photon subspace.
    double leakage = 1.0;
};

/// Projects onto the two-photon subspace of `spatial`; photons elsewhere and
/// internal labels are treated as environment. When the environment is not
/// unique the principal component is returned and the remainder is counted
/// as leakage.
Decoded decode(const PureState &s, int spatial);

/// Result of mapping photons in the qutrit (and optional qubit) modes to
/// logical coordinates, with everything else traced out.
struct LogicalProjection {
    int dimension = 3;
    /// Unnormalized logical density matrix (sum over environments).
    Eigen::MatrixXcd rho;
    /// Total weight of the input ensemble.
    double input_weight = 0.0;
    /// Weight that fell outside the logical subspace.
    double leakage_weight = 0.0;
    /// One logical vector per environment configuration.
    std::vector<Eigen::VectorXcd> components;
};

/// Qubit (one photon in `qubit_spatial`, |0_2> = H) tensor qutrit (two photons
/// in `qutrit_spatial`), index = qubit * 3 + qutrit. Without a qubit mode the
/// dimension is 3.
LogicalProjection project_logical(std::span<const WeightedState> ensemble, int qutrit_spatial,
                                  std::optional<int> qubit_spatial = std::nullopt);

/// Symmetric square of a Jones matrix: the induced qutrit operator.
QutritOperator jones_to_qutrit(const JonesMatrix &jones);

/// Conditional amplitudes of the Fock filter for each logical input state with
/// an H ancilla and an H photon detected in d (standard splitter convention).
struct FilterAmplitudes {
    double f0 = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
};
FilterAmplitudes filter_amplitudes(double reflectivity);

/// diag(f0, f1, f2) scaled to unit spectral norm (zero operator at R = 1).
QutritOperator p3_operator(double reflectivity);

/// Multiplies by a phase so the largest-magnitude amplitude is real positive.
QutritVector fix_global_phase(const QutritVector &q);

struct SweepGrid {
    /// Grid spacing for all three angles.
    double step = 0.0;
    /// Filter reflectivity used when the filter is in the chain.
    double reflectivity = 0.5;
};

struct SweepPoint {
    std::array<double, 3> amplitudes{};
    /// Imaginary residue after phase fixing was below 1e-9.
    bool real = false;
    double theta = 0.0;
    double phi = 0.0;
    double alpha = 0.0;
};

inline constexpr double kRealResidueTolerance = 1e-9;

/// Q3(alpha) H3(phi) P3 H3(theta) |0_3>, or without P3 when use_filter is
/// false, over theta, phi in [0, pi/2) and alpha in [0, pi).
std::vector<SweepPoint> reachability_sweep(const SweepGrid &grid, bool use_filter);

/// Per target, the smallest trace distance sqrt(1 - |<t|p>|^2) to any real
/// point of the sweep. Targets are real unit 3-vectors.
std::vector<double> nearest_trace_distance(std::span<const SweepPoint> cloud,
                                           std::span<const Eigen::Vector3d> targets);

/// Euclidean distance from a real unit 3-vector to the waveplate-only family
/// +-(cos^2 p, sqrt2 cos p sin p, sin^2 p).
double ring_distance(const std::array<double, 3> &x);

}  // namespace biphoton
