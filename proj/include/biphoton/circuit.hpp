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

#include <optional>
#include <vector>

#include "biphoton/fock.hpp"
#include "biphoton/metrics.hpp"
#include "biphoton/optics.hpp"
#include "biphoton/qutrit.hpp"
#include "biphoton/tomography.hpp"

namespace biphoton {

/// Spatial indices used by the heralded filter circuit.
namespace modes {
inline constexpr int kA = 0;        // qutrit input
inline constexpr int kB = 1;        // ancilla input
inline constexpr int kC = 2;        // qutrit output
inline constexpr int kD = 3;        // ancilla output / qubit
inline constexpr int kSource1 = 4;  // pair-source arm feeding a
inline constexpr int kSource2 = 5;  // pair-source arm feeding the herald splitter
inline constexpr int kHerald = 6;   // herald detector arm
inline constexpr int kTomoE = 7;    // tomography splitter outputs
inline constexpr int kTomoF = 8;
inline constexpr int kLossBase = 100;  // fresh loss slots start here
}  // namespace modes

/// Photons required in one detector group. A group covers every internal
/// label of `spatial`, restricted to one polarization if given.
struct DetectionGroup {
    int spatial = 0;
    std::optional<Polarization> polarization;
    int count = 0;
    /// Kept groups project onto exactly `count` photons but stay in the state
    /// instead of being detected and traced out.
    bool keep = false;
};

struct DetectionPattern {
    std::vector<DetectionGroup> groups;
    /// Without number resolution a detected requirement n >= 1 means "at
    /// least one photon".
    bool number_resolving = false;
};

/// Post-selected mixture. Each branch is a distinct detected configuration,
/// normalized, with weight summing to 1 over branches.
struct ConditionalResult {
    double probability = 0.0;
    std::vector<WeightedState> branches;

    bool empty() const {
        return branches.empty();
    }
};

/// Projects `state` (which must have positive norm) onto `pattern`, traces
/// the detected photons, and renormalizes. An empty support yields
/// probability 0 and no branches.
ConditionalResult postselect(const PureState &state, const DetectionPattern &pattern);

/// Ancilla photon with amplitude `overlap` on internal label 0 and
/// sqrt(1 - overlap^2) on label 1, polarization jones * |H>.
PureState ancilla_photon(int spatial, const JonesMatrix &jones, double overlap);

struct FilterConfig {
    double reflectivity = 0.5;
    /// Prepares the ancilla polarization from H; d is analyzed in the same
    /// polarization.
    JonesMatrix ancilla_jones = JonesMatrix::Identity();
    double ancilla_overlap = 1.0;
    SplitterConvention convention = SplitterConvention::kStandard;
    /// Optional full splitter description; overrides reflectivity/convention.
    std::optional<SplitterSpec> splitter;

    SplitterSpec splitter_spec() const;
};

struct FilterOutcome {
    ConditionalResult conditional;
    /// Qutrit state of mode c with internal labels traced out; empty when the
    /// herald never fires.
    std::optional<DensityMatrix> rho;
    /// Principal component of rho with global phase fixed; exact output for
    /// indistinguishable photons.
    QutritVector effective = QutritVector::Zero();
    /// Heralding probability (one photon in d in the ancilla polarization, two
    /// photons in c).
    double probability = 0.0;
    double leakage = 0.0;
};

/// encode -> splitter -> herald -> decode. Throws std::invalid_argument for a
/// non-unit input or out-of-range parameters.
FilterOutcome run_filter(const QutritVector &input, const FilterConfig &config);

/// Pass probabilities for the three logical basis inputs.
std::array<double, 3> filter_pass_probabilities(const FilterConfig &config);

struct JointOutcome {
    /// Qubit (mode d polarization) tensor qutrit (mode c), 2x3 bipartition.
    std::optional<DensityMatrix> rho;
    double probability = 0.0;
    double leakage = 0.0;
};

/// HWP(theta) on |0_3> in a, ancilla in b, condition on two photons in c and
/// one in d, keep d's polarization as a qubit.
JointOutcome run_joint(double theta, const FilterConfig &config);

/// Ideal amplitudes of the joint state over |x_2, j_3>, normalized.
Eigen::VectorXcd ideal_joint_state(double theta);

/// Visibility (P_dist - P_int) / P_dist of the coincidence pattern with n_a
/// H photons in a and the ancilla in b: n_a = 1 -> one photon each in c and
/// d; n_a = 2 -> two in c and one in d. P_dist is at overlap 0. At R = 1/2
/// the n_a = 2 value never exceeds 2/3.
double hom_visibility(int n_a, double overlap, double reflectivity);

/// Same dip scaled by its ideal depth: (P_dist - P_int) / (P_dist - P_1).
double hom_visibility_normalized(int n_a, double overlap, double reflectivity);

/// Overlap at which hom_visibility_normalized reaches `target`.
double overlap_for_visibility(int n_a, double target, double reflectivity);

struct SourceSpec {
    double pair_amplitude = 0.1;
    int max_pairs = 2;
    double ancilla_overlap = 1.0;
};

/// Pair source feeding arms source1 (toward a) and source2 (toward the
/// herald splitter): sum_n chi^n (s1^dag s2_v^dag)^n / n! |vac>, truncated at
/// max_pairs and normalized. s2 photons carry the overlap through internal
/// labels.
PureState source_state(const SourceSpec &spec);

struct SourceCircuitConfig {
    SourceSpec source;
    double reflectivity = 0.5;
    double theta = 0.0;
    bool number_resolving = false;
};

/// Four-fold event probability of the full source-driven circuit: herald
/// fires, d fires in H, and both tomography outputs fire.
double source_fourfold_probability(const SourceCircuitConfig &config);

/// (P_dist - P_int) / P_dist of the four-fold rate, with P_dist at overlap 0.
double source_hom_visibility(const SourceCircuitConfig &config);

/// Extinction ratio as an experiment would measure it: the theta = pi/8 input
/// is analyzed in coincidence with the ancilla blocked (two-fold) and with the
/// filter heralded (four-fold); each logical population's transmission is the
/// ratio of the two rates. config.theta is ignored.
double source_extinction_ratio(const SourceCircuitConfig &config);

/// Event probability per setting for tomography of c (three-dimensional set,
/// d analyzed in H) or of d and c jointly (six-dimensional set, d analyzed by
/// the qubit analyzer). Every setting must carry analyzers.
std::vector<double> source_tomography_rates(const SourceCircuitConfig &config, const ProjectorSet &set);

}  // namespace biphoton
