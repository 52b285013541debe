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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/metrics.hpp"
#include "biphoton/optics.hpp"

namespace biphoton {

/// Polarizations passed by the analyzers realizing one setting. The qutrit
/// projector is the symmetrized product of `first` and `second`, measured as
/// a coincidence across the two outputs of a splitter.
struct Analyzers {
    std::optional<Eigen::Vector2cd> qubit;
    Eigen::Vector2cd first = Eigen::Vector2cd(1.0, 0.0);
    Eigen::Vector2cd second = Eigen::Vector2cd(1.0, 0.0);
};

/// Rank-one measurement: expected signal is weight * <state|rho|state>.
struct MeasurementSetting {
    std::string label;
    Eigen::VectorXcd state;
    double weight = 1.0;
    std::optional<Analyzers> analyzers;
};

class ProjectorSet {
   public:
    /// Throws std::invalid_argument on a non-unit or wrong-length state, a
    /// non-positive weight, duplicate labels, or a set that is not
    /// informationally complete.
    ProjectorSet(int dimension, std::vector<MeasurementSetting> settings,
                 std::optional<Bipartition> bipartition = std::nullopt);

    /// Nine two-photon projectors weighted by the coincidence efficiency of
    /// an ideal 50/50 splitter followed by polarization analyzers.
    static ProjectorSet qutrit();
    /// {H, V, D, R} on the qubit times the nine qutrit settings.
    static ProjectorSet qubit_qutrit();
    /// Qubit settings {H, V, D, R} combined with an arbitrary qutrit set.
    static ProjectorSet qubit_times(const ProjectorSet &qutrit_set);

    ProjectorSet with_uniform_weights() const;

    int dimension() const {
        return dimension_;
    }
    const std::optional<Bipartition> &bipartition() const {
        return bipartition_;
    }
    const std::vector<MeasurementSetting> &settings() const {
        return settings_;
    }
    std::size_t size() const {
        return settings_.size();
    }
    /// Index of `label`, or -1.
    int find(const std::string &label) const;

    /// weight_i * <state_i|m|state_i> for Hermitian m.
    std::vector<double> probabilities(const Eigen::MatrixXcd &m) const;

   private:
    int dimension_;
    std::vector<MeasurementSetting> settings_;
    std::optional<Bipartition> bipartition_;
    // Component-major copies for the batched forward model.
    std::vector<double> re_;
    std::vector<double> im_;
};

/// Labels and vectors of the nine qutrit analysis states, in set order.
std::vector<std::pair<std::string, Eigen::Vector3cd>> qutrit_analysis_states();

/// Two single-photon polarizations whose symmetrized product is parallel to
/// the qutrit vector `t` (roots of its polynomial).
std::array<Eigen::Vector2cd, 2> majorana_pair(const Eigen::Vector3cd &t);

/// Coincidence efficiency (1 + |<u|w>|^2) / 4 of analyzers u, w after an
/// ideal 50/50 splitter.
double analyzer_weight(const Eigen::Vector2cd &u, const Eigen::Vector2cd &w);

/// Coincidence probability for the |0_3>, |1_3>, |2_3> analyzers acting on
/// the matching basis state, from a photon-level simulation of the splitter
/// and analyzers.
std::array<double, 3> physical_analysis_probabilities();

/// Qutrit set whose states and weights are derived from a photon-level
/// simulation through `splitter` (c into the two analyzed outputs). The
/// ideal 50/50 splitter reproduces ProjectorSet::qutrit().
ProjectorSet calibrated_qutrit_projectors(const SplitterSpec &splitter);

/// Poisson counts with mean intensity * weight_i * <state_i|rho|state_i>,
/// so `intensity` is the expected count per setting for unit weight and
/// unit overlap.
std::vector<double> simulate_counts(const DensityMatrix &rho, const ProjectorSet &set, double intensity,
                                    std::uint64_t seed);

/// Intensity giving `mean_counts` expected counts per setting on average.
double intensity_for_mean_counts(const DensityMatrix &rho, const ProjectorSet &set, double mean_counts);

struct ReconstructOptions {
    int max_iterations = 10000;
    /// Stops when the relative cost reduction (actual and predicted), the
    /// gradient-residual cosine, or the chi-square per datum falls below this.
    double tolerance = 1e-10;
};

struct Reconstruction {
    DensityMatrix rho;
    /// Fitted trace of the unnormalized estimate (total intensity).
    double intensity = 0.0;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Weighted least-squares fit of rho = L L^dag over lower-triangular L.
/// Throws std::invalid_argument on a count/setting mismatch, negative
/// counts, or all-zero data.
Reconstruction reconstruct(std::span<const double> counts, const ProjectorSet &set,
                           const ReconstructOptions &options = {});

/// Unconstrained least-squares estimate (Hermitian, may be non-physical),
/// scaled like the counts.
Eigen::MatrixXcd linear_inversion(std::span<const double> counts, const ProjectorSet &set);

enum class Resample { kPoisson, kFixed };

struct MonteCarloOptions {
    int trials = 100;
    std::uint64_t seed = 0;
    int threads = 1;
    /// kFixed reuses the observed counts in every trial (zero spread).
    Resample resample = Resample::kPoisson;
    ReconstructOptions reconstruct;
};

struct Spread {
    double mean = 0.0;
    double stddev = 0.0;
};

struct MonteCarloResult {
    Spread fidelity;
    Spread linear_entropy;
    /// Only filled when the set has a bipartition.
    std::optional<Spread> negativity;
    int failed_trials = 0;
};

/// Resamples the counts, reconstructs each trial, and reports the spread of
/// the metrics against the pure target `ideal`. Trial t draws from its own
/// stream seeded by (seed, t), so results do not depend on `threads`.
/// Throws std::invalid_argument for fewer than two trials.
MonteCarloResult monte_carlo_errors(std::span<const double> counts, const ProjectorSet &set,
                                    const Eigen::VectorXcd &ideal, const MonteCarloOptions &options = {});

}  // namespace biphoton
