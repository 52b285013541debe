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

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace biphoton {

using cplx = std::complex<double>;

inline constexpr double kDefaultPruneThreshold = 1e-14;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

/// One bosonic slot: spatial path, polarization, and a hidden internal label
/// used to model partial distinguishability (label 0 is the reference).
struct ModeId {
    int spatial = 0;
    Polarization polarization = Polarization::H;
    int internal = 0;

    auto operator<=>(const ModeId &) const = default;
    bool operator==(const ModeId &) const = default;

    std::string str() const;
};

/// Occupation numbers over ModeIds, stored sorted with no zero entries.
class FockBasisState {
   public:
    using Entry = std::pair<ModeId, int>;

    FockBasisState() = default;
    /// Canonicalizes: sorts, merges repeated modes, drops zero counts.
    /// Throws std::invalid_argument on a negative count.
    explicit FockBasisState(std::vector<Entry> entries);

    int count(const ModeId &mode) const;
    int total() const;
    bool empty() const {
        return entries_.empty();
    }
    std::span<const Entry> entries() const {
        return entries_;
    }

    /// Product of n! over all occupied modes.
    double factorial_product() const;

    FockBasisState with(const ModeId &mode, int delta) const;

    auto operator<=>(const FockBasisState &) const = default;
    bool operator==(const FockBasisState &) const = default;

    std::string str() const;

   private:
    std::vector<Entry> entries_;
};

/// Sparse superposition of Fock kets. Values are immutable once built; the
/// mutating `add` exists for construction only.
class PureState {
   public:
    using AmplitudeMap = std::map<FockBasisState, cplx>;

    PureState() = default;

    static PureState vacuum();
    static PureState basis(const FockBasisState &ket, cplx amplitude = 1.0);

    /// Accumulates `amplitude` onto `ket`.
    void add(const FockBasisState &ket, cplx amplitude);

    cplx amplitude(const FockBasisState &ket) const;
    const AmplitudeMap &amplitudes() const {
        return amplitudes_;
    }
    std::size_t size() const {
        return amplitudes_.size();
    }
    bool empty() const {
        return amplitudes_.empty();
    }

    double norm_squared() const {
        return norm_squared_;
    }
    double norm() const;

    PureState scaled(cplx factor) const;
    PureState pruned(double threshold = kDefaultPruneThreshold) const;
    std::set<ModeId> occupied_modes() const;

    /// Adds two states ket-wise.
    PureState plus(const PureState &other) const;

   private:
    AmplitudeMap amplitudes_;
    double norm_squared_ = 0.0;
};

/// One member of a classical mixture of pure states.
struct WeightedState {
    double weight = 0.0;
    PureState state;
};

enum class TransformKind { kUnitary, kIsometry };

/// Linear map on creation operators: a_i^dag -> sum_j M(j, i) b_j^dag.
///
/// With `label_blind` set (the default for optical elements), inputs and
/// outputs are given with internal label 0 and the map is applied to every
/// internal label independently, each photon keeping its label.
class ModeTransform {
   public:
    ModeTransform(std::vector<ModeId> inputs, std::vector<ModeId> outputs, Eigen::MatrixXcd matrix,
                  TransformKind kind, bool label_blind = true);

    const std::vector<ModeId> &inputs() const {
        return inputs_;
    }
    const std::vector<ModeId> &outputs() const {
        return outputs_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }
    TransformKind kind() const {
        return kind_;
    }
    bool label_blind() const {
        return label_blind_;
    }

    /// Index of `mode` among the inputs, honoring label blindness; -1 if absent.
    int input_index(const ModeId &mode) const;
    /// Output slot for column `j`, carrying internal label `label` when blind.
    ModeId output_mode(int j, int label) const;

   private:
    std::vector<ModeId> inputs_;
    std::vector<ModeId> outputs_;
    Eigen::MatrixXcd matrix_;
    TransformKind kind_;
    bool label_blind_;
};

/// `second` after `first`. The inputs of `second` must be a subset of the
/// outputs of `first`; untouched outputs of `first` pass through.
ModeTransform compose(const ModeTransform &first, const ModeTransform &second);

PureState apply_mode_transform(const PureState &state, const ModeTransform &transform,
                               double prune_threshold = kDefaultPruneThreshold);

cplx inner_product(const PureState &x, const PureState &y);

/// Throws std::invalid_argument if the two states share an occupied mode.
PureState tensor(const PureState &x, const PureState &y);

struct Normalized {
    PureState state;
    double norm;
};
/// Throws std::domain_error on the zero state.
Normalized normalize(const PureState &x);

}  // namespace biphoton
