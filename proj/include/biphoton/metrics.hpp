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

#include <Eigen/Dense>

namespace biphoton {

/// Subsystem dimensions (A first) of a bipartite density matrix.
struct Bipartition {
    int dim_a = 2;
    int dim_b = 3;

    bool operator==(const Bipartition &) const = default;
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kEigenvalueTolerance = 1e-9;

/// Hermitian, positive semidefinite, unit-trace matrix. Validated on
/// construction; throws std::invalid_argument otherwise.
class DensityMatrix {
   public:
    explicit DensityMatrix(Eigen::MatrixXcd matrix, std::optional<Bipartition> bipartition = std::nullopt);

    static DensityMatrix from_pure(const Eigen::VectorXcd &psi,
                                   std::optional<Bipartition> bipartition = std::nullopt);
    static DensityMatrix maximally_mixed(int dimension, std::optional<Bipartition> bipartition = std::nullopt);
    /// Hermitizes and divides by the trace; the trace must be positive.
    static DensityMatrix from_unnormalized(const Eigen::MatrixXcd &matrix,
                                           std::optional<Bipartition> bipartition = std::nullopt);

    int dimension() const {
        return static_cast<int>(matrix_.rows());
    }
    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }
    const std::optional<Bipartition> &bipartition() const {
        return bipartition_;
    }
    DensityMatrix with_bipartition(Bipartition b) const;

   private:
    Eigen::MatrixXcd matrix_;
    std::optional<Bipartition> bipartition_;
};

/// <psi|rho|psi> for a normalized target. Throws on dimension mismatch.
double fidelity(const DensityMatrix &rho, const Eigen::VectorXcd &psi);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Half the trace norm of the difference.
double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// d (1 - tr rho^2) / (d - 1), so pure states give 0 and I/d gives 1.
double linear_entropy(const DensityMatrix &rho);

/// Partial transpose over subsystem A.
Eigen::MatrixXcd partial_transpose_a(const Eigen::MatrixXcd &rho, Bipartition b);

/// ||rho^{T_A}||_1 - 1, i.e. twice the magnitude of the negative spectrum.
/// Throws std::invalid_argument when no bipartition is attached.
double negativity(const DensityMatrix &rho);

/// Same quantity computed from singular values instead of eigenvalues.
double negativity_trace_norm(const DensityMatrix &rho);

/// mean(p0, p2) / p1; +infinity when p1 == 0. Throws std::invalid_argument
/// when every probability is zero.
double extinction_ratio(double p0, double p1, double p2);

}  // namespace biphoton
