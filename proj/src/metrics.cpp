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

#include "biphoton/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace biphoton {

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

void check_bipartition(const Eigen::MatrixXcd &m, const std::optional<Bipartition> &b) {
    if (b && b->dim_a * b->dim_b != m.rows()) {
        throw std::invalid_argument("bipartition " + std::to_string(b->dim_a) + "x" + std::to_string(b->dim_b) +
                                    " does not match dimension " + std::to_string(m.rows()));
    }
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, std::optional<Bipartition> bipartition)
    : matrix_(std::move(matrix)), bipartition_(bipartition) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
    check_bipartition(matrix_, bipartition_);
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - 1.0) > kTraceTolerance) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kEigenvalueTolerance) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd &psi, std::optional<Bipartition> bipartition) {
    double n = psi.norm();
    if (!(n > 0.0)) {
        throw std::invalid_argument("cannot build a density matrix from the zero vector");
    }
    Eigen::VectorXcd u = psi / n;
    return DensityMatrix(u * u.adjoint(), bipartition);
}

DensityMatrix DensityMatrix::maximally_mixed(int dimension, std::optional<Bipartition> bipartition) {
    return DensityMatrix(Eigen::MatrixXcd::Identity(dimension, dimension) / static_cast<double>(dimension),
                         bipartition);
}

DensityMatrix DensityMatrix::from_unnormalized(const Eigen::MatrixXcd &matrix,
                                               std::optional<Bipartition> bipartition) {
    Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
    double tr = h.trace().real();
    if (!(tr > 0.0)) {
        throw std::invalid_argument("cannot normalize a matrix with non-positive trace");
    }
    return DensityMatrix(h / tr, bipartition);
}

DensityMatrix DensityMatrix::with_bipartition(Bipartition b) const {
    return DensityMatrix(matrix_, b);
}

double fidelity(const DensityMatrix &rho, const Eigen::VectorXcd &psi) {
    if (psi.size() != rho.dimension()) {
        throw std::invalid_argument("fidelity: target dimension " + std::to_string(psi.size()) +
                                    " does not match density matrix dimension " + std::to_string(rho.dimension()));
    }
    Eigen::VectorXcd u = psi / psi.norm();
    double f = (u.adjoint() * rho.matrix() * u)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

double state_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dimension() != sigma.dimension()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    Eigen::MatrixXcd s = psd_sqrt(rho.matrix());
    Eigen::MatrixXcd inner = s * sigma.matrix() * s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    double root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(root * root, 0.0, 1.0);
}

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dimension() != sigma.dimension()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double linear_entropy(const DensityMatrix &rho) {
    const double d = rho.dimension();
    if (d < 2) {
        return 0.0;
    }
    double purity = (rho.matrix() * rho.matrix()).trace().real();
    return std::clamp(d * (1.0 - purity) / (d - 1.0), 0.0, 1.0);
}

Eigen::MatrixXcd partial_transpose_a(const Eigen::MatrixXcd &rho, Bipartition b) {
    // Index i = a * dim_b + k.
    Eigen::MatrixXcd out(rho.rows(), rho.cols());
    for (int a1 = 0; a1 < b.dim_a; ++a1) {
        for (int a2 = 0; a2 < b.dim_a; ++a2) {
            out.block(a1 * b.dim_b, a2 * b.dim_b, b.dim_b, b.dim_b) =
                rho.block(a2 * b.dim_b, a1 * b.dim_b, b.dim_b, b.dim_b);
        }
    }
    return out;
}

double negativity(const DensityMatrix &rho) {
    if (!rho.bipartition()) {
        throw std::invalid_argument("negativity requires a bipartition");
    }
    Eigen::MatrixXcd pt = partial_transpose_a(rho.matrix(), *rho.bipartition());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    double negative = 0.0;
    for (double ev : es.eigenvalues()) {
        if (ev < 0.0) {
            negative += ev;
        }
    }
    return -2.0 * negative;
}

double negativity_trace_norm(const DensityMatrix &rho) {
    if (!rho.bipartition()) {
        throw std::invalid_argument("negativity requires a bipartition");
    }
    Eigen::MatrixXcd pt = partial_transpose_a(rho.matrix(), *rho.bipartition());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pt);
    return svd.singularValues().sum() - 1.0;
}

double extinction_ratio(double p0, double p1, double p2) {
    if (p0 == 0.0 && p1 == 0.0 && p2 == 0.0) {
        throw std::invalid_argument("extinction ratio undefined: every pass probability is zero");
    }
    if (p1 == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 0.5 * (p0 + p2) / p1;
}

}  // namespace biphoton
