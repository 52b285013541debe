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

#include "biphoton/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "biphoton/circuit.hpp"
#include "biphoton/kernels.hpp"
#include "biphoton/qutrit.hpp"

namespace biphoton {

namespace {

constexpr double kUnitTolerance = 1e-9;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Row of the linear map X -> <phi|X|phi> over the real Hermitian basis
// {E_jj, E_jk + E_kj, i(E_jk - E_kj)}.
Eigen::RowVectorXd design_row(const Eigen::VectorXcd &phi, double weight) {
    const int d = static_cast<int>(phi.size());
    Eigen::RowVectorXd row(d * d);
    int m = 0;
    for (int j = 0; j < d; ++j) {
        row(m++) = weight * std::norm(phi(j));
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            const cplx z = std::conj(phi(j)) * phi(k);
            row(m++) = weight * 2.0 * z.real();
            row(m++) = weight * -2.0 * z.imag();
        }
    }
    return row;
}

Eigen::MatrixXcd from_hermitian_coords(const Eigen::VectorXd &x, int d) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    int m = 0;
    for (int j = 0; j < d; ++j) {
        out(j, j) = x(m++);
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            const cplx v(x(m), x(m + 1));
            m += 2;
            out(j, k) = v;
            out(k, j) = std::conj(v);
        }
    }
    return out;
}

Eigen::MatrixXd design_matrix(const ProjectorSet &set) {
    const int d = set.dimension();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(set.size()), d * d);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto &s = set.settings()[i];
        a.row(static_cast<Eigen::Index>(i)) = design_row(s.state, s.weight);
    }
    return a;
}

// Lower-triangular L: real diagonal first, then (re, im) of each strictly
// lower entry in row-major order.
Eigen::MatrixXcd unpack_cholesky(const Eigen::VectorXd &x, int d) {
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(d, d);
    int m = 0;
    for (int j = 0; j < d; ++j) {
        l(j, j) = x(m++);
    }
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            l(j, k) = cplx(x(m), x(m + 1));
            m += 2;
        }
    }
    return l;
}

Eigen::VectorXd pack_cholesky(const Eigen::MatrixXcd &l) {
    const int d = static_cast<int>(l.rows());
    Eigen::VectorXd x(d * d);
    int m = 0;
    for (int j = 0; j < d; ++j) {
        x(m++) = l(j, j).real();
    }
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            x(m++) = l(j, k).real();
            x(m++) = l(j, k).imag();
        }
    }
    return x;
}

Eigen::Matrix2cd analyzer_rotation(const Eigen::Vector2cd &u) {
    // Unitary taking u to H.
    Eigen::Matrix2cd j;
    j << std::conj(u(0)), std::conj(u(1)), -u(1), u(0);
    return j;
}

void check_counts(std::span<const double> counts, const ProjectorSet &set) {
    if (counts.size() != set.size()) {
        throw std::invalid_argument("count vector length does not match the projector set");
    }
    double total = 0.0;
    for (double n : counts) {
        if (!(n >= 0.0) || !std::isfinite(n)) {
            throw std::invalid_argument("counts must be finite and non-negative");
        }
        total += n;
    }
    if (total <= 0.0) {
        throw std::invalid_argument("all counts are zero");
    }
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd &x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x);
    const Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
}

// Accelerated projected gradient on the convex weighted least-squares
// problem over PSD matrices, used to seed the Cholesky fit.
Eigen::MatrixXcd psd_seed(std::span<const double> counts, const ProjectorSet &set, const Eigen::VectorXd &sigma,
                          const Eigen::MatrixXcd &start) {
    const int n = static_cast<int>(set.size());
    // Lipschitz constant of the gradient in the Frobenius metric.
    const int d = set.dimension();
    Eigen::MatrixXd a(n, d * d);
    for (int i = 0; i < n; ++i) {
        const auto &s = set.settings()[static_cast<std::size_t>(i)];
        Eigen::RowVectorXd row = design_row(s.state, s.weight);
        for (int m = d; m < d * d; ++m) {
            row(m) /= std::numbers::sqrt2;  // orthonormal off-diagonal basis
        }
        a.row(i) = row / sigma(i);
    }
    const double lipschitz = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    const double step = 1.0 / (lipschitz * lipschitz);

    auto gradient = [&](const Eigen::MatrixXcd &x) {
        const std::vector<double> p = set.probabilities(x);
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 0; i < n; ++i) {
            const auto &s = set.settings()[static_cast<std::size_t>(i)];
            const auto u = static_cast<std::size_t>(i);
            const double coeff = (p[u] - counts[u]) / (sigma(i) * sigma(i)) * s.weight;
            g += coeff * s.state * s.state.adjoint();
        }
        return g;
    };

    Eigen::MatrixXcd x = project_psd(start);
    Eigen::MatrixXcd y = x;
    double t = 1.0;
    for (int it = 0; it < 5000; ++it) {
        const Eigen::MatrixXcd next = project_psd(y - step * gradient(y));
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double change = (next - x).norm();
        y = next + ((t - 1.0) / t_next) * (next - x);
        x = next;
        t = t_next;
        if (change <= 1e-13 * std::max(1.0, x.norm())) {
            break;
        }
    }
    return x;
}

}  // namespace

ProjectorSet::ProjectorSet(int dimension, std::vector<MeasurementSetting> settings,
                           std::optional<Bipartition> bipartition)
    : dimension_(dimension), settings_(std::move(settings)), bipartition_(bipartition) {
    if (dimension_ < 1) {
        throw std::invalid_argument("projector set dimension must be positive");
    }
    if (bipartition_ && bipartition_->dim_a * bipartition_->dim_b != dimension_) {
        throw std::invalid_argument("bipartition does not match the projector set dimension");
    }
    std::set<std::string> labels;
    for (const auto &s : settings_) {
        if (s.state.size() != dimension_) {
            throw std::invalid_argument("setting '" + s.label + "' has the wrong dimension");
        }
        if (std::abs(s.state.norm() - 1.0) > kUnitTolerance) {
            throw std::invalid_argument("setting '" + s.label + "' is not a unit vector");
        }
        if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
            throw std::invalid_argument("setting '" + s.label + "' needs a positive weight");
        }
        if (!labels.insert(s.label).second) {
            throw std::invalid_argument("duplicate setting label '" + s.label + "'");
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design_matrix(*this));
    qr.setThreshold(1e-10);
    if (qr.rank() < dimension_ * dimension_) {
        throw std::invalid_argument("projector set is not informationally complete");
    }

    const std::size_t n = settings_.size();
    re_.assign(n * static_cast<std::size_t>(dimension_), 0.0);
    im_.assign(re_.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (int i = 0; i < dimension_; ++i) {
            re_[static_cast<std::size_t>(i) * n + k] = settings_[k].state(i).real();
            im_[static_cast<std::size_t>(i) * n + k] = settings_[k].state(i).imag();
        }
    }
}

std::vector<std::pair<std::string, Eigen::Vector3cd>> qutrit_analysis_states() {
    const cplx i(0.0, 1.0);
    const double s = kInvSqrt2;
    return {
        {"0", {1.0, 0.0, 0.0}},
        {"1", {0.0, 1.0, 0.0}},
        {"2", {0.0, 0.0, 1.0}},
        {"0+1", {s, s, 0.0}},
        {"0+i1", {s, i * s, 0.0}},
        {"1+2", {0.0, s, s}},
        {"1+i2", {0.0, s, i * s}},
        {"0+2", {s, 0.0, s}},
        {"0+i2", {s, 0.0, i * s}},
    };
}

std::array<Eigen::Vector2cd, 2> majorana_pair(const Eigen::Vector3cd &t) {
    if (t.norm() == 0.0) {
        throw std::invalid_argument("majorana_pair: zero vector");
    }
    const Eigen::Vector2cd v(0.0, 1.0);
    if (std::abs(t(0)) <= 1e-14 * t.norm()) {
        // One factor is V; the other follows from the remaining components.
        Eigen::Vector2cd w(std::numbers::sqrt2 * t(1), t(2));
        return {v, w.normalized()};
    }
    // Roots of z^2 - (sqrt2 t1 / t0) z + t2 / t0.
    const cplx b = std::numbers::sqrt2 * t(1) / t(0);
    const cplx c = t(2) / t(0);
    const cplx disc = std::sqrt(b * b - 4.0 * c);
    const cplx z1 = (b + disc) / 2.0;
    const cplx z2 = (b - disc) / 2.0;
    return {Eigen::Vector2cd(1.0, z1).normalized(), Eigen::Vector2cd(1.0, z2).normalized()};
}

double analyzer_weight(const Eigen::Vector2cd &u, const Eigen::Vector2cd &w) {
    return (1.0 + std::norm(u.dot(w))) / 4.0;
}

ProjectorSet ProjectorSet::qutrit() {
    std::vector<MeasurementSetting> settings;
    for (const auto &[label, t] : qutrit_analysis_states()) {
        const auto [u, w] = majorana_pair(t);
        settings.push_back({label, t, analyzer_weight(u, w), Analyzers{std::nullopt, u, w}});
    }
    return ProjectorSet(3, std::move(settings));
}

ProjectorSet ProjectorSet::qubit_times(const ProjectorSet &qutrit_set) {
    if (qutrit_set.dimension() != 3) {
        throw std::invalid_argument("qubit_times expects a qutrit set");
    }
    const cplx i(0.0, 1.0);
    const std::vector<std::pair<std::string, Eigen::Vector2cd>> qubit = {
        {"H", {1.0, 0.0}},
        {"V", {0.0, 1.0}},
        {"D", {kInvSqrt2, kInvSqrt2}},
        {"R", {kInvSqrt2, -i * kInvSqrt2}},
    };
    std::vector<MeasurementSetting> settings;
    for (const auto &[ql, q] : qubit) {
        for (const auto &s : qutrit_set.settings()) {
            Eigen::VectorXcd joint(6);
            for (int x = 0; x < 2; ++x) {
                joint.segment(x * 3, 3) = q(x) * s.state;
            }
            std::optional<Analyzers> an;
            if (s.analyzers) {
                an = *s.analyzers;
                an->qubit = q;
            }
            settings.push_back({ql + ":" + s.label, joint, s.weight, an});
        }
    }
    return ProjectorSet(6, std::move(settings), Bipartition{2, 3});
}

ProjectorSet ProjectorSet::qubit_qutrit() {
    return qubit_times(qutrit());
}

ProjectorSet ProjectorSet::with_uniform_weights() const {
    std::vector<MeasurementSetting> settings = settings_;
    for (auto &s : settings) {
        s.weight = 1.0;
    }
    return ProjectorSet(dimension_, std::move(settings), bipartition_);
}

int ProjectorSet::find(const std::string &label) const {
    for (std::size_t i = 0; i < settings_.size(); ++i) {
        if (settings_[i].label == label) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::vector<double> ProjectorSet::probabilities(const Eigen::MatrixXcd &m) const {
    if (m.rows() != dimension_ || m.cols() != dimension_) {
        throw std::invalid_argument("operator dimension does not match the projector set");
    }
    const std::size_t d2 = static_cast<std::size_t>(dimension_) * static_cast<std::size_t>(dimension_);
    std::vector<double> m_re(d2), m_im(d2);
    for (int r = 0; r < dimension_; ++r) {
        for (int c = 0; c < dimension_; ++c) {
            m_re[static_cast<std::size_t>(r * dimension_ + c)] = m(r, c).real();
            m_im[static_cast<std::size_t>(r * dimension_ + c)] = m(r, c).imag();
        }
    }
    std::vector<double> out(settings_.size());
    kernels::hermitian_forms(m_re, m_im, {re_, im_, dimension_, static_cast<int>(settings_.size())}, out);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] *= settings_[k].weight;
    }
    return out;
}

namespace {

// Amplitudes, for each logical basis input in c, of one photon passing
// analyzer u in output E and one passing w in output F.
Eigen::Vector3cd coincidence_amplitudes(const SplitterSpec &splitter, const Eigen::Vector2cd &u,
                                        const Eigen::Vector2cd &w) {
    using namespace modes;
    const ModeTransform split = beam_splitter(splitter, kC, kLossBase + 20, kTomoE, kTomoF);
    const ModeTransform rot_e = jones_transform(analyzer_rotation(u), kTomoE);
    const ModeTransform rot_f = jones_transform(analyzer_rotation(w), kTomoF);
    const ModeTransform pol_e = polarizer(Polarization::H, kTomoE, kLossBase + 21);
    const ModeTransform pol_f = polarizer(Polarization::H, kTomoF, kLossBase + 22);
    const FockBasisState target({{ModeId{kTomoE, Polarization::H, 0}, 1}, {ModeId{kTomoF, Polarization::H, 0}, 1}});

    Eigen::Vector3cd out;
    for (int k = 0; k < 3; ++k) {
        PureState s = encode(QutritVector::Unit(k), kC);
        for (const ModeTransform *t : {&split, &rot_e, &rot_f, &pol_e, &pol_f}) {
            s = apply_mode_transform(s, *t);
        }
        out(k) = s.amplitude(target);
    }
    return out;
}

}  // namespace

std::array<double, 3> physical_analysis_probabilities() {
    const SplitterSpec splitter = SplitterSpec::balanced(0.5);
    const Eigen::Vector2cd h(1.0, 0.0);
    const Eigen::Vector2cd v(0.0, 1.0);
    return {
        std::norm(coincidence_amplitudes(splitter, h, h)(0)),
        std::norm(coincidence_amplitudes(splitter, h, v)(1)),
        std::norm(coincidence_amplitudes(splitter, v, v)(2)),
    };
}

ProjectorSet calibrated_qutrit_projectors(const SplitterSpec &splitter) {
    const ProjectorSet ideal = ProjectorSet::qutrit();
    std::vector<MeasurementSetting> settings;
    for (const auto &s : ideal.settings()) {
        const Eigen::Vector3cd a = coincidence_amplitudes(splitter, s.analyzers->first, s.analyzers->second);
        const double weight = a.squaredNorm();
        if (weight <= 0.0) {
            throw std::invalid_argument("setting '" + s.label + "' never fires through this splitter");
        }
        // P = |sum_k psi_k a_k|^2 = weight |<conj(a)/|a| | psi>|^2.
        Eigen::VectorXcd state = a.conjugate() / std::sqrt(weight);
        settings.push_back({s.label, state, weight, s.analyzers});
    }
    return ProjectorSet(3, std::move(settings));
}

double intensity_for_mean_counts(const DensityMatrix &rho, const ProjectorSet &set, double mean_counts) {
    const std::vector<double> p = set.probabilities(rho.matrix());
    double total = 0.0;
    for (double x : p) {
        total += x;
    }
    if (total <= 0.0) {
        throw std::invalid_argument("state gives no signal on this projector set");
    }
    return mean_counts * static_cast<double>(p.size()) / total;
}

std::vector<double> simulate_counts(const DensityMatrix &rho, const ProjectorSet &set, double intensity,
                                    std::uint64_t seed) {
    if (rho.dimension() != set.dimension()) {
        throw std::invalid_argument("state dimension does not match the projector set");
    }
    if (!(intensity >= 0.0)) {
        throw std::invalid_argument("intensity must be non-negative");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    for (double p : set.probabilities(rho.matrix())) {
        const double mean = intensity * std::max(0.0, p);
        if (mean <= 0.0) {
            out.push_back(0.0);
            continue;
        }
        std::poisson_distribution<long long> dist(mean);
        out.push_back(static_cast<double>(dist(rng)));
    }
    return out;
}

Eigen::MatrixXcd linear_inversion(std::span<const double> counts, const ProjectorSet &set) {
    check_counts(counts, set);
    const Eigen::MatrixXd a = design_matrix(set);
    const Eigen::VectorXd n = Eigen::Map<const Eigen::VectorXd>(counts.data(), static_cast<Eigen::Index>(counts.size()));
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(n);
    return from_hermitian_coords(x, set.dimension());
}

Reconstruction reconstruct(std::span<const double> counts, const ProjectorSet &set,
                           const ReconstructOptions &options) {
    check_counts(counts, set);
    const int d = set.dimension();
    const int n = static_cast<int>(set.size());
    const int np = d * d;

    Eigen::VectorXd sigma(n);
    for (int i = 0; i < n; ++i) {
        sigma(i) = std::sqrt(std::max(counts[static_cast<std::size_t>(i)], 1.0));
    }

    // Seed from the convex problem over PSD matrices, then add a small
    // full-rank floor so every Cholesky column can move.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(psd_seed(counts, set, sigma, linear_inversion(counts, set)));
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    double total = evals.sum();
    if (total <= 0.0) {
        total = 1.0;
    }
    evals.array() += 1e-6 * total / d;
    const Eigen::MatrixXcd start = es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::VectorXd x = pack_cholesky(start.llt().matrixL());

    auto residuals = [&](const Eigen::VectorXd &params) {
        const Eigen::MatrixXcd l = unpack_cholesky(params, d);
        const std::vector<double> p = set.probabilities(l * l.adjoint());
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) {
            r(i) = (p[static_cast<std::size_t>(i)] - counts[static_cast<std::size_t>(i)]) / sigma(i);
        }
        return r;
    };
    auto jacobian = [&](const Eigen::VectorXd &params) {
        const Eigen::MatrixXcd l = unpack_cholesky(params, d);
        Eigen::MatrixXd jac(n, np);
        for (int i = 0; i < n; ++i) {
            const auto &s = set.settings()[static_cast<std::size_t>(i)];
            const Eigen::VectorXcd y = l.adjoint() * s.state;
            const double scale = 2.0 * s.weight / sigma(i);
            int m = 0;
            for (int j = 0; j < d; ++j) {
                jac(i, m++) = scale * (std::conj(y(j)) * s.state(j)).real();
            }
            for (int j = 0; j < d; ++j) {
                for (int k = 0; k < j; ++k) {
                    const cplx z = std::conj(y(k)) * s.state(j);
                    jac(i, m++) = scale * z.real();
                    jac(i, m++) = scale * z.imag();
                }
            }
        }
        return jac;
    };

    Eigen::VectorXd r = residuals(x);
    double cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    // An exact fit (chi-square per datum below tolerance) also ends the
    // search; rank-deficient states otherwise approach it sublinearly.
    const double exact_fit = 0.5 * options.tolerance * static_cast<double>(r.size());
    while (iter < options.max_iterations) {
        if (cost <= exact_fit) {
            converged = true;
            break;
        }
        ++iter;
        const Eigen::MatrixXd jac = jacobian(x);
        const Eigen::VectorXd g = jac.transpose() * r;
        // Stationarity: largest cosine between the residual and a column.
        const double rnorm = r.norm();
        double worst = 0.0;
        if (rnorm > 0.0) {
            for (int m = 0; m < np; ++m) {
                const double cn = jac.col(m).norm();
                if (cn > 0.0) {
                    worst = std::max(worst, std::abs(g(m)) / (cn * rnorm));
                }
            }
        }
        if (worst <= options.tolerance) {
            converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12 * std::max(1.0, jtj.diagonal().maxCoeff()));
        bool accepted = false;
        while (lambda < 1e20) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd trial = x + step;
            const Eigen::VectorXd r_trial = residuals(trial);
            const double c_trial = 0.5 * r_trial.squaredNorm();
            if (c_trial < cost) {
                // Relative actual and predicted reductions of the cost.
                const double predicted = -(g.dot(step) + 0.5 * (jac * step).squaredNorm()) / cost;
                const double actual = (cost - c_trial) / cost;
                x = trial;
                r = r_trial;
                cost = c_trial;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (actual <= options.tolerance && predicted <= options.tolerance && actual <= 2.0 * predicted) {
                    converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            // No decrease is representable: numerically stationary.
            converged = true;
            break;
        }
        if (converged) {
            break;
        }
    }

    const Eigen::MatrixXcd l = unpack_cholesky(x, d);
    const Eigen::MatrixXcd unnorm = l * l.adjoint();
    const double trace = unnorm.trace().real();
    if (!(trace > 0.0)) {
        throw std::runtime_error("reconstruction collapsed to the zero matrix");
    }
    return {DensityMatrix::from_unnormalized(unnorm, set.bipartition()), trace, cost, iter, converged};
}

MonteCarloResult monte_carlo_errors(std::span<const double> counts, const ProjectorSet &set,
                                    const Eigen::VectorXcd &ideal, const MonteCarloOptions &options) {
    check_counts(counts, set);
    if (options.trials < 2) {
        throw std::invalid_argument("monte carlo needs at least two trials");
    }
    const int trials = options.trials;
    const bool bipartite = set.bipartition().has_value();
    std::vector<double> fid(static_cast<std::size_t>(trials));
    std::vector<double> ent(fid.size());
    std::vector<double> neg(fid.size());
    std::vector<char> ok(fid.size(), 0);

    auto run = [&](int t) {
        std::vector<double> sample(counts.begin(), counts.end());
        if (options.resample == Resample::kPoisson) {
            std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(t)};
            std::mt19937_64 rng(seq);
            for (double &n : sample) {
                if (n > 0.0) {
                    std::poisson_distribution<long long> dist(n);
                    n = static_cast<double>(dist(rng));
                }
            }
        }
        try {
            const Reconstruction rec = reconstruct(sample, set, options.reconstruct);
            const auto u = static_cast<std::size_t>(t);
            fid[u] = fidelity(rec.rho, ideal);
            ent[u] = linear_entropy(rec.rho);
            neg[u] = bipartite ? negativity(rec.rho) : 0.0;
            ok[u] = rec.converged ? 1 : 0;
        } catch (const std::exception &) {
            ok[static_cast<std::size_t>(t)] = 0;
        }
    };

    const int threads = std::clamp(options.threads, 1, trials);
    if (threads == 1) {
        for (int t = 0; t < trials; ++t) {
            run(t);
        }
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (int t = w; t < trials; t += threads) {
                    run(t);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    auto spread = [&](const std::vector<double> &xs) {
        Spread s;
        int count = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (ok[i]) {
                s.mean += xs[i];
                ++count;
            }
        }
        if (count == 0) {
            return s;
        }
        s.mean /= count;
        double var = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (ok[i]) {
                var += (xs[i] - s.mean) * (xs[i] - s.mean);
            }
        }
        s.stddev = count > 1 ? std::sqrt(var / (count - 1)) : 0.0;
        return s;
    };

    MonteCarloResult out;
    out.fidelity = spread(fid);
    out.linear_entropy = spread(ent);
    if (bipartite) {
        out.negativity = spread(neg);
    }
    out.failed_trials = static_cast<int>(std::count(ok.begin(), ok.end(), 0));
    return out;
}

}  // namespace biphoton
