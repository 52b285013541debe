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

#include "biphoton/qutrit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "biphoton/kernels.hpp"

namespace biphoton {

namespace {

constexpr double kUnitTolerance = 1e-9;
const double kSqrt2 = std::numbers::sqrt2;

int pol_index(Polarization p) {
    return p == Polarization::H ? 0 : 1;
}

// Environment of a logical component: every photon outside the logical
// modes plus the internal labels of the logical photons, in order.
using EnvKey = std::tuple<FockBasisState, int, int, int>;

}  // namespace

PureState encode(const QutritVector &q, int spatial) {
    if (std::abs(q.norm() - 1.0) > kUnitTolerance) {
        throw std::invalid_argument("encode: qutrit vector is not normalized");
    }
    const ModeId h{spatial, Polarization::H, 0};
    const ModeId v{spatial, Polarization::V, 0};
    PureState out;
    out.add(FockBasisState({{h, 2}}), q(0));
    out.add(FockBasisState({{h, 1}, {v, 1}}), q(1));
    out.add(FockBasisState({{v, 2}}), q(2));
    return out.pruned(0.0);
}

LogicalProjection project_logical(std::span<const WeightedState> ensemble, int qutrit_spatial,
                                   std::optional<int> qubit_spatial) {
    const bool with_qubit = qubit_spatial.has_value();
    LogicalProjection out;
    out.dimension = with_qubit ? 6 : 3;
    out.rho = Eigen::MatrixXcd::Zero(out.dimension, out.dimension);

    // Polarization amplitudes in first quantization: index qubit*4 + p1*2 + p2.
    std::map<EnvKey, std::array<cplx, 8>> envs;
    for (const auto &member : ensemble) {
        if (member.weight < 0.0) {
            throw std::invalid_argument("project_logical: negative ensemble weight");
        }
        const double scale = std::sqrt(member.weight);
        out.input_weight += member.weight * member.state.norm_squared();
        envs.clear();

        for (const auto &[ket, amp] : member.state.amplitudes()) {
            std::vector<std::pair<ModeId, int>> logical_c;
            std::vector<std::pair<ModeId, int>> logical_d;
            std::vector<FockBasisState::Entry> rest;
            int n_c = 0;
            int n_d = 0;
            for (const auto &e : ket.entries()) {
                if (e.first.spatial == qutrit_spatial) {
                    logical_c.push_back(e);
                    n_c += e.second;
                } else if (with_qubit && e.first.spatial == *qubit_spatial) {
                    logical_d.push_back(e);
                    n_d += e.second;
                } else {
                    rest.push_back(e);
                }
            }
            const cplx a = amp * scale;
            if (n_c != 2 || (with_qubit && n_d != 1)) {
                out.leakage_weight += std::norm(a);
                continue;
            }
            const FockBasisState rest_key(std::move(rest));
            int qubit_pol = 0;
            int qubit_label = -1;
            if (with_qubit) {
                qubit_pol = pol_index(logical_d[0].first.polarization);
                qubit_label = logical_d[0].first.internal;
            }

            // Symmetrized first-quantized expansion of the two c photons.
            std::vector<std::tuple<ModeId, ModeId, double>> orderings;
            if (logical_c.size() == 1) {
                orderings.emplace_back(logical_c[0].first, logical_c[0].first, 1.0);
            } else {
                const double c = std::sqrt(0.5);
                orderings.emplace_back(logical_c[0].first, logical_c[1].first, c);
                orderings.emplace_back(logical_c[1].first, logical_c[0].first, c);
            }
            for (const auto &[m1, m2, coeff] : orderings) {
                auto &vec = envs.try_emplace(EnvKey{rest_key, qubit_label, m1.internal, m2.internal},
                                             std::array<cplx, 8>{})
                                .first->second;
                vec[qubit_pol * 4 + pol_index(m1.polarization) * 2 + pol_index(m2.polarization)] += a * coeff;
            }
        }

        for (const auto &[key, vec] : envs) {
            Eigen::VectorXcd logical(out.dimension);
            const int n_qubit = with_qubit ? 2 : 1;
            for (int x = 0; x < n_qubit; ++x) {
                const cplx hh = vec[x * 4 + 0];
                const cplx hv = vec[x * 4 + 1];
                const cplx vh = vec[x * 4 + 2];
                const cplx vv = vec[x * 4 + 3];
                logical(x * 3 + 0) = hh;
                logical(x * 3 + 1) = (hv + vh) / kSqrt2;
                logical(x * 3 + 2) = vv;
                out.leakage_weight += std::norm((hv - vh) / kSqrt2);
            }
            if (logical.squaredNorm() == 0.0) {
                continue;
            }
            out.rho += logical * logical.adjoint();
            out.components.push_back(std::move(logical));
        }
    }
    return out;
}

Decoded decode(const PureState &s, int spatial) {
    const WeightedState member{1.0, s};
    LogicalProjection proj = project_logical(std::span(&member, 1), spatial);
    Decoded out;
    if (proj.input_weight <= 0.0 || proj.components.empty()) {
        return out;
    }
    if (proj.components.size() == 1) {
        const Eigen::VectorXcd &v = proj.components[0];
        out.state = v / v.norm();
        out.leakage = std::clamp(1.0 - v.squaredNorm() / proj.input_weight, 0.0, 1.0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj.rho);
    out.state = fix_global_phase(es.eigenvectors().col(2));
    out.leakage = std::clamp(1.0 - es.eigenvalues()(2) / proj.input_weight, 0.0, 1.0);
    return out;
}

QutritOperator jones_to_qutrit(const JonesMatrix &j) {
    const cplx a = j(0, 0);
    const cplx b = j(0, 1);
    const cplx c = j(1, 0);
    const cplx d = j(1, 1);
    QutritOperator out;
    out.matrix << a * a, kSqrt2 * a * b, b * b,  //
        kSqrt2 * a * c, a * d + b * c, kSqrt2 * b * d,  //
        c * c, kSqrt2 * c * d, d * d;
    out.kind = is_unitary(j) ? QutritOperator::Kind::kUnitary : QutritOperator::Kind::kFilter;
    return out;
}

FilterAmplitudes filter_amplitudes(double reflectivity) {
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
        throw std::invalid_argument("reflectivity must lie in [0, 1]");
    }
    const double r = reflectivity;
    const double t = 1.0 - r;
    const double st = std::sqrt(t);
    return {st * (2.0 * r - t), st * (r - t), -t * st};
}

QutritOperator p3_operator(double reflectivity) {
    const FilterAmplitudes f = filter_amplitudes(reflectivity);
    const double scale = std::max({std::abs(f.f0), std::abs(f.f1), std::abs(f.f2)});
    QutritOperator out;
    out.kind = QutritOperator::Kind::kFilter;
    out.matrix = Eigen::Matrix3cd::Zero();
    if (scale > 0.0) {
        out.matrix(0, 0) = f.f0 / scale;
        out.matrix(1, 1) = f.f1 / scale;
        out.matrix(2, 2) = f.f2 / scale;
    }
    return out;
}

QutritVector fix_global_phase(const QutritVector &q) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(q(i)) > std::abs(q(best)) + 1e-12) {
            best = i;
        }
    }
    const double mag = std::abs(q(best));
    if (mag == 0.0) {
        return q;
    }
    return q * (std::conj(q(best)) / mag);
}

std::vector<SweepPoint> reachability_sweep(const SweepGrid &grid, bool use_filter) {
    if (!(grid.step > 0.0)) {
        throw std::invalid_argument("sweep step must be positive");
    }
    const double half_pi = std::numbers::pi / 2.0;
    const long n_half = std::max(1L, std::lround(half_pi / grid.step));
    const long n_alpha = 2 * n_half;
    const double dh = half_pi / static_cast<double>(n_half);

    const QutritVector zero(1.0, 0.0, 0.0);
    const Eigen::Matrix3cd p3 = p3_operator(grid.reflectivity).matrix;

    std::vector<QutritVector> prepared(static_cast<std::size_t>(n_half));
    for (long i = 0; i < n_half; ++i) {
        QutritVector v = jones_to_qutrit(half_waveplate(i * dh)) * zero;
        if (use_filter) {
            v = p3 * v;
            v /= v.norm();
        }
        prepared[static_cast<std::size_t>(i)] = v;
    }
    std::vector<Eigen::Matrix3cd> hwp(static_cast<std::size_t>(n_half));
    for (long i = 0; i < n_half; ++i) {
        hwp[static_cast<std::size_t>(i)] = jones_to_qutrit(half_waveplate(i * dh)).matrix;
    }
    std::vector<Eigen::Matrix3cd> qwp(static_cast<std::size_t>(n_alpha));
    for (long i = 0; i < n_alpha; ++i) {
        qwp[static_cast<std::size_t>(i)] = jones_to_qutrit(quarter_waveplate(i * dh)).matrix;
    }

    std::vector<SweepPoint> out;
    out.reserve(static_cast<std::size_t>(n_half * n_half * n_alpha));
    for (long it = 0; it < n_half; ++it) {
        for (long ip = 0; ip < n_half; ++ip) {
            const QutritVector mid = hwp[static_cast<std::size_t>(ip)] * prepared[static_cast<std::size_t>(it)];
            for (long ia = 0; ia < n_alpha; ++ia) {
                const QutritVector v = fix_global_phase(qwp[static_cast<std::size_t>(ia)] * mid);
                SweepPoint p;
                double residue = 0.0;
                for (int k = 0; k < 3; ++k) {
                    p.amplitudes[static_cast<std::size_t>(k)] = v(k).real();
                    residue = std::max(residue, std::abs(v(k).imag()));
                }
                p.real = residue < kRealResidueTolerance;
                p.theta = it * dh;
                p.phi = ip * dh;
                p.alpha = ia * dh;
                out.push_back(p);
            }
        }
    }
    return out;
}

std::vector<double> nearest_trace_distance(std::span<const SweepPoint> cloud,
                                           std::span<const Eigen::Vector3d> targets) {
    std::vector<double> xs, ys, zs;
    for (const auto &p : cloud) {
        if (!p.real) {
            continue;
        }
        const double n = std::hypot(p.amplitudes[0], p.amplitudes[1], p.amplitudes[2]);
        xs.push_back(p.amplitudes[0] / n);
        ys.push_back(p.amplitudes[1] / n);
        zs.push_back(p.amplitudes[2] / n);
    }
    std::vector<double> packed;
    packed.reserve(targets.size() * 3);
    for (const auto &t : targets) {
        const Eigen::Vector3d u = t.normalized();
        packed.insert(packed.end(), {u(0), u(1), u(2)});
    }
    std::vector<double> overlap(targets.size(), 0.0);
    kernels::max_abs_dot3({xs, ys, zs}, packed, overlap);
    std::vector<double> out(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double o = std::min(1.0, overlap[i]);
        out[i] = std::sqrt(std::max(0.0, 1.0 - o * o));
    }
    return out;
}

double ring_distance(const std::array<double, 3> &x) {
    double best = std::numeric_limits<double>::infinity();
    for (const double sign : {1.0, -1.0}) {
        const Eigen::Vector3d v = sign * Eigen::Vector3d(x[0], x[1], x[2]);
        const double p = 0.5 * std::atan2(std::sqrt(2.0) * v(1), v(0) - v(2));
        const double c = std::cos(p);
        const double s = std::sin(p);
        best = std::min(best, (v - Eigen::Vector3d(c * c, std::sqrt(2.0) * c * s, s * s)).norm());
    }
    return best;
}

}  // namespace biphoton
