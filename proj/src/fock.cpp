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

#include "biphoton/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr double kUnitarityTolerance = 1e-12;

double factorial(int n) {
    double out = 1.0;
    for (int k = 2; k <= n; ++k) {
        out *= k;
    }
    return out;
}

bool same_slot(const ModeId &a, const ModeId &b) {
    return a.spatial == b.spatial && a.polarization == b.polarization;
}

}  // namespace

std::string ModeId::str() const {
    std::ostringstream out;
    out << spatial << (polarization == Polarization::H ? 'H' : 'V');
    if (internal != 0) {
        out << '#' << internal;
    }
    return out.str();
}

FockBasisState::FockBasisState(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
        return a.first < b.first;
    });
    for (const auto &[mode, n] : entries) {
        if (n < 0) {
            throw std::invalid_argument("negative photon count in mode " + mode.str());
        }
        if (!entries_.empty() && entries_.back().first == mode) {
            entries_.back().second += n;
        } else {
            entries_.emplace_back(mode, n);
        }
    }
    std::erase_if(entries_, [](const Entry &e) {
        return e.second == 0;
    });
}

int FockBasisState::count(const ModeId &mode) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mode, [](const Entry &e, const ModeId &m) {
        return e.first < m;
    });
    if (it != entries_.end() && it->first == mode) {
        return it->second;
    }
    return 0;
}

int FockBasisState::total() const {
    int n = 0;
    for (const auto &e : entries_) {
        n += e.second;
    }
    return n;
}

double FockBasisState::factorial_product() const {
    double out = 1.0;
    for (const auto &e : entries_) {
        out *= factorial(e.second);
    }
    return out;
}

FockBasisState FockBasisState::with(const ModeId &mode, int delta) const {
    auto entries = entries_;
    entries.emplace_back(mode, 0);
    for (auto &e : entries) {
        if (e.first == mode) {
            e.second += delta;
            break;
        }
    }
    return FockBasisState(std::move(entries));
}

std::string FockBasisState::str() const {
    std::ostringstream out;
    out << '|';
    bool first = true;
    for (const auto &[mode, n] : entries_) {
        if (!first) {
            out << ',';
        }
        first = false;
        out << n << '_' << mode.str();
    }
    out << '>';
    return out.str();
}

PureState PureState::vacuum() {
    return basis(FockBasisState{});
}

PureState PureState::basis(const FockBasisState &ket, cplx amplitude) {
    PureState out;
    out.add(ket, amplitude);
    return out;
}

void PureState::add(const FockBasisState &ket, cplx amplitude) {
    auto [it, inserted] = amplitudes_.try_emplace(ket, 0.0);
    norm_squared_ -= std::norm(it->second);
    it->second += amplitude;
    norm_squared_ += std::norm(it->second);
}

cplx PureState::amplitude(const FockBasisState &ket) const {
    auto it = amplitudes_.find(ket);
    return it == amplitudes_.end() ? cplx{0.0} : it->second;
}

double PureState::norm() const {
    return std::sqrt(std::max(norm_squared_, 0.0));
}

PureState PureState::scaled(cplx factor) const {
    PureState out;
    for (const auto &[ket, amp] : amplitudes_) {
        out.add(ket, amp * factor);
    }
    return out;
}

PureState PureState::pruned(double threshold) const {
    PureState out;
    for (const auto &[ket, amp] : amplitudes_) {
        if (std::abs(amp) >= threshold) {
            out.add(ket, amp);
        }
    }
    return out;
}

std::set<ModeId> PureState::occupied_modes() const {
    std::set<ModeId> modes;
    for (const auto &[ket, amp] : amplitudes_) {
        for (const auto &e : ket.entries()) {
            modes.insert(e.first);
        }
    }
    return modes;
}

PureState PureState::plus(const PureState &other) const {
    PureState out = *this;
    for (const auto &[ket, amp] : other.amplitudes_) {
        out.add(ket, amp);
    }
    return out;
}

ModeTransform::ModeTransform(std::vector<ModeId> inputs, std::vector<ModeId> outputs, Eigen::MatrixXcd matrix,
                             TransformKind kind, bool label_blind)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      matrix_(std::move(matrix)),
      kind_(kind),
      label_blind_(label_blind) {
    if (matrix_.cols() != static_cast<Eigen::Index>(inputs_.size()) ||
        matrix_.rows() != static_cast<Eigen::Index>(outputs_.size())) {
        throw std::invalid_argument("mode transform matrix shape does not match its mode lists");
    }
    if (kind_ == TransformKind::kUnitary && matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("unitary mode transform requires a square matrix");
    }
    auto gram = matrix_.adjoint() * matrix_;
    auto identity = Eigen::MatrixXcd::Identity(matrix_.cols(), matrix_.cols());
    if ((gram - identity).cwiseAbs().maxCoeff() > kUnitarityTolerance) {
        throw std::invalid_argument(kind_ == TransformKind::kUnitary ? "mode transform is not unitary"
                                                                      : "isometry columns are not orthonormal");
    }
}

int ModeTransform::input_index(const ModeId &mode) const {
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        if (label_blind_ ? same_slot(inputs_[i], mode) : inputs_[i] == mode) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

ModeId ModeTransform::output_mode(int j, int label) const {
    ModeId out = outputs_[j];
    if (label_blind_) {
        out.internal = label;
    }
    return out;
}

ModeTransform compose(const ModeTransform &first, const ModeTransform &second) {
    if (first.label_blind() != second.label_blind()) {
        throw std::invalid_argument("cannot compose label-blind and label-aware transforms");
    }
    std::vector<int> consumed(first.outputs().size(), -1);
    for (std::size_t k = 0; k < first.outputs().size(); ++k) {
        consumed[k] = second.input_index(first.outputs()[k]);
    }
    for (const auto &in : second.inputs()) {
        if (std::none_of(first.outputs().begin(), first.outputs().end(), [&](const ModeId &m) {
                return m == in;
            })) {
            throw std::invalid_argument("second transform reads mode " + in.str() + " not produced by the first");
        }
    }

    std::vector<ModeId> outputs;
    std::map<ModeId, int> row_of;
    auto row_for = [&](const ModeId &m) {
        auto [it, inserted] = row_of.try_emplace(m, static_cast<int>(outputs.size()));
        if (inserted) {
            outputs.push_back(m);
        }
        return it->second;
    };
    for (std::size_t k = 0; k < first.outputs().size(); ++k) {
        if (consumed[k] < 0) {
            row_for(first.outputs()[k]);
        }
    }
    for (const auto &m : second.outputs()) {
        row_for(m);
    }

    Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(outputs.size()), first.matrix().cols());
    for (Eigen::Index i = 0; i < first.matrix().cols(); ++i) {
        for (std::size_t k = 0; k < first.outputs().size(); ++k) {
            cplx a = first.matrix()(static_cast<Eigen::Index>(k), i);
            if (a == cplx{0.0}) {
                continue;
            }
            if (consumed[k] < 0) {
                matrix(row_of.at(first.outputs()[k]), i) += a;
            } else {
                for (std::size_t j = 0; j < second.outputs().size(); ++j) {
                    matrix(row_of.at(second.outputs()[j]), i) +=
                        second.matrix()(static_cast<Eigen::Index>(j), consumed[k]) * a;
                }
            }
        }
    }
    bool square = matrix.rows() == matrix.cols();
    auto kind = (first.kind() == TransformKind::kUnitary && second.kind() == TransformKind::kUnitary && square)
                    ? TransformKind::kUnitary
                    : TransformKind::kIsometry;
    return ModeTransform(first.inputs(), std::move(outputs), std::move(matrix), kind, first.label_blind());
}

PureState apply_mode_transform(const PureState &state, const ModeTransform &transform, double prune_threshold) {
    PureState result;
    std::map<FockBasisState, cplx> monomials;
    std::map<FockBasisState, cplx> next;

    for (const auto &[ket, amp] : state.amplitudes()) {
        std::vector<FockBasisState::Entry> untouched;
        std::vector<std::pair<int, FockBasisState::Entry>> moved;
        for (const auto &e : ket.entries()) {
            int idx = transform.input_index(e.first);
            if (idx < 0) {
                untouched.push_back(e);
            } else {
                moved.emplace_back(idx, e);
            }
        }
        if (transform.kind() == TransformKind::kIsometry) {
            for (const auto &[mode, n] : untouched) {
                for (int j = 0; j < static_cast<int>(transform.outputs().size()); ++j) {
                    if (transform.output_mode(j, mode.internal) == mode) {
                        throw std::invalid_argument("occupied mode " + mode.str() +
                                                    " lies outside the isometry's domain but collides with its output");
                    }
                }
            }
        }

        // Creation-operator monomials: coefficient of prod b^dag^k |vac>.
        monomials.clear();
        monomials.emplace(FockBasisState(untouched), amp / std::sqrt(ket.factorial_product()));
        for (const auto &[idx, entry] : moved) {
            const auto &[mode, n] = entry;
            for (int photon = 0; photon < n; ++photon) {
                next.clear();
                for (const auto &[mono, coeff] : monomials) {
                    for (Eigen::Index j = 0; j < transform.matrix().rows(); ++j) {
                        cplx m = transform.matrix()(j, idx);
                        if (m == cplx{0.0}) {
                            continue;
                        }
                        next[mono.with(transform.output_mode(static_cast<int>(j), mode.internal), 1)] += m * coeff;
                    }
                }
                monomials.swap(next);
            }
        }
        for (const auto &[mono, coeff] : monomials) {
            result.add(mono, coeff * std::sqrt(mono.factorial_product()));
        }
    }
    return result.pruned(prune_threshold);
}

cplx inner_product(const PureState &x, const PureState &y) {
    const auto &small = x.size() <= y.size() ? x : y;
    const auto &large = x.size() <= y.size() ? y : x;
    cplx sum{0.0};
    for (const auto &[ket, amp] : small.amplitudes()) {
        cplx other = large.amplitude(ket);
        sum += (&small == &x) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return sum;
}

PureState tensor(const PureState &x, const PureState &y) {
    auto modes_x = x.occupied_modes();
    for (const auto &m : y.occupied_modes()) {
        if (modes_x.contains(m)) {
            throw std::invalid_argument("tensor product of states sharing mode " + m.str());
        }
    }
    PureState out;
    for (const auto &[kx, ax] : x.amplitudes()) {
        for (const auto &[ky, ay] : y.amplitudes()) {
            std::vector<FockBasisState::Entry> entries(kx.entries().begin(), kx.entries().end());
            entries.insert(entries.end(), ky.entries().begin(), ky.entries().end());
            out.add(FockBasisState(std::move(entries)), ax * ay);
        }
    }
    return out;
}

Normalized normalize(const PureState &x) {
    double n = x.norm();
    if (!(n > 0.0)) {
        throw std::domain_error("cannot normalize the zero state");
    }
    return {x.scaled(1.0 / n), n};
}

}  // namespace biphoton
