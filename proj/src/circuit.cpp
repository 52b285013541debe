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

#include "biphoton/circuit.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace biphoton {

namespace {

bool in_group(const ModeId &m, const DetectionGroup &g) {
    return m.spatial == g.spatial && (!g.polarization || *g.polarization == m.polarization);
}

void validate(const DetectionPattern &pattern) {
    for (std::size_t i = 0; i < pattern.groups.size(); ++i) {
        const auto &g = pattern.groups[i];
        if (g.count < 0) {
            throw std::invalid_argument("detection group on mode " + std::to_string(g.spatial) +
                                        " has a negative count");
        }
        for (std::size_t j = i + 1; j < pattern.groups.size(); ++j) {
            const auto &h = pattern.groups[j];
            bool overlap = g.spatial == h.spatial &&
                           (!g.polarization || !h.polarization || *g.polarization == *h.polarization);
            if (overlap) {
                throw std::invalid_argument("detection groups overlap on mode " + std::to_string(g.spatial));
            }
        }
    }
}

bool satisfied(int n, const DetectionGroup &g, bool number_resolving) {
    if (g.keep || number_resolving || g.count == 0) {
        return n == g.count;
    }
    return n >= 1;
}

void check_overlap(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("ancilla overlap must lie in [0, 1]");
    }
}

// a^dag applied to every ket, scaled by `coeff`.
PureState create(const PureState &s, const ModeId &mode, cplx coeff) {
    PureState out;
    for (const auto &[ket, amp] : s.amplitudes()) {
        const int n = ket.count(mode);
        out.add(ket.with(mode, 1), amp * coeff * std::sqrt(static_cast<double>(n + 1)));
    }
    return out;
}

PureState photon_from_jones(int spatial, const JonesMatrix &jones, int label, cplx scale) {
    PureState out;
    out.add(FockBasisState({{ModeId{spatial, Polarization::H, label}, 1}}), scale * jones(0, 0));
    out.add(FockBasisState({{ModeId{spatial, Polarization::V, label}, 1}}), scale * jones(1, 0));
    return out.pruned(0.0);
}

DetectionPattern filter_herald() {
    DetectionPattern p;
    p.groups = {
        {modes::kD, Polarization::H, 1, false},
        {modes::kD, Polarization::V, 0, false},
        {modes::kC, std::nullopt, 2, true},
    };
    return p;
}

}  // namespace

ConditionalResult postselect(const PureState &state, const DetectionPattern &pattern) {
    validate(pattern);
    const double total = state.norm_squared();
    if (!(total > 0.0)) {
        throw std::invalid_argument("postselect: input state has zero norm");
    }
    std::map<FockBasisState, PureState> branches;
    std::vector<int> counts(pattern.groups.size());
    for (const auto &[ket, amp] : state.amplitudes()) {
        std::fill(counts.begin(), counts.end(), 0);
        std::vector<FockBasisState::Entry> detected;
        std::vector<FockBasisState::Entry> rest;
        for (const auto &e : ket.entries()) {
            bool matched = false;
            for (std::size_t g = 0; g < pattern.groups.size(); ++g) {
                if (in_group(e.first, pattern.groups[g])) {
                    counts[g] += e.second;
                    matched = true;
                    if (!pattern.groups[g].keep) {
                        detected.push_back(e);
                    } else {
                        rest.push_back(e);
                    }
                    break;
                }
            }
            if (!matched) {
                rest.push_back(e);
            }
        }
        bool ok = true;
        for (std::size_t g = 0; g < pattern.groups.size() && ok; ++g) {
            ok = satisfied(counts[g], pattern.groups[g], pattern.number_resolving);
        }
        if (!ok) {
            continue;
        }
        branches[FockBasisState(std::move(detected))].add(FockBasisState(std::move(rest)), amp);
    }

    ConditionalResult out;
    double kept = 0.0;
    for (const auto &[key, s] : branches) {
        kept += s.norm_squared();
    }
    if (!(kept > 0.0)) {
        return out;
    }
    out.probability = std::min(1.0, kept / total);
    for (const auto &[key, s] : branches) {
        if (s.norm_squared() <= 0.0) {
            continue;
        }
        out.branches.push_back({s.norm_squared() / kept, normalize(s).state});
    }
    return out;
}

PureState ancilla_photon(int spatial, const JonesMatrix &jones, double overlap) {
    check_overlap(overlap);
    PureState out = photon_from_jones(spatial, jones, 0, overlap);
    const double rest = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
    if (rest > 0.0) {
        out = out.plus(photon_from_jones(spatial, jones, 1, rest));
    }
    return out.pruned(0.0);
}

SplitterSpec FilterConfig::splitter_spec() const {
    if (splitter) {
        return *splitter;
    }
    return SplitterSpec::balanced(reflectivity, convention);
}

FilterOutcome run_filter(const QutritVector &input, const FilterConfig &config) {
    check_overlap(config.ancilla_overlap);
    if (!is_unitary(config.ancilla_jones)) {
        throw std::invalid_argument("ancilla Jones matrix must be unitary");
    }
    PureState state = tensor(encode(input, modes::kA),
                             ancilla_photon(modes::kB, config.ancilla_jones, config.ancilla_overlap));
    state = apply_mode_transform(state, beam_splitter(config.splitter_spec(), modes::kA, modes::kB, modes::kC,
                                                      modes::kD));
    // Analyze d in the ancilla's own polarization basis.
    state = apply_mode_transform(state, jones_transform(config.ancilla_jones.adjoint(), modes::kD));

    FilterOutcome out;
    out.conditional = postselect(state, filter_herald());
    out.probability = out.conditional.probability;
    if (out.conditional.empty()) {
        out.leakage = 0.0;
        return out;
    }
    LogicalProjection proj = project_logical(out.conditional.branches, modes::kC);
    out.leakage = proj.input_weight > 0.0 ? proj.leakage_weight / proj.input_weight : 0.0;
    if (proj.rho.trace().real() <= 0.0) {
        return out;
    }
    out.rho = DensityMatrix::from_unnormalized(proj.rho);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(out.rho->matrix());
    out.effective = fix_global_phase(es.eigenvectors().col(2));
    return out;
}

std::array<double, 3> filter_pass_probabilities(const FilterConfig &config) {
    std::array<double, 3> p{};
    for (int k = 0; k < 3; ++k) {
        QutritVector q = QutritVector::Zero();
        q(k) = 1.0;
        p[static_cast<std::size_t>(k)] = run_filter(q, config).probability;
    }
    return p;
}

JointOutcome run_joint(double theta, const FilterConfig &config) {
    check_overlap(config.ancilla_overlap);
    PureState qutrit = encode(QutritVector(1.0, 0.0, 0.0), modes::kA);
    qutrit = apply_mode_transform(qutrit, jones_transform(half_waveplate(theta), modes::kA));
    PureState state =
        tensor(qutrit, ancilla_photon(modes::kB, config.ancilla_jones, config.ancilla_overlap));
    state = apply_mode_transform(state, beam_splitter(config.splitter_spec(), modes::kA, modes::kB, modes::kC,
                                                      modes::kD));
    DetectionPattern keep;
    keep.groups = {{modes::kC, std::nullopt, 2, true}, {modes::kD, std::nullopt, 1, true}};

    JointOutcome out;
    ConditionalResult cond = postselect(state, keep);
    out.probability = cond.probability;
    if (cond.empty()) {
        return out;
    }
    LogicalProjection proj = project_logical(cond.branches, modes::kC, modes::kD);
    out.leakage = proj.input_weight > 0.0 ? proj.leakage_weight / proj.input_weight : 0.0;
    if (proj.rho.trace().real() > 0.0) {
        out.rho = DensityMatrix::from_unnormalized(proj.rho, Bipartition{2, 3});
    }
    return out;
}

Eigen::VectorXcd ideal_joint_state(double theta) {
    const double c2 = std::cos(2.0 * theta);
    const double s2 = std::sin(2.0 * theta);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(6);
    psi(0) = c2 * c2;                            // |0_2, 0_3>
    psi(3) = std::sin(4.0 * theta);              // |1_2, 0_3>
    psi(4) = std::numbers::sqrt2 * s2 * s2;      // |1_2, 1_3>
    psi(2) = -s2 * s2;                           // |0_2, 2_3>
    return psi / std::sqrt(2.0 - std::cos(4.0 * theta));
}

namespace {

double dip_probability(int n_a, double overlap, double reflectivity) {
    if (n_a != 1 && n_a != 2) {
        throw std::invalid_argument("hom_visibility supports n_a in {1, 2}");
    }
    const ModeId a{modes::kA, Polarization::H, 0};
    PureState state = tensor(PureState::basis(FockBasisState({{a, n_a}})),
                             ancilla_photon(modes::kB, JonesMatrix::Identity(), overlap));
    state = apply_mode_transform(
        state, beam_splitter(SplitterSpec::balanced(reflectivity), modes::kA, modes::kB, modes::kC, modes::kD));
    DetectionPattern p;
    p.number_resolving = true;
    p.groups = {{modes::kC, std::nullopt, n_a, false}, {modes::kD, std::nullopt, 1, false}};
    return postselect(state, p).probability;
}

}  // namespace

double hom_visibility(int n_a, double overlap, double reflectivity) {
    const double p_dist = dip_probability(n_a, 0.0, reflectivity);
    if (p_dist <= 0.0) {
        return 0.0;
    }
    return (p_dist - dip_probability(n_a, overlap, reflectivity)) / p_dist;
}

double hom_visibility_normalized(int n_a, double overlap, double reflectivity) {
    const double p_dist = dip_probability(n_a, 0.0, reflectivity);
    const double contrast = p_dist - dip_probability(n_a, 1.0, reflectivity);
    if (std::abs(contrast) <= 1e-15) {
        return 0.0;
    }
    return (p_dist - dip_probability(n_a, overlap, reflectivity)) / contrast;
}

double overlap_for_visibility(int n_a, double target, double reflectivity) {
    if (!(target >= 0.0 && target <= 1.0)) {
        throw std::invalid_argument("target visibility must lie in [0, 1]");
    }
    // The normalized visibility is v^2 for a single overlap parameter, but
    // bisect anyway so the answer comes from the simulation.
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hom_visibility_normalized(n_a, mid, reflectivity) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PureState source_state(const SourceSpec &spec) {
    check_overlap(spec.ancilla_overlap);
    if (spec.max_pairs < 2) {
        throw std::invalid_argument("source truncation below the two pairs the herald requires");
    }
    const ModeId s1{modes::kSource1, Polarization::H, 0};
    const ModeId s2_ref{modes::kSource2, Polarization::H, 0};
    const ModeId s2_other{modes::kSource2, Polarization::H, 1};
    const double w = std::sqrt(std::max(0.0, 1.0 - spec.ancilla_overlap * spec.ancilla_overlap));

    PureState term = PureState::vacuum();
    PureState total = term;
    for (int n = 1; n <= spec.max_pairs; ++n) {
        PureState s1_added = create(term, s1, 1.0);
        PureState next = create(s1_added, s2_ref, spec.ancilla_overlap);
        if (w > 0.0) {
            next = next.plus(create(s1_added, s2_other, w));
        }
        term = next.scaled(spec.pair_amplitude / n).pruned(0.0);
        total = total.plus(term);
    }
    return normalize(total.pruned()).state;
}

namespace {

enum class DArm { kPolarizerH, kOpen };

// Source through the full circuit up to the detectors: herald, d, and the two
// outputs E, F of the splitter on c.
PureState source_circuit_state(const SourceCircuitConfig &config, bool ancilla_on, DArm d_arm) {
    using modes::kLossBase;
    PureState state = source_state(config.source);
    const int empty_port = kLossBase + 10;
    state = apply_mode_transform(state, polarizer(Polarization::H, modes::kSource1, kLossBase));
    state = apply_mode_transform(state, jones_transform(half_waveplate(config.theta), modes::kSource1));
    state = apply_mode_transform(
        state, beam_splitter(SplitterSpec::balanced(0.5), modes::kSource2, empty_port, modes::kHerald, modes::kB));
    state = apply_mode_transform(state, polarizer(Polarization::H, modes::kB, kLossBase + 1));
    if (!ancilla_on) {
        state = apply_mode_transform(state, loss_channel(0.0, modes::kB, kLossBase + 3));
    }
    state = apply_mode_transform(state, beam_splitter(SplitterSpec::balanced(config.reflectivity), modes::kSource1,
                                                      modes::kB, modes::kC, modes::kD));
    if (d_arm == DArm::kPolarizerH) {
        state = apply_mode_transform(state, polarizer(Polarization::H, modes::kD, kLossBase + 2));
    }
    state = apply_mode_transform(
        state, beam_splitter(SplitterSpec::balanced(0.5), modes::kC, empty_port + 1, modes::kTomoE, modes::kTomoF));
    return state.pruned();
}

Eigen::Matrix2cd rotation_to_h(const Eigen::Vector2cd &u) {
    Eigen::Matrix2cd j;
    j << std::conj(u(0)), std::conj(u(1)), -u(1), u(0);
    return j;
}

// Passes polarization u of `spatial` as H and discards the orthogonal part.
PureState analyze(const PureState &s, int spatial, const Eigen::Vector2cd &u, int loss_slot) {
    PureState out = apply_mode_transform(s, jones_transform(rotation_to_h(u), spatial));
    return apply_mode_transform(out, polarizer(Polarization::H, spatial, loss_slot));
}

double event_probability(const PureState &s, bool number_resolving, bool heralded,
                         std::optional<Polarization> pol_e, std::optional<Polarization> pol_f) {
    DetectionPattern p;
    p.number_resolving = number_resolving;
    p.groups = {{modes::kTomoE, pol_e, 1, false}, {modes::kTomoF, pol_f, 1, false}};
    if (heralded) {
        p.groups.push_back({modes::kHerald, std::nullopt, 1, false});
        p.groups.push_back({modes::kD, std::nullopt, 1, false});
    }
    return postselect(s, p).probability;
}

}  // namespace

double source_fourfold_probability(const SourceCircuitConfig &config) {
    const PureState state = source_circuit_state(config, true, DArm::kPolarizerH);
    return event_probability(state, config.number_resolving, true, std::nullopt, std::nullopt);
}

double source_hom_visibility(const SourceCircuitConfig &config) {
    SourceCircuitConfig dist = config;
    dist.source.ancilla_overlap = 0.0;
    const double p_dist = source_fourfold_probability(dist);
    if (p_dist <= 0.0) {
        return 0.0;
    }
    return (p_dist - source_fourfold_probability(config)) / p_dist;
}

double source_extinction_ratio(const SourceCircuitConfig &config) {
    SourceCircuitConfig cfg = config;
    cfg.theta = std::numbers::pi / 8.0;
    const PureState on = source_circuit_state(cfg, true, DArm::kPolarizerH);
    const PureState off = source_circuit_state(cfg, false, DArm::kPolarizerH);
    const bool nr = cfg.number_resolving;
    using P = Polarization;
    const std::array<std::pair<P, P>, 3> analyzers = {{{P::H, P::H}, {P::H, P::V}, {P::V, P::V}}};
    std::array<double, 3> t{};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto [pe, pf] = analyzers[k];
        const double r_off = event_probability(off, nr, false, pe, pf);
        if (r_off <= 0.0) {
            throw std::domain_error("source_extinction_ratio: reference rate vanished");
        }
        t[k] = event_probability(on, nr, true, pe, pf) / r_off;
    }
    return extinction_ratio(t[0], t[1], t[2]);
}

std::vector<double> source_tomography_rates(const SourceCircuitConfig &config, const ProjectorSet &set) {
    const bool joint = set.dimension() == 6;
    if (!joint && set.dimension() != 3) {
        throw std::invalid_argument("source tomography supports qutrit or qubit-qutrit sets");
    }
    const PureState state = source_circuit_state(config, true, joint ? DArm::kOpen : DArm::kPolarizerH);
    std::vector<double> out;
    out.reserve(set.size());
    for (const auto &s : set.settings()) {
        if (!s.analyzers || (joint && !s.analyzers->qubit)) {
            throw std::invalid_argument("setting '" + s.label + "' has no physical analyzers");
        }
        PureState x = analyze(state, modes::kTomoE, s.analyzers->first, modes::kLossBase + 30);
        x = analyze(x, modes::kTomoF, s.analyzers->second, modes::kLossBase + 31);
        if (joint) {
            x = analyze(x, modes::kD, *s.analyzers->qubit, modes::kLossBase + 32);
        }
        out.push_back(event_probability(x, config.number_resolving, true, Polarization::H, Polarization::H));
    }
    return out;
}

}  // namespace biphoton
