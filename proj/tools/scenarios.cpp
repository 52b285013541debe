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

#include "scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "biphoton/circuit.hpp"
#include "biphoton/io.hpp"
#include "biphoton/metrics.hpp"
#include "biphoton/qutrit.hpp"
#include "biphoton/tomography.hpp"

namespace biphoton::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kAngleLimit = 1e6;

std::string flatten(const Json &v) {
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void flatten_into(const std::string &key, const Json &v, std::string &out) {
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            flatten_into(key + "[" + std::to_string(i) + "]", v[i], out);
        }
        return;
    }
    if (v.is_object()) {
        for (const auto &[k, x] : v.items()) {
            flatten_into(key + "." + k, x, out);
        }
        return;
    }
    out += key + "," + flatten(v) + "\n";
}

void write_summary(const Json &summary, const OutputOptions &out) {
    std::filesystem::create_directories(out.dir);
    if (out.format == SummaryFormat::kJson) {
        write_file_atomic(out.dir / "summary.json", summary.dump(2) + "\n");
        return;
    }
    std::string csv = "metric,value\n";
    for (const auto &[k, v] : summary.items()) {
        flatten_into(k, v, csv);
    }
    write_file_atomic(out.dir / "summary.csv", csv);
}

void write_rho(const DensityMatrix &rho, const OutputOptions &out) {
    std::filesystem::create_directories(out.dir);
    write_file_atomic(out.dir / "rho.json", density_matrix_json(rho));
}

SplitterConvention convention_of(const Config &c) {
    const std::string s = c.string("convention", "standard");
    if (s == "standard") {
        return SplitterConvention::kStandard;
    }
    if (s == "mirrored") {
        return SplitterConvention::kMirrored;
    }
    throw ConfigError("convention", "must be 'standard' or 'mirrored'");
}

FilterConfig filter_config(const Config &c) {
    FilterConfig f;
    f.reflectivity = c.number("reflectivity", 0.5, 0.0, 1.0);
    f.ancilla_overlap = c.number("overlap", 1.0, 0.0, 1.0);
    f.convention = convention_of(c);
    return f;
}

QutritVector rotated_state(double theta) {
    return jones_to_qutrit(half_waveplate(theta)) * QutritVector(1.0, 0.0, 0.0);
}

Eigen::VectorXcd target_state(const std::string &target, double theta, double reflectivity,
                              const std::string &field) {
    if (target == "rotated") {
        return rotated_state(theta);
    }
    if (target == "filter") {
        const QutritVector v = p3_operator(reflectivity) * rotated_state(theta);
        if (v.norm() == 0.0) {
            throw ConfigError(field, "filtered target vanishes at this reflectivity");
        }
        return v / v.norm();
    }
    if (target == "joint") {
        return ideal_joint_state(theta);
    }
    throw ConfigError(field, "unknown target '" + target + "' (rotated, filter, joint, none)");
}

Json complex_vector(const Eigen::VectorXcd &v) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return Json{{"real", re}, {"imag", im}};
}

void state_metrics(const DensityMatrix &rho, const std::optional<Eigen::VectorXcd> &ideal, Json &summary) {
    if (ideal) {
        if (ideal->size() != rho.dimension()) {
            throw ConfigError("target", "dimension does not match the density matrix");
        }
        summary["fidelity"] = fidelity(rho, *ideal);
    }
    summary["linear_entropy"] = linear_entropy(rho);
    summary["purity"] = (rho.matrix() * rho.matrix()).trace().real();
    if (rho.bipartition()) {
        summary["negativity"] = negativity(rho);
    }
}

void run_filter_scenario(const Config &c, const OutputOptions &out) {
    c.require_known({"kind", "seed", "theta", "input", "reflectivity", "overlap", "convention"});
    const FilterConfig fc = filter_config(c);
    QutritVector input;
    double theta = 0.0;
    bool from_theta = true;
    if (c.has("input")) {
        if (c.has("theta")) {
            throw ConfigError("input", "give either input or theta, not both");
        }
        const std::string raw = c.string("input", std::nullopt);
        std::vector<double> xs;
        std::stringstream ss(raw);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto x = parse_scalar(cell);
            if (!x) {
                throw ConfigError("input", "'" + cell + "' is not a number");
            }
            xs.push_back(*x);
        }
        if (xs.size() != 3) {
            throw ConfigError("input", "expected three comma-separated amplitudes");
        }
        input = QutritVector(xs[0], xs[1], xs[2]);
        if (std::abs(input.norm() - 1.0) > 1e-9) {
            throw ConfigError("input", "amplitudes must have unit norm");
        }
        from_theta = false;
    } else {
        theta = c.number("theta", kPi / 8.0, -kAngleLimit, kAngleLimit);
        input = rotated_state(theta);
    }
    const FilterOutcome r = run_filter(input, fc);
    if (!r.rho) {
        throw ConfigError("reflectivity", "the herald never fires for this input");
    }
    const auto pass = filter_pass_probabilities(fc);
    Json s;
    s["kind"] = "filter";
    s["reflectivity"] = fc.reflectivity;
    s["overlap"] = fc.ancilla_overlap;
    if (from_theta) {
        s["theta"] = theta;
    }
    s["input"] = complex_vector(input);
    s["probability"] = r.probability;
    s["leakage"] = r.leakage;
    s["output"] = complex_vector(r.effective);
    const QutritVector ideal = p3_operator(fc.reflectivity) * input;
    if (ideal.norm() > 0.0 && fc.convention == SplitterConvention::kStandard) {
        state_metrics(*r.rho, Eigen::VectorXcd(ideal / ideal.norm()), s);
    } else {
        state_metrics(*r.rho, std::nullopt, s);
    }
    s["pass_probabilities"] = {pass[0], pass[1], pass[2]};
    const double e = extinction_ratio(pass[0], pass[1], pass[2]);
    s["extinction_ratio"] = std::isinf(e) ? Json("inf") : Json(e);
    write_rho(*r.rho, out);
    write_summary(s, out);
}

void run_joint_scenario(const Config &c, const OutputOptions &out) {
    c.require_known({"kind", "seed", "theta", "reflectivity", "overlap", "convention"});
    const FilterConfig fc = filter_config(c);
    const double theta = c.number("theta", kPi / 4.0, -kAngleLimit, kAngleLimit);
    const JointOutcome r = run_joint(theta, fc);
    if (!r.rho) {
        throw ConfigError("reflectivity", "the herald never fires for this input");
    }
    Json s;
    s["kind"] = "joint";
    s["theta"] = theta;
    s["reflectivity"] = fc.reflectivity;
    s["overlap"] = fc.ancilla_overlap;
    s["probability"] = r.probability;
    s["leakage"] = r.leakage;
    state_metrics(*r.rho, Eigen::VectorXcd(ideal_joint_state(theta)), s);
    write_rho(*r.rho, out);
    write_summary(s, out);
}

void run_sweep_scenario(const Config &c, std::uint64_t seed, const OutputOptions &out) {
    c.require_known({"kind", "seed", "step", "reflectivity", "use_filter", "targets", "tolerance"});
    SweepGrid grid;
    grid.step = c.number("step", kPi / 40.0, 1e-4, kPi / 2.0);
    grid.reflectivity = c.number("reflectivity", 0.5, 0.0, 0.999999);
    const bool use_filter = c.boolean("use_filter", false);
    const long n_targets = c.integer("targets", 100, 0, 1000000);
    const double tolerance = c.number("tolerance", 0.05, 0.0, 1.0);

    const std::vector<SweepPoint> points = reachability_sweep(grid, use_filter);
    std::string csv = "theta,phi,alpha,a0,a1,a2,real\n";
    long n_real = 0;
    double ring = 0.0;
    for (const auto &p : points) {
        csv += format_double(p.theta) + "," + format_double(p.phi) + "," + format_double(p.alpha) + "," +
               format_double(p.amplitudes[0]) + "," + format_double(p.amplitudes[1]) + "," +
               format_double(p.amplitudes[2]) + "," + (p.real ? "1" : "0") + "\n";
        if (p.real) {
            ++n_real;
            ring = std::max(ring, ring_distance(p.amplitudes));
        }
    }
    std::mt19937_64 rng(substream_seed(seed, "targets"));
    std::normal_distribution<double> normal;
    std::vector<Eigen::Vector3d> targets;
    for (long i = 0; i < n_targets; ++i) {
        Eigen::Vector3d t(normal(rng), normal(rng), normal(rng));
        targets.push_back(t.normalized());
    }
    double worst = 0.0;
    if (!targets.empty() && n_real > 0) {
        for (double d : nearest_trace_distance(points, targets)) {
            worst = std::max(worst, d);
        }
    } else if (!targets.empty()) {
        worst = 1.0;
    }

    std::filesystem::create_directories(out.dir);
    write_file_atomic(out.dir / "sweep.csv", csv);
    Json s;
    s["kind"] = "sweep";
    s["step"] = grid.step;
    s["reflectivity"] = grid.reflectivity;
    s["use_filter"] = use_filter;
    s["points"] = static_cast<long>(points.size());
    s["real_points"] = n_real;
    s["ring_max_distance"] = ring;
    s["ring_membership"] = n_real > 0 && ring <= 1e-6;
    s["targets"] = n_targets;
    s["coverage_max_trace_distance"] = worst;
    s["coverage"] = worst <= tolerance;
    write_summary(s, out);
}

struct TomographyRun {
    std::vector<double> counts;
    ProjectorSet set;
    std::optional<Eigen::VectorXcd> ideal;
};

Json reconstruction_summary(const TomographyRun &run, std::uint64_t seed, int trials, int threads,
                            const OutputOptions &out, bool &converged) {
    const Reconstruction rec = reconstruct(run.counts, run.set);
    converged = rec.converged;
    Json s;
    s["converged"] = rec.converged;
    s["iterations"] = rec.iterations;
    s["cost"] = rec.cost;
    s["intensity"] = rec.intensity;
    state_metrics(rec.rho, run.ideal, s);
    if (run.ideal) {
        MonteCarloOptions mc;
        mc.trials = trials;
        mc.seed = substream_seed(seed, "monte-carlo");
        mc.threads = threads;
        const MonteCarloResult err = monte_carlo_errors(run.counts, run.set, *run.ideal, mc);
        s["fidelity_std"] = err.fidelity.stddev;
        s["linear_entropy_std"] = err.linear_entropy.stddev;
        if (err.negativity) {
            s["negativity_std"] = err.negativity->stddev;
        }
        s["failed_trials"] = err.failed_trials;
    }
    write_rho(rec.rho, out);
    return s;
}

void run_tomography_scenario(const Config &c, std::uint64_t seed, const OutputOptions &out) {
    c.require_known({"kind", "seed", "state", "theta", "reflectivity", "overlap", "convention", "chi",
                     "max_pairs", "number_resolving", "counts", "trials", "threads"});
    const std::string state = c.string("state", "joint");
    const double counts_per_setting = c.number("counts", 1e4, 1e-6, 1e12);
    const int trials = static_cast<int>(c.integer("trials", 20, 2, 100000));
    const int threads = static_cast<int>(c.integer("threads", 1, 1, 256));
    const FilterConfig fc = filter_config(c);

    std::optional<TomographyRun> run;
    Json s;
    s["kind"] = "tomography";
    s["state"] = state;
    if (state == "joint" || state == "filter") {
        const double theta = c.number("theta", state == "joint" ? kPi / 4.0 : kPi / 8.0, -kAngleLimit, kAngleLimit);
        std::optional<DensityMatrix> truth;
        ProjectorSet set = state == "joint" ? ProjectorSet::qubit_qutrit() : ProjectorSet::qutrit();
        Eigen::VectorXcd ideal;
        if (state == "joint") {
            truth = run_joint(theta, fc).rho;
            ideal = ideal_joint_state(theta);
        } else {
            truth = run_filter(rotated_state(theta), fc).rho;
            ideal = target_state("filter", theta, fc.reflectivity, "reflectivity");
        }
        if (!truth) {
            throw ConfigError("reflectivity", "the herald never fires for this input");
        }
        s["theta"] = theta;
        run = TomographyRun{simulate_counts(*truth, set, counts_per_setting, substream_seed(seed, "counts")), set,
                            ideal};
    } else if (state == "source") {
        SourceCircuitConfig sc;
        sc.theta = c.number("theta", kPi / 4.0, -kAngleLimit, kAngleLimit);
        sc.reflectivity = fc.reflectivity;
        sc.source.pair_amplitude = c.number("chi", 0.1, 0.0, 1.0);
        sc.source.max_pairs = static_cast<int>(c.integer("max_pairs", 3, 2, 4));
        sc.source.ancilla_overlap = fc.ancilla_overlap;
        sc.number_resolving = c.boolean("number_resolving", false);
        const ProjectorSet set = ProjectorSet::qubit_qutrit();
        const std::vector<double> rates = source_tomography_rates(sc, set);
        double mean = 0.0;
        for (double r : rates) {
            mean += r / static_cast<double>(rates.size());
        }
        if (mean <= 0.0) {
            throw ConfigError("chi", "no four-fold events at this setting");
        }
        std::mt19937_64 rng(substream_seed(seed, "counts"));
        std::vector<double> counts;
        for (double r : rates) {
            const double m = counts_per_setting * r / mean;
            if (m <= 0.0) {
                counts.push_back(0.0);
                continue;
            }
            std::poisson_distribution<long long> dist(m);
            counts.push_back(static_cast<double>(dist(rng)));
        }
        s["theta"] = sc.theta;
        s["chi"] = sc.source.pair_amplitude;
        s["max_pairs"] = sc.source.max_pairs;
        run = TomographyRun{counts, set, Eigen::VectorXcd(ideal_joint_state(sc.theta))};
    } else {
        throw ConfigError("state", "must be 'joint', 'filter', or 'source'");
    }
    s["reflectivity"] = fc.reflectivity;
    s["overlap"] = fc.ancilla_overlap;
    s["counts_per_setting"] = counts_per_setting;

    std::vector<CountRecord> records;
    for (std::size_t i = 0; i < run->set.size(); ++i) {
        records.push_back({run->set.settings()[i].label, run->counts[i], std::nullopt});
    }
    std::filesystem::create_directories(out.dir);
    write_file_atomic(out.dir / "counts.csv", format_count_csv(records));
    bool converged = false;
    s["reconstruction"] = reconstruction_summary(*run, seed, trials, threads, out, converged);
    write_summary(s, out);
    if (!converged) {
        throw ConvergenceError("reconstruction did not converge");
    }
}

void run_report_scenario(const Config &c, const OutputOptions &out) {
    c.require_known({"kind", "seed", "rho", "target", "theta", "reflectivity"});
    const std::string path = c.string("rho", std::nullopt);
    DensityMatrix rho = DensityMatrix::maximally_mixed(1);
    try {
        rho = read_density_matrix_json(path);
    } catch (const std::exception &e) {
        throw ConfigError("rho", e.what());
    }
    const std::string target = c.string("target", "none");
    std::optional<Eigen::VectorXcd> ideal;
    if (target != "none") {
        ideal = target_state(target, c.number("theta", 0.0, -kAngleLimit, kAngleLimit),
                             c.number("reflectivity", 0.5, 0.0, 1.0), "target");
    }
    Json s;
    s["kind"] = "metrics-report";
    s["dimension"] = rho.dimension();
    s["target"] = target;
    state_metrics(rho, ideal, s);
    write_summary(s, out);
}

}  // namespace

void run_scenario(const Config &config, std::uint64_t seed, const OutputOptions &out) {
    const std::string kind = config.string("kind", std::nullopt);
    if (kind == "filter") {
        run_filter_scenario(config, out);
    } else if (kind == "joint") {
        run_joint_scenario(config, out);
    } else if (kind == "sweep") {
        run_sweep_scenario(config, seed, out);
    } else if (kind == "tomography") {
        run_tomography_scenario(config, seed, out);
    } else if (kind == "metrics-report") {
        run_report_scenario(config, out);
    } else {
        throw ConfigError("kind", "unknown scenario kind '" + kind + "'");
    }
}

void run_ingest(const IngestOptions &options, std::uint64_t seed, const OutputOptions &out) {
    ProjectorSet base = ProjectorSet::qutrit();
    if (options.set_id == "qubit-qutrit") {
        base = ProjectorSet::qubit_qutrit();
    } else if (options.set_id != "qutrit") {
        throw ConfigError("set", "must be 'qutrit' or 'qubit-qutrit'");
    }
    if (options.trials < 2) {
        throw ConfigError("trials", "must be at least 2");
    }
    std::optional<AlignedCounts> aligned;
    try {
        aligned = align_counts(read_count_csv(options.csv), base);
    } catch (const FormatError &e) {
        throw ConfigError("csv", e.what());
    }
    std::optional<Eigen::VectorXcd> ideal;
    if (options.target != "none") {
        ideal = target_state(options.target, options.theta, options.reflectivity, "target");
    }
    TomographyRun run{aligned->counts, aligned->set, ideal};
    Json s;
    s["kind"] = "ingest";
    s["set"] = options.set_id;
    bool converged = false;
    s["reconstruction"] = reconstruction_summary(run, seed, options.trials, options.threads, out, converged);
    write_summary(s, out);
    if (!converged) {
        throw ConvergenceError("reconstruction did not converge");
    }
}

}  // namespace biphoton::cli
