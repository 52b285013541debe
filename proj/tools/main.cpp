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

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "biphoton/io.hpp"
#include "config.hpp"
#include "scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConvergence = 3;

}  // namespace

int main(int argc, char **argv) {
    using namespace biphoton;
    using namespace biphoton::cli;

    CLI::App app{"Biphoton qutrit circuit simulator and tomography tool"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string format = "json";
    app.add_option("--seed", seed, "Master RNG seed");
    app.add_option("--out-dir", out_dir, "Directory for output files");
    app.add_option("--format", format, "Summary format")->check(CLI::IsMember({"json", "csv"}));

    auto *run = app.add_subcommand("run", "Run a scenario file");
    std::string scenario;
    run->add_option("scenario", scenario, "Scenario file (JSON or key = value)")->required();

    auto *ingest = app.add_subcommand("ingest", "Reconstruct a state from a count CSV");
    IngestOptions in;
    std::string csv;
    ingest->add_option("csv", csv, "Count file")->required();
    ingest->add_option("--set", in.set_id, "Measurement set")
        ->required()
        ->check(CLI::IsMember({"qutrit", "qubit-qutrit"}));
    ingest->add_option("--target", in.target, "Ideal state for fidelity: rotated, filter, joint, none");
    std::string target_theta = "0";
    ingest->add_option("--target-theta", target_theta, "Angle of the ideal state");
    ingest->add_option("--reflectivity", in.reflectivity, "Filter reflectivity for --target filter")
        ->check(CLI::Range(0.0, 1.0));
    ingest->add_option("--trials", in.trials, "Monte Carlo trials")->check(CLI::Range(2, 1000000));
    ingest->add_option("--threads", in.threads, "Worker threads")->check(CLI::Range(1, 256));

    auto *sweep = app.add_subcommand("sweep", "Reachability sweep over waveplate angles");
    std::string step = "pi/40";
    double reflectivity = 0.5;
    bool use_filter = false;
    long targets = 100;
    sweep->add_option("--step", step, "Angle grid step, in (0, pi/2]");
    sweep->add_option("--reflectivity", reflectivity, "Filter reflectivity")->check(CLI::Range(0.0, 1.0));
    sweep->add_flag("--use-filter", use_filter, "Insert the filter between the half-wave plates");
    sweep->add_option("--targets", targets, "Random real targets for the coverage check")
        ->check(CLI::NonNegativeNumber);

    auto *report = app.add_subcommand("report", "Metrics for a density matrix file");
    std::string rho_path;
    std::string report_target = "none";
    std::string report_theta = "0";
    double report_reflectivity = 0.5;
    report->add_option("rho", rho_path, "Density matrix JSON")->required();
    report->add_option("--target", report_target, "Ideal state: rotated, filter, joint, none");
    report->add_option("--target-theta", report_theta, "Angle of the ideal state");
    report->add_option("--reflectivity", report_reflectivity, "Filter reflectivity for --target filter")
        ->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    OutputOptions out;
    out.dir = out_dir;
    out.format = format == "csv" ? SummaryFormat::kCsv : SummaryFormat::kJson;

    try {
        if (*run) {
            Config config = Config::parse(read_file(scenario));
            std::uint64_t s = seed;
            if (app.get_option("--seed")->count() == 0 && config.has("seed")) {
                s = static_cast<std::uint64_t>(config.integer("seed", std::nullopt, 0, 9007199254740991L));
            }
            run_scenario(config, s, out);
        } else if (*ingest) {
            in.csv = csv;
            const auto theta = parse_scalar(target_theta);
            if (!theta) {
                throw ConfigError("target-theta", "'" + target_theta + "' is not a number");
            }
            in.theta = *theta;
            run_ingest(in, seed, out);
        } else if (*sweep) {
            Config config;
            config.set("kind", "sweep");
            config.set("step", step);
            config.set("reflectivity", reflectivity);
            config.set("use_filter", use_filter);
            config.set("targets", targets);
            run_scenario(config, seed, out);
        } else if (*report) {
            Config config;
            config.set("kind", "metrics-report");
            config.set("rho", rho_path);
            config.set("target", report_target);
            config.set("theta", report_theta);
            config.set("reflectivity", report_reflectivity);
            run_scenario(config, seed, out);
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: invalid parameter " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConvergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
