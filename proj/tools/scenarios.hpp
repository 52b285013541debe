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

#include <cstdint>
#include <filesystem>
#include <string>

#include "config.hpp"

namespace biphoton::cli {

enum class SummaryFormat { kJson, kCsv };

struct OutputOptions {
    std::filesystem::path dir = ".";
    SummaryFormat format = SummaryFormat::kJson;
};

/// Runs one scenario (its `kind` key selects the runner). Throws
/// ConfigError for invalid parameters and ConvergenceError after writing
/// outputs when the reconstruction did not converge.
void run_scenario(const Config &config, std::uint64_t seed, const OutputOptions &out);

struct IngestOptions {
    std::filesystem::path csv;
    std::string set_id;
    std::string target = "none";
    double theta = 0.0;
    double reflectivity = 0.5;
    int trials = 20;
    int threads = 1;
};

void run_ingest(const IngestOptions &options, std::uint64_t seed, const OutputOptions &out);

}  // namespace biphoton::cli
