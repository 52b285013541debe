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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/metrics.hpp"
#include "biphoton/tomography.hpp"

namespace biphoton {

/// Malformed input file. The message names the file and, for CSV, the line.
class FormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct CountRecord {
    std::string label;
    double counts = 0.0;
    std::optional<double> weight;
};

/// Header `setting_label,counts` with an optional third `weight` column.
std::vector<CountRecord> parse_count_csv(const std::string &text, const std::string &source = "<input>");
std::vector<CountRecord> read_count_csv(const std::filesystem::path &path);
std::string format_count_csv(const std::vector<CountRecord> &records);

struct AlignedCounts {
    std::vector<double> counts;
    /// `base` with any per-row weights substituted.
    ProjectorSet set;
};

/// Orders the records like `base`. Every setting must appear exactly once.
AlignedCounts align_counts(const std::vector<CountRecord> &records, const ProjectorSet &base);

/// {"dimension": d, "bipartition": [a, b]?, "real": [[...]], "imag": [[...]]}.
std::string density_matrix_json(const DensityMatrix &rho);
DensityMatrix parse_density_matrix_json(const std::string &text, const std::string &source = "<input>");
DensityMatrix read_density_matrix_json(const std::filesystem::path &path);

/// Seed of the named random substream derived from a scenario seed.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name);

/// Shortest round-trip decimal form of `x`.
std::string format_double(double x);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);
std::string read_file(const std::filesystem::path &path);

}  // namespace biphoton
