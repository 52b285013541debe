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


#include <filesystem>
#include <random>

#include "biphoton/io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace biphoton;

TEST_CASE("count CSV round trip") {
    std::vector<CountRecord> recs{{"0", 12.0, std::nullopt}, {"0+1", 3.5, std::nullopt}};
    CHECK(format_count_csv(recs) == "setting_label,counts\n0,12\n0+1,3.5\n");
    const auto back = parse_count_csv(format_count_csv(recs));
    REQUIRE(back.size() == 2);
    CHECK(back[1].label == "0+1");
    CHECK(back[1].counts == 3.5);
    recs[0].weight = 0.25;
    const auto weighted = parse_count_csv(format_count_csv(recs));
    CHECK(weighted[0].weight == 0.25);
    CHECK_FALSE(weighted[1].weight.has_value());
}

TEST_CASE("count CSV errors carry line numbers") {
    auto message = [](const std::string &text) {
        try {
            parse_count_csv(text, "f.csv");
        } catch (const FormatError &e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("label,counts\n").find("f.csv:1") != std::string::npos);
    CHECK(message("setting_label,counts\n0,1\n1,x\n").find("f.csv:3") != std::string::npos);
    CHECK(message("setting_label,counts\n0,-1\n").find("non-negative") != std::string::npos);
    CHECK(message("setting_label,counts\n0,1,2\n").find("columns") != std::string::npos);
    CHECK(message("").find("empty") != std::string::npos);
}

TEST_CASE("align counts to a set") {
    const ProjectorSet set = ProjectorSet::qutrit();
    std::vector<CountRecord> recs;
    for (auto it = set.settings().rbegin(); it != set.settings().rend(); ++it) {
        recs.push_back({it->label, static_cast<double>(recs.size()), std::nullopt});
    }
    const AlignedCounts a = align_counts(recs, set);
    CHECK(a.counts[0] == 8.0);
    CHECK(a.counts[8] == 0.0);
    recs[0].weight = 2.0;
    CHECK(align_counts(recs, set).set.settings()[8].weight == 2.0);
    auto dup = recs;
    dup[1].label = dup[0].label;
    CHECK_THROWS_AS(align_counts(dup, set), FormatError);
    auto unknown = recs;
    unknown[0].label = "7";
    CHECK_THROWS_AS(align_counts(unknown, set), FormatError);
    recs.pop_back();
    CHECK_THROWS_AS(align_counts(recs, set), FormatError);
}

TEST_CASE("density matrix JSON round trip is exact") {
    std::mt19937_64 rng(3);
    const DensityMatrix rho(testing::random_density(6, 3, rng), Bipartition{2, 3});
    const std::string text = density_matrix_json(rho);
    const DensityMatrix back = parse_density_matrix_json(text);
    CHECK(back.matrix() == rho.matrix());
    CHECK(back.bipartition() == rho.bipartition());
    CHECK(density_matrix_json(back) == text);
    CHECK_THROWS_AS(parse_density_matrix_json("{\"dimension\": 2}"), FormatError);
    CHECK_THROWS_AS(parse_density_matrix_json("not json"), FormatError);
    CHECK_THROWS_AS(parse_density_matrix_json(
                        "{\"dimension\":1,\"bipartition\":[2,3],\"real\":[[1]],\"imag\":[[0]]}"),
                    FormatError);
}

TEST_CASE("formatting and seeds") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(substream_seed(1, "counts") == substream_seed(1, "counts"));
    CHECK(substream_seed(1, "counts") != substream_seed(1, "monte-carlo"));
    CHECK(substream_seed(1, "counts") != substream_seed(2, "counts"));
}

TEST_CASE("atomic write") {
    const auto dir = std::filesystem::temp_directory_path() / "biphoton_io_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "x.txt", "hello");
    CHECK(read_file(dir / "x.txt") == "hello");
    CHECK_FALSE(std::filesystem::exists(dir / "x.txt.tmp"));
    std::filesystem::remove_all(dir);
    CHECK_THROWS(read_file(dir / "missing"));
}
