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

#include "biphoton/io.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace biphoton {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_number(const std::string &cell, const std::string &where) {
    double x = 0.0;
    const char *begin = cell.data();
    const char *end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, x);
    if (ec != std::errc() || ptr != end || cell.empty()) {
        throw FormatError(where + ": '" + cell + "' is not a number");
    }
    return x;
}

}  // namespace

std::vector<CountRecord> parse_count_csv(const std::string &text, const std::string &source) {
    std::stringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    bool has_weight = false;
    std::vector<CountRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        if (trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_commas(line);
        if (!header_seen) {
            if (cells.size() < 2 || cells[0] != "setting_label" || cells[1] != "counts" ||
                (cells.size() == 3 && cells[2] != "weight") || cells.size() > 3) {
                throw FormatError(where + ": expected header 'setting_label,counts[,weight]'");
            }
            has_weight = cells.size() == 3;
            header_seen = true;
            continue;
        }
        if (cells.size() != (has_weight ? 3u : 2u)) {
            throw FormatError(where + ": expected " + std::to_string(has_weight ? 3 : 2) + " columns");
        }
        CountRecord r;
        r.label = cells[0];
        if (r.label.empty()) {
            throw FormatError(where + ": empty setting label");
        }
        r.counts = parse_number(cells[1], where);
        if (!(r.counts >= 0.0)) {
            throw FormatError(where + ": counts must be non-negative");
        }
        if (has_weight && !cells[2].empty()) {
            r.weight = parse_number(cells[2], where);
            if (!(*r.weight > 0.0)) {
                throw FormatError(where + ": weight must be positive");
            }
        }
        out.push_back(std::move(r));
    }
    if (!header_seen) {
        throw FormatError(source + ": empty count file");
    }
    return out;
}

std::vector<CountRecord> read_count_csv(const std::filesystem::path &path) {
    return parse_count_csv(read_file(path), path.string());
}

std::string format_count_csv(const std::vector<CountRecord> &records) {
    bool any_weight = false;
    for (const auto &r : records) {
        any_weight = any_weight || r.weight.has_value();
    }
    std::string out = any_weight ? "setting_label,counts,weight\n" : "setting_label,counts\n";
    for (const auto &r : records) {
        out += r.label + "," + format_double(r.counts);
        if (any_weight) {
            out += "," + (r.weight ? format_double(*r.weight) : std::string());
        }
        out += "\n";
    }
    return out;
}

AlignedCounts align_counts(const std::vector<CountRecord> &records, const ProjectorSet &base) {
    std::vector<double> counts(base.size(), 0.0);
    std::vector<MeasurementSetting> settings = base.settings();
    std::set<std::string> seen;
    for (const auto &r : records) {
        const int idx = base.find(r.label);
        if (idx < 0) {
            throw FormatError("unknown setting label '" + r.label + "'");
        }
        if (!seen.insert(r.label).second) {
            throw FormatError("setting label '" + r.label + "' appears twice");
        }
        counts[static_cast<std::size_t>(idx)] = r.counts;
        if (r.weight) {
            settings[static_cast<std::size_t>(idx)].weight = *r.weight;
        }
    }
    if (seen.size() != base.size()) {
        for (const auto &s : base.settings()) {
            if (!seen.count(s.label)) {
                throw FormatError("missing setting label '" + s.label + "'");
            }
        }
    }
    return {std::move(counts), ProjectorSet(base.dimension(), std::move(settings), base.bipartition())};
}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view name) {
    // FNV-1a keeps the mapping stable across standard libraries.
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : name) {
        h = (h ^ c) * 1099511628211ull;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    std::mt19937_64 rng(seq);
    return rng();
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double failed");
    }
    return std::string(buf, ptr);
}

std::string density_matrix_json(const DensityMatrix &rho) {
    nlohmann::ordered_json j;
    const int d = rho.dimension();
    j["dimension"] = d;
    if (rho.bipartition()) {
        j["bipartition"] = {rho.bipartition()->dim_a, rho.bipartition()->dim_b};
    }
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (int r = 0; r < d; ++r) {
        nlohmann::ordered_json row_re = nlohmann::ordered_json::array();
        nlohmann::ordered_json row_im = nlohmann::ordered_json::array();
        for (int c = 0; c < d; ++c) {
            row_re.push_back(rho.matrix()(r, c).real());
            row_im.push_back(rho.matrix()(r, c).imag());
        }
        re.push_back(row_re);
        im.push_back(row_im);
    }
    j["real"] = re;
    j["imag"] = im;
    return j.dump(2) + "\n";
}

DensityMatrix parse_density_matrix_json(const std::string &text, const std::string &source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(source + ": " + e.what());
    }
    try {
        const int d = j.at("dimension").get<int>();
        if (d < 1) {
            throw FormatError(source + ": dimension must be positive");
        }
        const auto &re = j.at("real");
        const auto &im = j.at("imag");
        if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != d ||
            static_cast<int>(im.size()) != d) {
            throw FormatError(source + ": real/imag must be " + std::to_string(d) + " rows");
        }
        Eigen::MatrixXcd m(d, d);
        for (int r = 0; r < d; ++r) {
            if (static_cast<int>(re[r].size()) != d || static_cast<int>(im[r].size()) != d) {
                throw FormatError(source + ": row " + std::to_string(r) + " has the wrong length");
            }
            for (int c = 0; c < d; ++c) {
                m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
            }
        }
        std::optional<Bipartition> bip;
        if (j.contains("bipartition")) {
            const auto &b = j.at("bipartition");
            bip = Bipartition{b.at(0).get<int>(), b.at(1).get<int>()};
            if (bip->dim_a * bip->dim_b != d) {
                throw FormatError(source + ": bipartition does not multiply to the dimension");
            }
        }
        return DensityMatrix(m, bip);
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(source + ": " + e.what());
    } catch (const std::invalid_argument &e) {
        throw FormatError(source + ": " + e.what());
    }
}

DensityMatrix read_density_matrix_json(const std::filesystem::path &path) {
    return parse_density_matrix_json(read_file(path), path.string());
}

void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace biphoton
