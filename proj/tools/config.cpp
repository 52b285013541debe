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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace biphoton::cli {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> plain_number(const std::string &s) {
    if (s.empty()) {
        return std::nullopt;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return x;
}

}  // namespace

std::optional<double> parse_scalar(const std::string &raw) {
    const std::string text = trim(raw);
    if (auto x = plain_number(text)) {
        return x;
    }
    const auto at = text.find("pi");
    if (at == std::string::npos) {
        return std::nullopt;
    }
    double value = std::numbers::pi;
    std::string head = trim(text.substr(0, at));
    std::string tail = trim(text.substr(at + 2));
    if (!head.empty()) {
        if (head == "-") {
            value = -value;
        } else {
            if (head.back() != '*') {
                return std::nullopt;
            }
            const auto k = plain_number(trim(head.substr(0, head.size() - 1)));
            if (!k) {
                return std::nullopt;
            }
            value *= *k;
        }
    }
    if (!tail.empty()) {
        if (tail.front() != '/') {
            return std::nullopt;
        }
        const auto m = plain_number(trim(tail.substr(1)));
        if (!m || *m == 0.0) {
            return std::nullopt;
        }
        value /= *m;
    }
    return value;
}

Config Config::parse(const std::string &text) {
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError("<scenario>", std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) {
            throw ConfigError("<scenario>", "top level must be an object");
        }
        return Config(std::move(j));
    }
    nlohmann::json j = nlohmann::json::object();
    std::stringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no), "empty key");
        }
        if (j.contains(key)) {
            throw ConfigError(key, "given twice");
        }
        if (value == "true" || value == "false") {
            j[key] = value == "true";
        } else if (auto x = plain_number(value)) {
            j[key] = *x;
        } else {
            j[key] = value;
        }
    }
    return Config(std::move(j));
}

bool Config::has(const std::string &key) const {
    return values_.contains(key);
}

double Config::number(const std::string &key, std::optional<double> fallback, double lo, double hi) const {
    double x = 0.0;
    if (!values_.contains(key)) {
        if (!fallback) {
            throw ConfigError(key, "is required");
        }
        x = *fallback;
    } else {
        const auto &v = values_.at(key);
        if (v.is_number()) {
            x = v.get<double>();
        } else if (v.is_string()) {
            const auto parsed = parse_scalar(v.get<std::string>());
            if (!parsed) {
                throw ConfigError(key, "'" + v.get<std::string>() + "' is not a number");
            }
            x = *parsed;
        } else {
            throw ConfigError(key, "must be a number");
        }
    }
    if (!std::isfinite(x) || x < lo || x > hi) {
        std::ostringstream msg;
        msg << "value " << x << " outside [" << lo << ", " << hi << "]";
        throw ConfigError(key, msg.str());
    }
    return x;
}

long Config::integer(const std::string &key, std::optional<long> fallback, long lo, long hi) const {
    const double x = number(key, fallback ? std::optional<double>(static_cast<double>(*fallback)) : std::nullopt,
                            static_cast<double>(lo), static_cast<double>(hi));
    if (x != std::floor(x)) {
        throw ConfigError(key, "must be an integer");
    }
    return static_cast<long>(x);
}

bool Config::boolean(const std::string &key, bool fallback) const {
    if (!values_.contains(key)) {
        return fallback;
    }
    const auto &v = values_.at(key);
    if (!v.is_boolean()) {
        throw ConfigError(key, "must be true or false");
    }
    return v.get<bool>();
}

std::string Config::string(const std::string &key, std::optional<std::string> fallback) const {
    if (!values_.contains(key)) {
        if (!fallback) {
            throw ConfigError(key, "is required");
        }
        return *fallback;
    }
    const auto &v = values_.at(key);
    if (!v.is_string()) {
        throw ConfigError(key, "must be a string");
    }
    return v.get<std::string>();
}

void Config::require_known(const std::set<std::string> &allowed) const {
    for (const auto &[key, value] : values_.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(key, "unknown parameter");
        }
    }
}

}  // namespace biphoton::cli
