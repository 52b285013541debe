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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace biphoton::cli {

/// Invalid scenario input; `field` names the offending key.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

/// Non-convergence of a solver; maps to its own exit code.
class ConvergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Flat scenario parameters. Values may be numbers, booleans, strings, or
/// angle expressions such as "pi/8" or "3*pi/8".
class Config {
   public:
    Config() = default;
    explicit Config(nlohmann::json values) : values_(std::move(values)) {}

    /// JSON if the text starts with '{', otherwise `key = value` lines with
    /// '#' comments.
    static Config parse(const std::string &text);

    bool has(const std::string &key) const;
    double number(const std::string &key, std::optional<double> fallback, double lo, double hi) const;
    long integer(const std::string &key, std::optional<long> fallback, long lo, long hi) const;
    bool boolean(const std::string &key, bool fallback) const;
    std::string string(const std::string &key, std::optional<std::string> fallback) const;

    void set(const std::string &key, nlohmann::json value) {
        values_[key] = std::move(value);
    }

    /// Throws ConfigError for a key outside `allowed`.
    void require_known(const std::set<std::string> &allowed) const;

   private:
    nlohmann::json values_ = nlohmann::json::object();
};

/// Parses a number or an angle expression [k*]pi[/m].
std::optional<double> parse_scalar(const std::string &text);

}  // namespace biphoton::cli
