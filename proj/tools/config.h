// Copyright 2026 The dynpec Authors
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

#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"
#include "dynpec/error.h"
#include "dynpec/learning.h"
#include "dynpec/noise_model.h"
#include "dynpec/topology.h"

namespace dynpec::cli {

/// Global flags shared by every subcommand.
struct Options {
    std::filesystem::path config;
    std::optional<uint64_t> seed;
    size_t workers = 1;
    std::filesystem::path out = ".";
};

/// A parsed config document plus the directory its relative paths resolve against.
struct Config {
    nlohmann::json doc;
    std::filesystem::path base;

    static Config load(const std::filesystem::path &path);

    /// Throws ConfigError naming the first key not in `allowed`.
    void allow_only(std::initializer_list<std::string_view> allowed, std::string_view command) const;
    bool has(std::string_view key) const { return doc.contains(key); }
    const nlohmann::json &at(std::string_view key) const;

    /// --seed wins over the config's "seed"; 0 when neither is given.
    uint64_t seed(const Options &options) const;

    std::filesystem::path resolve(const std::string &path) const;
    /// A string value is read as a JSON file relative to the config; anything
    /// else is returned as is.
    nlohmann::json inline_or_file(const nlohmann::json &value) const;

    DynamicCircuit circuit() const;
    NoiseBinding noise(const DynamicCircuit &c) const;
    std::optional<Topology> topology() const;
    LearningConfig learning(uint64_t seed, size_t workers) const;
    /// A learned report (has "layer") or a bare noise model document.
    NoiseModel model(const nlohmann::json &value) const;
    std::map<std::string, NoiseModel, std::less<>> models() const;
};

nlohmann::json read_json_file(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, std::string_view text);
void write_json(const std::filesystem::path &path, const nlohmann::json &doc);
/// Creates the output directory; throws ConfigError when that fails.
void prepare_out_dir(const std::filesystem::path &dir);

/// Config value of type T, converting schema mismatches into ConfigError.
template <typename T>
T get_as(const nlohmann::json &j, std::string_view what) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError("config field '" + std::string(what) + "' has the wrong type");
    }
}

}  // namespace dynpec::cli
