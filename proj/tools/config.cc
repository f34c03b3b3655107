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

#include "config.h"

#include <fstream>
#include <sstream>

#include "dynpec/families.h"

namespace dynpec::cli {

using nlohmann::json;
namespace fs = std::filesystem;

json read_json_file(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + " is not valid JSON: " + e.what());
    }
}

void write_text(const fs::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path &path, const json &doc) { write_text(path, doc.dump(2) + "\n"); }

void prepare_out_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

Config Config::load(const fs::path &path) {
    Config c;
    c.doc = read_json_file(path);
    if (!c.doc.is_object()) throw ConfigError("config root must be an object");
    c.base = path.parent_path();
    return c;
}

void Config::allow_only(std::initializer_list<std::string_view> allowed, std::string_view command) const {
    for (const auto &[key, value] : doc.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(command) + " config");
    }
}

const json &Config::at(std::string_view key) const {
    auto it = doc.find(key);
    if (it == doc.end()) throw ConfigError("config is missing '" + std::string(key) + "'");
    return *it;
}

uint64_t Config::seed(const Options &options) const {
    if (options.seed) return *options.seed;
    return has("seed") ? get_as<uint64_t>(at("seed"), "seed") : 0;
}

fs::path Config::resolve(const std::string &path) const {
    fs::path p(path);
    return p.is_absolute() ? p : base / p;
}

json Config::inline_or_file(const json &value) const {
    return value.is_string() ? read_json_file(resolve(value.get<std::string>())) : value;
}

DynamicCircuit Config::circuit() const {
    const json j = inline_or_file(at("circuit"));
    if (!j.is_object()) throw ConfigError("'circuit' must be a path, a circuit document or a family object");
    if (!j.contains("family")) return DynamicCircuit::from_json(j);
    const auto family = get_as<std::string>(j["family"], "circuit.family");
    if (family == "feedforward") {
        const double alpha = get_as<double>(j.value("alpha", json(1.0)), "circuit.alpha");
        if (!(alpha >= 0 && alpha <= 1)) throw ConfigError("circuit.alpha must lie in [0, 1]");
        return feedforward_circuit(alpha);
    }
    if (family == "tile") return tile_circuit();
    if (family == "cc_cnot") return cc_cnot_reference();
    throw ConfigError("unknown circuit family '" + family + "'");
}

NoiseBinding Config::noise(const DynamicCircuit &c) const {
    if (!has("noise")) return NoiseBinding{};
    NoiseBinding b = NoiseBinding::from_json(inline_or_file(at("noise")));
    b.validate(c.num_qubits());
    return b;
}

std::optional<Topology> Config::topology() const {
    if (!has("topology")) return std::nullopt;
    return Topology::from_json(inline_or_file(at("topology")));
}

LearningConfig Config::learning(uint64_t seed, size_t workers) const {
    json j = has("learning") ? at("learning") : json::object();
    if (!j.is_object()) throw ConfigError("'learning' must be an object");
    for (const auto &[key, value] : j.items()) {
        if (key != "depths" && key != "instances" && key != "shots" && key != "bootstrap") {
            throw ConfigError("unknown key '" + key + "' in learning config");
        }
    }
    j["seed"] = seed;
    LearningConfig cfg = LearningConfig::from_json(j);
    cfg.workers = workers;
    return cfg;
}

NoiseModel Config::model(const json &value) const {
    const json j = inline_or_file(value);
    if (!j.is_object()) throw ConfigError("a model must be a report or noise model object");
    try {
        return j.contains("layer") ? LearnedModel::from_report(j).model : NoiseModel::from_json(j);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("model schema violation: ") + e.what());
    }
}

std::map<std::string, NoiseModel, std::less<>> Config::models() const {
    std::map<std::string, NoiseModel, std::less<>> out;
    if (!has("models")) return out;
    const json &m = at("models");
    if (!m.is_object()) throw ConfigError("'models' must map layer labels to reports");
    for (const auto &[label, value] : m.items()) out.emplace(label, model(value));
    return out;
}

}  // namespace dynpec::cli
