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

#include "dynpec/binding.h"

#include <cmath>

#include "dynpec/error.h"

namespace dynpec {

using nlohmann::json;

bool NoiseBinding::has_coherent() const {
    for (const auto &[k, v] : coherent) {
        for (const auto &t : v) {
            if (t.angle != 0) return true;
        }
    }
    return false;
}

const NoiseModel *NoiseBinding::layer_model(std::string_view label) const {
    auto it = layers.find(label);
    return it == layers.end() ? nullptr : &it->second;
}

const NoiseModel *NoiseBinding::delay_model(std::string_view tag) const {
    auto it = delays.find(tag);
    return it == delays.end() ? nullptr : &it->second;
}

ReadoutError NoiseBinding::readout_of(int qubit) const {
    auto it = readout.find(qubit);
    return it == readout.end() ? ReadoutError{} : it->second;
}

void NoiseBinding::validate(int num_qubits) const {
    auto check_model = [&](const NoiseModel &m, const std::string &what) {
        for (int q : m.qubits()) {
            if (q < 0 || q >= num_qubits) throw ConfigError(what + " acts on qubit " + std::to_string(q) + " out of range");
        }
    };
    for (const auto &[k, m] : layers) check_model(m, "noise for layer '" + k + "'");
    for (const auto &[k, m] : delays) check_model(m, "delay noise '" + k + "'");
    for (const auto &[k, terms] : coherent) {
        for (const auto &t : terms) {
            if (t.pauli.num_qubits() != static_cast<size_t>(num_qubits)) {
                throw ConfigError("coherent term for '" + k + "' has the wrong qubit count");
            }
        }
    }
    auto prob = [](double p) { return p >= 0 && p <= 1; };
    for (const auto &[q, r] : readout) {
        if (q < 0 || q >= num_qubits) throw ConfigError("readout error on qubit out of range");
        if (!prob(r.p01) || !prob(r.p10)) throw ConfigError("readout flip probabilities must lie in [0, 1]");
    }
    for (const auto &[q, p] : init_flip) {
        if (q < 0 || q >= num_qubits || !prob(p)) throw ConfigError("invalid initial flip entry");
    }
    if (!(discriminator >= 0 && discriminator < 0.5)) throw ConfigError("discriminator error must lie in [0, 0.5)");
}

json NoiseBinding::to_json() const {
    json doc;
    json ls = json::object();
    for (const auto &[k, m] : layers) ls[k] = m.to_json();
    doc["layers"] = ls;
    json ds = json::object();
    for (const auto &[k, m] : delays) ds[k] = m.to_json();
    doc["delays"] = ds;
    json cs = json::object();
    for (const auto &[k, terms] : coherent) {
        json arr = json::array();
        for (const auto &t : terms) arr.push_back({{"pauli", t.pauli.label()}, {"angle", t.angle}});
        cs[k] = arr;
    }
    doc["coherent"] = cs;
    json ro = json::array();
    for (const auto &[q, r] : readout) ro.push_back({{"qubit", q}, {"p01", r.p01}, {"p10", r.p10}});
    doc["readout"] = ro;
    json init = json::array();
    for (const auto &[q, p] : init_flip) init.push_back({{"qubit", q}, {"p", p}});
    doc["init_flip"] = init;
    doc["discriminator"] = discriminator;
    doc["strict"] = strict;
    return doc;
}

NoiseBinding NoiseBinding::from_json(const json &doc) {
    NoiseBinding b;
    try {
        if (doc.contains("layers")) {
            for (const auto &[k, v] : doc.at("layers").items()) b.layers.emplace(k, NoiseModel::from_json(v));
        }
        if (doc.contains("delays")) {
            for (const auto &[k, v] : doc.at("delays").items()) b.delays.emplace(k, NoiseModel::from_json(v));
        }
        if (doc.contains("coherent")) {
            for (const auto &[k, v] : doc.at("coherent").items()) {
                std::vector<CoherentTerm> terms;
                for (const auto &t : v) {
                    terms.push_back(CoherentTerm{PauliString::from_label(t.at("pauli").get<std::string>()),
                                                 t.at("angle").get<double>()});
                }
                b.coherent.emplace(k, std::move(terms));
            }
        }
        if (doc.contains("readout")) {
            for (const auto &r : doc.at("readout")) {
                b.readout[r.at("qubit").get<int>()] = ReadoutError{r.value("p01", 0.0), r.value("p10", 0.0)};
            }
        }
        if (doc.contains("init_flip")) {
            for (const auto &r : doc.at("init_flip")) b.init_flip[r.at("qubit").get<int>()] = r.at("p").get<double>();
        }
        b.discriminator = doc.value("discriminator", 0.0);
        b.strict = doc.value("strict", false);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("noise binding schema violation: ") + e.what());
    }
    return b;
}

}  // namespace dynpec
