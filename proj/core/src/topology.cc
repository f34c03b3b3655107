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

#include "dynpec/topology.h"

#include <algorithm>
#include <set>

#include "dynpec/error.h"

namespace dynpec {

using nlohmann::json;

std::vector<size_t> LayerSpec::measured_positions() const {
    std::vector<size_t> out;
    for (int m : measured) {
        auto it = std::find(qubits.begin(), qubits.end(), m);
        if (it == qubits.end()) throw ConfigError("layer '" + name + "': measured qubit outside the layer support");
        out.push_back(it - qubits.begin());
    }
    return out;
}

void LayerSpec::validate() const {
    if (qubits.empty()) throw ConfigError("layer '" + name + "' has an empty support");
    if (qubits.size() > 6) throw ConfigError("layer '" + name + "': supports larger than 6 qubits are not supported");
    std::set<int> seen;
    for (int q : qubits) {
        if (q < 0 || !seen.insert(q).second) throw ConfigError("layer '" + name + "': invalid or repeated qubit");
    }
    measured_positions();
    if (!generators.empty()) GeneratorSet(qubits, generators);
}

const LayerSpec *Topology::find(std::string_view name) const {
    for (const auto &l : layers) {
        if (l.name == name) return &l;
    }
    return nullptr;
}

json Topology::to_json() const {
    json arr = json::array();
    for (const auto &l : layers) {
        json g = json::array();
        for (const auto &p : l.generators) g.push_back(p.label());
        json e = {{"name", l.name}, {"qubits", l.qubits}, {"measured", l.measured}, {"generators", g}};
        if (l.max_weight) e["max_weight"] = l.max_weight;
        arr.push_back(std::move(e));
    }
    return {{"layers", arr}};
}

Topology Topology::from_json(const json &doc) {
    Topology t;
    try {
        for (const auto &e : doc.at("layers")) {
            LayerSpec l;
            l.name = e.at("name").get<std::string>();
            l.qubits = e.at("qubits").get<std::vector<int>>();
            l.measured = e.value("measured", std::vector<int>{});
            for (const auto &g : e.value("generators", std::vector<std::string>{})) {
                l.generators.push_back(PauliString::from_label(g));
            }
            l.max_weight = e.value("max_weight", size_t{0});
            l.validate();
            t.layers.push_back(std::move(l));
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("topology schema violation: ") + e.what());
    }
    return t;
}

LayerSpec layer_spec_from_circuit(const DynamicCircuit &c, std::string_view label) {
    const Layer &layer = c.layers()[c.layer_index(label)];
    if (!layer.is_pec_candidate()) throw ConfigError("layer '" + std::string(label) + "' is not a PEC layer");
    LayerSpec spec;
    spec.name = std::string(label);
    spec.qubits = layer_support(layer);
    if (layer.kind == LayerKind::Measurement) spec.measured = layer.qubits;
    return spec;
}

namespace {

bool measured_components_in(const PauliString &p, const std::vector<size_t> &pos, char allowed) {
    for (size_t j : pos) {
        char c = p.get(j);
        if (c != 'I' && c != allowed) return false;
    }
    return true;
}

}  // namespace

FidelityBasisSet select_fidelity_set(const LayerSpec &layer) {
    layer.validate();
    FidelityBasisSet f;
    f.qubits = layer.qubits;
    auto pos = layer.measured_positions();
    for (auto &p : all_paulis(layer.qubits.size())) {
        if (p.is_identity()) continue;
        if (measured_components_in(p, pos, 'Z')) f.bases.push_back(std::move(p));
    }
    return f;
}

GeneratorSet select_generator_set(const LayerSpec &layer) {
    layer.validate();
    const size_t n = layer.qubits.size();
    auto pos = layer.measured_positions();
    std::vector<PauliString> candidates = layer.generators;
    if (candidates.empty()) {
        if (layer.is_measurement()) {
            for (auto &p : all_paulis(n)) {
                if (!p.is_identity()) candidates.push_back(std::move(p));
            }
        } else {
            for (auto &p : all_paulis(n)) {
                if (p.is_identity()) continue;
                auto s = p.support();
                bool ok = s.size() == 1 || (s.size() == 2 && s[1] == s[0] + 1);
                if (ok) candidates.push_back(std::move(p));
            }
        }
    }
    std::vector<PauliString> gens;
    for (auto &p : candidates) {
        if (layer.max_weight && p.weight() > layer.max_weight) continue;
        if (layer.is_measurement() && !measured_components_in(p, pos, 'X')) continue;
        gens.push_back(p);
    }
    if (gens.empty()) throw ConfigError("layer '" + layer.name + "' has no admissible generators");
    GeneratorSet K(layer.qubits, std::move(gens));

    Eigen::MatrixXd M = build_M(select_fidelity_set(layer), K);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() < static_cast<Eigen::Index>(K.size())) {
        // Report the first generator whose column adds nothing new.
        for (size_t l = 1; l <= K.size(); l++) {
            Eigen::FullPivLU<Eigen::MatrixXd> part(M.leftCols(l));
            if (part.rank() < static_cast<Eigen::Index>(l)) {
                throw ConfigError("layer '" + layer.name + "': generator " + K.generators[l - 1].label() +
                                  " is not identifiable from the fidelity bases (M is rank deficient)");
            }
        }
    }
    return K;
}

GeneratorSet select_generator_set(const LayerSpec &layer, const Topology &topology) {
    const LayerSpec *t = topology.find(layer.name);
    if (!t) throw ConfigError("topology has no entry for layer '" + layer.name + "'");
    if (t->qubits != layer.qubits) throw ConfigError("topology entry for '" + layer.name + "' has a different support");
    std::set<int> a(t->measured.begin(), t->measured.end()), b(layer.measured.begin(), layer.measured.end());
    if (a != b) throw ConfigError("topology entry for '" + layer.name + "' measures different qubits");
    return select_generator_set(*t);
}

}  // namespace dynpec
