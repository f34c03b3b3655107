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

#include "dynpec/circuit.h"

#include <algorithm>
#include <set>

#include "dynpec/error.h"
#include "dynpec/gates.h"

namespace dynpec {

using nlohmann::json;

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Unitary: return "unitary";
        case LayerKind::Measurement: return "measurement";
        case LayerKind::Delay: return "delay";
        case LayerKind::Dephase: return "dephase";
        case LayerKind::Conditional: return "conditional";
    }
    return "?";
}

Layer Layer::unitary(std::vector<Gate> gates, std::string label) {
    Layer l;
    l.kind = LayerKind::Unitary;
    l.gates = std::move(gates);
    l.label = std::move(label);
    return l;
}

Layer Layer::measurement(std::vector<int> qubits, std::vector<int> clbits, std::vector<FeedforwardRule> ff,
                         std::string label) {
    Layer l;
    l.kind = LayerKind::Measurement;
    l.qubits = std::move(qubits);
    l.clbits = std::move(clbits);
    l.feedforward = std::move(ff);
    l.label = std::move(label);
    return l;
}

Layer Layer::delay(std::string tag, std::vector<int> qubits) {
    Layer l;
    l.kind = LayerKind::Delay;
    l.tag = std::move(tag);
    l.qubits = std::move(qubits);
    return l;
}

Layer Layer::dephase(std::vector<int> qubits) {
    Layer l;
    l.kind = LayerKind::Dephase;
    l.qubits = std::move(qubits);
    return l;
}

Layer Layer::conditional(std::vector<FeedforwardRule> ops) {
    Layer l;
    l.kind = LayerKind::Conditional;
    l.feedforward = std::move(ops);
    return l;
}

std::vector<int> layer_support(const Layer &layer) {
    std::set<int> qs(layer.support.begin(), layer.support.end());
    if (qs.empty()) {
        for (const auto &g : layer.gates) qs.insert(g.qubits.begin(), g.qubits.end());
        qs.insert(layer.qubits.begin(), layer.qubits.end());
        for (const auto &r : layer.feedforward) {
            qs.insert(r.target);
            if (r.control >= 0) qs.insert(r.control);
        }
    }
    return {qs.begin(), qs.end()};
}

DynamicCircuit &DynamicCircuit::append(Layer layer) {
    layers_.push_back(std::move(layer));
    return *this;
}

size_t DynamicCircuit::layer_index(std::string_view label) const {
    size_t found = layers_.size();
    for (size_t i = 0; i < layers_.size(); i++) {
        if (layers_[i].label == label) {
            if (found != layers_.size()) throw ConfigError("layer label '" + std::string(label) + "' is not unique");
            found = i;
        }
    }
    if (found == layers_.size()) throw ConfigError("no layer labelled '" + std::string(label) + "'");
    return found;
}

std::vector<std::string> DynamicCircuit::pec_labels() const {
    std::vector<std::string> out;
    for (const auto &l : layers_) {
        if (!l.label.empty() && l.is_pec_candidate() && std::find(out.begin(), out.end(), l.label) == out.end()) {
            out.push_back(l.label);
        }
    }
    return out;
}

void DynamicCircuit::validate() const {
    if (num_qubits_ < 0 || num_clbits_ < 0) throw ConfigError("negative register size");
    if (num_clbits_ > 62) throw ConfigError("at most 62 classical bits are supported");
    auto check_qubit = [&](int q, size_t layer) {
        if (q < 0 || q >= num_qubits_) {
            throw ConfigError("layer " + std::to_string(layer) + ": qubit " + std::to_string(q) + " out of range");
        }
    };
    auto check_clbit = [&](int b, size_t layer) {
        if (b < 0 || b >= num_clbits_) {
            throw ConfigError("layer " + std::to_string(layer) + ": clbit " + std::to_string(b) + " out of range");
        }
    };
    auto check_rule = [&](const FeedforwardRule &r, size_t i) {
        check_clbit(r.clbit, i);
        check_qubit(r.target, i);
        if (r.value != 0 && r.value != 1) throw ConfigError("feedforward value must be 0 or 1");
        if (r.op == "delay") return;
        const GateInfo &info = gate_info(r.op);
        if (info.num_params != 0) throw ConfigError("feedforward op '" + r.op + "' must be parameter free");
        if (r.control >= 0) {
            check_qubit(r.control, i);
            if (r.op != "cx" || r.control == r.target) throw ConfigError("two-qubit feedforward must be a cx");
        } else if (info.arity != 1) {
            throw ConfigError("feedforward op '" + r.op + "' must act on one qubit");
        }
    };
    for (size_t i = 0; i < layers_.size(); i++) {
        const Layer &l = layers_[i];
        for (int q : l.support) check_qubit(q, i);
        std::set<int> seen;
        auto claim = [&](int q) {
            check_qubit(q, i);
            if (!seen.insert(q).second) {
                throw ConfigError("layer " + std::to_string(i) + ": qubit " + std::to_string(q) +
                                  " appears more than once");
            }
        };
        switch (l.kind) {
            case LayerKind::Unitary:
                for (const auto &g : l.gates) {
                    const GateInfo &info = gate_info(g.name);
                    if (g.qubits.size() != info.arity) {
                        throw ConfigError("gate '" + g.name + "' expects " + std::to_string(info.arity) + " qubit(s)");
                    }
                    if (g.params.size() != info.num_params) {
                        throw ConfigError("gate '" + g.name + "' has the wrong number of parameters");
                    }
                    for (int q : g.qubits) claim(q);
                }
                break;
            case LayerKind::Measurement: {
                if (l.qubits.size() != l.clbits.size()) {
                    throw ConfigError("measurement layer " + std::to_string(i) + " needs one clbit per qubit");
                }
                for (int q : l.qubits) claim(q);
                std::set<int> bits;
                for (int b : l.clbits) {
                    check_clbit(b, i);
                    if (!bits.insert(b).second) {
                        throw ConfigError("measurement layer " + std::to_string(i) + " writes clbit " +
                                          std::to_string(b) + " twice");
                    }
                }
                for (const auto &r : l.feedforward) {
                    check_rule(r, i);
                    if (!bits.contains(r.clbit)) {
                        throw ConfigError("feedforward in layer " + std::to_string(i) +
                                          " reads a clbit the layer does not write");
                    }
                    if (seen.contains(r.target) || (r.control >= 0 && seen.contains(r.control))) {
                        throw ConfigError("feedforward in layer " + std::to_string(i) + " acts on a measured qubit");
                    }
                }
                break;
            }
            case LayerKind::Delay:
                for (int q : l.qubits) claim(q);
                break;
            case LayerKind::Dephase:
                for (int q : l.qubits) claim(q);
                break;
            case LayerKind::Conditional:
                for (const auto &r : l.feedforward) check_rule(r, i);
                break;
        }
    }
}

json rule_to_json(const FeedforwardRule &r) {
    json j = {{"clbit", r.clbit}, {"value", r.value}, {"op", r.op}, {"target", r.target}};
    if (r.control >= 0) j["control"] = r.control;
    return j;
}

FeedforwardRule rule_from_json(const json &j) {
    FeedforwardRule r;
    r.clbit = j.at("clbit").get<int>();
    r.value = j.value("value", 1);
    r.op = j.at("op").get<std::string>();
    r.target = j.at("target").get<int>();
    r.control = j.value("control", -1);
    return r;
}

namespace {

json layer_to_json(const Layer &l) {
    json j;
    j["kind"] = std::string(to_string(l.kind));
    if (!l.label.empty()) j["label"] = l.label;
    if (!l.support.empty()) j["support"] = l.support;
    switch (l.kind) {
        case LayerKind::Unitary: {
            json gates = json::array();
            for (const auto &g : l.gates) {
                json e = json::array({g.name, g.qubits});
                if (!g.params.empty()) e.push_back(g.params);
                gates.push_back(std::move(e));
            }
            j["gates"] = std::move(gates);
            break;
        }
        case LayerKind::Measurement: {
            j["qubits"] = l.qubits;
            j["clbits"] = l.clbits;
            json ff = json::array();
            for (const auto &r : l.feedforward) ff.push_back(rule_to_json(r));
            j["feedforward"] = std::move(ff);
            break;
        }
        case LayerKind::Delay:
            j["tag"] = l.tag;
            if (!l.qubits.empty()) j["qubits"] = l.qubits;
            break;
        case LayerKind::Dephase:
            j["qubits"] = l.qubits;
            break;
        case LayerKind::Conditional: {
            json ops = json::array();
            for (const auto &r : l.feedforward) ops.push_back(rule_to_json(r));
            j["ops"] = std::move(ops);
            break;
        }
    }
    return j;
}

Layer layer_from_json(const json &j) {
    Layer l;
    std::string kind = j.at("kind").get<std::string>();
    l.label = j.value("label", std::string{});
    if (j.contains("support")) l.support = j.at("support").get<std::vector<int>>();
    if (kind == "unitary") {
        l.kind = LayerKind::Unitary;
        for (const auto &e : j.at("gates")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ConfigError("gate entries are [name, [qubits]]");
            Gate g;
            g.name = e.at(0).get<std::string>();
            g.qubits = e.at(1).get<std::vector<int>>();
            if (e.size() == 3) g.params = e.at(2).get<std::vector<double>>();
            l.gates.push_back(std::move(g));
        }
    } else if (kind == "measurement") {
        l.kind = LayerKind::Measurement;
        l.qubits = j.at("qubits").get<std::vector<int>>();
        l.clbits = j.at("clbits").get<std::vector<int>>();
        if (j.contains("feedforward")) {
            for (const auto &r : j.at("feedforward")) l.feedforward.push_back(rule_from_json(r));
        }
    } else if (kind == "delay") {
        l.kind = LayerKind::Delay;
        l.tag = j.at("tag").get<std::string>();
        if (j.contains("qubits")) l.qubits = j.at("qubits").get<std::vector<int>>();
    } else if (kind == "dephase") {
        l.kind = LayerKind::Dephase;
        l.qubits = j.at("qubits").get<std::vector<int>>();
    } else if (kind == "conditional") {
        l.kind = LayerKind::Conditional;
        for (const auto &r : j.at("ops")) l.feedforward.push_back(rule_from_json(r));
    } else {
        throw ConfigError("unknown layer kind '" + kind + "'");
    }
    return l;
}

}  // namespace

json DynamicCircuit::to_json() const {
    json layers = json::array();
    for (const auto &l : layers_) layers.push_back(layer_to_json(l));
    json doc = {{"n_qubits", num_qubits_}, {"n_clbits", num_clbits_}, {"layers", std::move(layers)}};
    if (!metadata_.is_null()) doc["metadata"] = metadata_;
    return doc;
}

DynamicCircuit DynamicCircuit::from_json(const json &doc) {
    DynamicCircuit c;
    try {
        if (!doc.is_object()) throw ConfigError("circuit document must be a JSON object");
        c.num_qubits_ = doc.at("n_qubits").get<int>();
        c.num_clbits_ = doc.value("n_clbits", 0);
        for (const auto &l : doc.at("layers")) c.layers_.push_back(layer_from_json(l));
        if (doc.contains("metadata")) c.metadata_ = doc.at("metadata");
    } catch (const json::exception &e) {
        throw ConfigError(std::string("circuit schema violation: ") + e.what());
    }
    c.validate();
    return c;
}

DynamicCircuit DynamicCircuit::parse(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("circuit is not valid JSON: ") + e.what());
    }
    return from_json(doc);
}

std::string DynamicCircuit::serialize() const { return to_json().dump(2); }

DynamicCircuit parse_circuit(std::string_view text) { return DynamicCircuit::parse(text); }
std::string serialize_circuit(const DynamicCircuit &c) { return c.serialize(); }

}  // namespace dynpec
