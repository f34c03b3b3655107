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

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace dynpec {

struct Gate {
    std::string name;
    std::vector<int> qubits;
    std::vector<double> params;

    bool operator==(const Gate &) const = default;
};

/// A classically controlled operation: when clbit `clbit` reads `value`,
/// apply `op` to `target`. `op` is a single-qubit gate name or "delay"
/// (identity with control-flow latency). A two-qubit "cx" with `control`
/// set is accepted only as input to the classically-controlled-CNOT
/// decomposition.
struct FeedforwardRule {
    int clbit = 0;
    int value = 1;
    std::string op;
    int target = 0;
    int control = -1;

    bool operator==(const FeedforwardRule &) const = default;
    bool is_two_qubit() const { return control >= 0; }
};

nlohmann::json rule_to_json(const FeedforwardRule &r);
/// Throws nlohmann::json::exception on missing fields.
FeedforwardRule rule_from_json(const nlohmann::json &j);

enum class LayerKind { Unitary, Measurement, Delay, Dephase, Conditional };

std::string_view to_string(LayerKind kind);

/// One circuit layer. Which fields are meaningful depends on `kind`:
///   Unitary:     gates
///   Measurement: qubits (measured), clbits (one per measured qubit), feedforward
///   Delay:       tag, qubits (optional)
///   Dephase:     qubits
///   Conditional: feedforward (rules reading bits written by earlier layers)
/// `label` names PEC layers; noise bindings and learned models attach to it.
/// A label may repeat (a learning circuit applies the same layer k times).
/// `support` optionally widens the qubit set a PEC layer is twirled and
/// learned on (e.g. spectators of a measurement).
struct Layer {
    LayerKind kind = LayerKind::Unitary;
    std::string label;
    std::vector<Gate> gates;
    std::vector<int> qubits;
    std::vector<int> clbits;
    std::vector<FeedforwardRule> feedforward;
    std::vector<int> support;
    std::string tag;

    bool operator==(const Layer &) const = default;

    static Layer unitary(std::vector<Gate> gates, std::string label = {});
    static Layer measurement(std::vector<int> qubits, std::vector<int> clbits,
                             std::vector<FeedforwardRule> feedforward = {}, std::string label = {});
    static Layer delay(std::string tag, std::vector<int> qubits = {});
    static Layer dephase(std::vector<int> qubits);
    static Layer conditional(std::vector<FeedforwardRule> ops);

    bool is_pec_candidate() const { return kind == LayerKind::Unitary || kind == LayerKind::Measurement; }
};

/// Sorted qubit support of a layer: the explicit `support` if given, else the
/// qubits its operations touch.
std::vector<int> layer_support(const Layer &layer);

class DynamicCircuit {
   public:
    DynamicCircuit() = default;
    DynamicCircuit(int num_qubits, int num_clbits) : num_qubits_(num_qubits), num_clbits_(num_clbits) {}

    int num_qubits() const { return num_qubits_; }
    int num_clbits() const { return num_clbits_; }
    const std::vector<Layer> &layers() const { return layers_; }
    std::vector<Layer> &mutable_layers() { return layers_; }
    const nlohmann::json &metadata() const { return metadata_; }
    void set_metadata(nlohmann::json m) { metadata_ = std::move(m); }

    DynamicCircuit &append(Layer layer);
    void set_num_clbits(int n) { num_clbits_ = n; }

    /// Index of the layer carrying `label`; throws if missing or repeated.
    size_t layer_index(std::string_view label) const;
    std::vector<std::string> pec_labels() const;

    /// Throws ConfigError on out-of-range indices, repeated qubits within a
    /// layer, repeated clbit writes within a measurement layer or unknown gates.
    void validate() const;

    nlohmann::json to_json() const;
    static DynamicCircuit from_json(const nlohmann::json &doc);
    static DynamicCircuit parse(std::string_view text);
    std::string serialize() const;

    bool operator==(const DynamicCircuit &) const = default;

   private:
    int num_qubits_ = 0;
    int num_clbits_ = 0;
    std::vector<Layer> layers_;
    nlohmann::json metadata_;
};

/// Free-function names for the JSON round trip.
DynamicCircuit parse_circuit(std::string_view text);
std::string serialize_circuit(const DynamicCircuit &c);

}  // namespace dynpec
