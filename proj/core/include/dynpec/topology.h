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
#include <optional>
#include <string>
#include <vector>

#include "dynpec/circuit.h"
#include "dynpec/noise_model.h"

namespace dynpec {

/// Description of one PEC layer for learning: its qubit support, which of
/// those qubits are measured, and (optionally) the allowed generators.
/// Generator labels are local to `qubits`.
struct LayerSpec {
    std::string name;
    std::vector<int> qubits;
    std::vector<int> measured;
    std::vector<PauliString> generators;
    /// 0 means no truncation.
    size_t max_weight = 0;

    bool is_measurement() const { return !measured.empty(); }
    /// Local positions of the measured qubits.
    std::vector<size_t> measured_positions() const;
    void validate() const;
};

/// Readout-topology file: one entry per PEC layer.
struct Topology {
    std::vector<LayerSpec> layers;

    const LayerSpec *find(std::string_view name) const;
    nlohmann::json to_json() const;
    static Topology from_json(const nlohmann::json &doc);
};

/// Layer spec derived from the layer labelled `label` in `c`.
LayerSpec layer_spec_from_circuit(const DynamicCircuit &c, std::string_view label);

/// Measurement layers: every non-identity Pauli whose measured components
/// are I or Z. Unitary layers: every non-identity Pauli on the support.
/// Label order with I < X < Y < Z.
FidelityBasisSet select_fidelity_set(const LayerSpec &layer);

/// Measurement layers: the configured generators (all Paulis if none are
/// configured) restricted to measured components in {I, X}, truncated to
/// `max_weight`. Unitary layers: configured generators, else weight-1 terms
/// on every qubit and weight-2 terms on neighbouring support entries.
/// Throws ConfigError naming a generator whose column makes build_M rank
/// deficient.
GeneratorSet select_generator_set(const LayerSpec &layer);
GeneratorSet select_generator_set(const LayerSpec &layer, const Topology &topology);

}  // namespace dynpec
