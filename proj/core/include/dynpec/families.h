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

#include <string>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"
#include "dynpec/pauli.h"
#include "dynpec/rng.h"

namespace dynpec {

/// Feedforward target circuit: data qubit 0 prepared with weight alpha on
/// |0> (cos^2(theta/2) = alpha), CNOT onto ancilla 1 (layer "cx"), ancilla
/// measured into clbit 0 (layer "meas") with X on the data qubit when the
/// outcome is 1. Ideally the data qubit ends in |0>.
DynamicCircuit feedforward_circuit(double alpha);

/// Seven-qubit tile of a surface-code patch. Data qubits {0, 2, 3, 4, 6} start
/// in |+>; ancilla 1 reads Z0 Z2 Z3 and ancilla 5 reads Z3 Z4 Z6 through four
/// labelled CNOT layers ("cx1" .. "cx4") and two labelled measurement layers
/// ("meas1" on {1, 3}, "meas2" on {0, 5, 6}). Recovery is left to software.
DynamicCircuit tile_circuit();
/// X on data 0 when ancilla 1 reads 1, X on data 6 when ancilla 5 reads 1.
std::vector<FeedforwardRule> tile_recovery();
/// The two Z checks followed by the two X stabilizers; all are +1 on the
/// ideal, recovered output.
std::vector<PauliString> tile_stabilizers();

/// Reference circuit for the decomposition check: measure qubit `a` into
/// clbit 0 and apply CNOT(c -> t) when it reads 1.
DynamicCircuit cc_cnot_reference(int a = 0, int c = 1, int t = 2);

struct RandomCircuitOptions {
    int num_qubits = 3;
    int num_layers = 6;
    /// Allow non-Pauli single-qubit Clifford feedforward.
    bool clifford_feedforward = true;
};

/// Random Clifford dynamic circuit with mid-circuit measurements, feedforward
/// and labelled PEC layers, plus a random Pauli noise binding (layer and
/// latency noise, readout and discriminator errors).
std::pair<DynamicCircuit, NoiseBinding> random_dynamic_circuit(Rng &rng, const RandomCircuitOptions &options = {});

}  // namespace dynpec
