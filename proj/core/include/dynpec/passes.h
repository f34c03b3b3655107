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

#include <optional>
#include <utility>
#include <vector>

#include "dynpec/circuit.h"
#include "dynpec/clifford.h"
#include "dynpec/pauli.h"
#include "dynpec/rng.h"

namespace dynpec {

/// Bookkeeping for one twirled circuit instance.
///
/// `paulis[i]` is the n-qubit twirl drawn for layer `layers[i]`. Bit b of
/// `flips` is set iff the last measurement writing clbit b was twirled by X
/// or Y on the measured qubit, so the raw recorded bit must be inverted.
/// `sign` is the product of the phases picked up when twirls are commuted
/// through Clifford layers and feedforward operations. Under conjugation
/// these phases cancel, so it is reported but never multiplies estimates.
struct TwirlRecord {
    std::vector<size_t> layers;
    std::vector<PauliString> paulis;
    uint64_t flips = 0;
    int sign = 1;

    bool flipped(int clbit) const { return (flips >> clbit) & 1; }
};

/// Twirl (and optional mitigation insertion) requested for one layer.
/// Both Paulis are n-qubit and must lie on the layer's support. An empty
/// mitigation string (zero qubits) means no insertion.
struct LayerInsertion {
    size_t layer = 0;
    PauliString twirl;
    PauliString mitigation;
};

/// A unitary layer holding one Pauli gate per non-identity qubit of `p`.
Layer pauli_layer(const PauliString &p);

/// Tableau of a unitary layer on the full register, or nullopt when the
/// layer contains a non-Clifford gate.
std::optional<CliffordOp> layer_clifford(const Layer &layer, int num_qubits);

/// Adds a dephase layer on exactly the measured qubits after every
/// measurement layer not already followed by one. Idempotent.
DynamicCircuit insert_dephasing(const DynamicCircuit &c);

/// Replaces every classically controlled operation by a conditional delay on
/// the same trigger, so control-flow latency noise still fires.
DynamicCircuit replace_feedforward_with_delay(const DynamicCircuit &c);

/// Rewrites `c` with the given insertions. For a unitary layer U the circuit
/// gets (twirl * mitigation) before U and U twirl U^dag after. For a
/// measurement layer the same twirl is applied after the layer, outcome flips
/// are recorded for X/Y twirl components on measured qubits, trigger values of
/// every rule reading a flipped bit are inverted, and non-Pauli Clifford
/// feedforward gets a conditional Pauli correction. Throws ConfigError for
/// layers that cannot be twirled.
std::pair<DynamicCircuit, TwirlRecord> apply_insertions(const DynamicCircuit &c,
                                                        const std::vector<LayerInsertion> &insertions);

/// Uniform twirl on the support of each selected layer.
std::pair<DynamicCircuit, TwirlRecord> sample_twirl_instance(const DynamicCircuit &c,
                                                             const std::vector<size_t> &layers, Rng &rng);
std::pair<DynamicCircuit, TwirlRecord> sample_twirl_instance(const DynamicCircuit &c,
                                                             const std::vector<size_t> &layers, uint64_t seed);

/// Indices of all labelled unitary and measurement layers.
std::vector<size_t> pec_layer_indices(const DynamicCircuit &c);

/// For a single-qubit Clifford feedforward C and a Pauli P on its target,
/// returns (Q, s) with Q = C P C^dag written as s times an unsigned Pauli.
/// "delay" and "i" act as the identity. Throws ConfigError for non-Clifford ops.
std::pair<PauliString, int> conjugate_twirl_through_clifford_ffwd(const FeedforwardRule &rule, const PauliString &p);

/// Replaces the classically controlled CNOT in measurement layer `layer_index`
/// by a fragment built from the Toffoli network with the measured control:
/// only unconditional CNOTs, Hadamards and classically controlled single-qubit
/// Cliffords remain.
DynamicCircuit decompose_cc_cnot(const DynamicCircuit &c, size_t layer_index);

/// Six-CNOT Clifford+T Toffoli network on (control0, control1, target), one
/// gate per layer.
std::vector<Layer> toffoli_network(int a, int c, int t);

}  // namespace dynpec
