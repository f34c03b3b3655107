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

#include <cstdint>
#include <vector>

#include "dynpec/circuit.h"
#include "dynpec/pauli.h"

namespace dynpec {

/// (-1)^{<C, O>_sp} for the product C of the Pauli recovery operations in
/// `rules` whose trigger matches `bits`. Throws ConfigError for non-Pauli
/// recoveries.
int software_recovery_sign(const std::vector<FeedforwardRule> &rules, uint64_t bits, const PauliString &observable);

/// Measurement settings: the single-qubit basis rotation that maps the
/// eigenbasis of X, Y or Z onto Z. Appends the layers for setting `basis`
/// (one character per qubit, I treated as Z) to a circuit.
void append_basis_change(DynamicCircuit &c, const PauliString &basis);
/// Prepares the +1 eigenstate of each component of `basis` from |0>.
void append_basis_prep(DynamicCircuit &c, const PauliString &basis);

/// Eigenvalue (+1/-1) of an unsigned Z-type product on the qubits in
/// `support_mask` given terminal bits.
inline int parity_sign(uint64_t bits, uint64_t support_mask) {
    return (__builtin_popcountll(bits & support_mask) & 1) ? -1 : 1;
}

/// Mean of per-shot eigenvalues of a Pauli observable measured by terminal
/// Z readout after its basis change: each shot contributes
/// parity(terminal bits on the support) * recovery sign(recorded ^ flips).
struct ShotBatch;
double expectation(const ShotBatch &batch, const PauliString &observable, const std::vector<FeedforwardRule> &recovery = {},
                   uint64_t flips = 0);

}  // namespace dynpec
