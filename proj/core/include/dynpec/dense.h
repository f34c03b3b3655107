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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"
#include "dynpec/gates.h"

namespace dynpec {

inline constexpr int kDenseMaxQubits = 7;

struct DenseOptions {
    /// Keep recorded bits in the branch keys. When false, branches that differ
    /// only in bits no later operation reads are merged.
    bool keep_records = true;
    /// Exact inverse channels applied immediately before the noise of the
    /// layers with these labels (exhaustive PEC).
    std::map<std::string, NoiseModel, std::less<>> inverse;
    /// Skip all planted noise, readout error, discriminator error and initial
    /// flips (ideal reference runs).
    bool ideal = false;
};

/// One classical history: control-register bits (after discriminator error),
/// recorded bits (after assignment error) and the unnormalized state; its
/// trace is the branch probability.
struct DenseBranch {
    uint64_t ctrl = 0;
    uint64_t rec = 0;
    CMatrix rho;

    double probability() const { return rho.trace().real(); }
};

struct DenseResult {
    int num_qubits = 0;
    int num_clbits = 0;
    std::vector<DenseBranch> branches;

    /// Sum over branches.
    CMatrix state() const;
    /// Distribution of recorded bits.
    std::map<uint64_t, double> record_distribution() const;
    /// Joint distribution of (recorded bits, terminal Z-basis outcomes of all
    /// qubits), terminal readout errors from `binding` applied.
    std::map<std::pair<uint64_t, uint64_t>, double> outcome_distribution(const NoiseBinding *binding = nullptr) const;
    /// sum_b sign_b Tr(O rho_b), where sign_b is the software-recovery sign of
    /// `recovery` evaluated on the branch's recorded bits xor `flips`.
    double expectation(const PauliString &observable, const std::vector<FeedforwardRule> &recovery = {},
                       uint64_t flips = 0) const;
    /// Mass of branches whose recorded bits (xor flips) match `pattern` on
    /// `clbits`, and the expectation restricted to them (unnormalized).
    std::pair<double, double> post_selected(const PauliString &observable, const std::vector<int> &clbits,
                                            uint64_t pattern, uint64_t flips = 0) const;
};

/// Product state with qubit q flipped to |1> with probability flip[q].
CMatrix initial_state(int num_qubits, const std::map<int, double> &flip = {});

/// Exact evolution. Noise placement follows NoiseBinding. Dephase layers are
/// averaged exactly. Input defaults to |0...0> with the binding's initial flips.
DenseResult run_dense(const DynamicCircuit &c, const NoiseBinding &binding, const std::optional<CMatrix> &input = {},
                      const DenseOptions &options = {});

/// rho -> U rho U^dag for a gate on `qubits` (local qubit j = qubits[j]).
void apply_gate(CMatrix &rho, const CMatrix &u, const std::vector<int> &qubits);
/// Applies a noise model (local generators on model.qubits()) to an n-qubit state.
void apply_noise(CMatrix &rho, const NoiseModel &model);
void apply_inverse_noise(CMatrix &rho, const NoiseModel &model);
/// Tr(P rho) for an n-qubit Pauli with phase.
std::complex<double> pauli_trace(const PauliString &p, const CMatrix &rho);

}  // namespace dynpec
