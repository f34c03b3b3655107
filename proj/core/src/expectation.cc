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

#include "dynpec/expectation.h"

#include "dynpec/error.h"
#include "dynpec/trajectory.h"

namespace dynpec {

int software_recovery_sign(const std::vector<FeedforwardRule> &rules, uint64_t bits, const PauliString &observable) {
    int sign = 1;
    for (const auto &r : rules) {
        if (static_cast<int>((bits >> r.clbit) & 1) != r.value) continue;
        if (r.op == "i" || r.op == "delay") continue;
        if (r.is_two_qubit() || (r.op != "x" && r.op != "y" && r.op != "z")) {
            throw ConfigError("software recovery must be a single-qubit Pauli, got '" + r.op + "'");
        }
        if (r.target < 0 || static_cast<size_t>(r.target) >= observable.num_qubits()) {
            throw ConfigError("recovery target out of range");
        }
        char p = r.op[0] - 'a' + 'A';
        if (!commutes(PauliString::single(observable.num_qubits(), r.target, p), observable)) sign = -sign;
    }
    return sign;
}

void append_basis_change(DynamicCircuit &c, const PauliString &basis) {
    std::vector<Gate> sdg, h;
    for (size_t q = 0; q < basis.num_qubits(); q++) {
        char p = basis.get(q);
        if (p == 'Y') sdg.push_back(Gate{"sdg", {static_cast<int>(q)}, {}});
        if (p == 'X' || p == 'Y') h.push_back(Gate{"h", {static_cast<int>(q)}, {}});
    }
    if (!sdg.empty()) c.append(Layer::unitary(std::move(sdg)));
    if (!h.empty()) c.append(Layer::unitary(std::move(h)));
}

void append_basis_prep(DynamicCircuit &c, const PauliString &basis) {
    std::vector<Gate> h, s;
    for (size_t q = 0; q < basis.num_qubits(); q++) {
        char p = basis.get(q);
        if (p == 'X' || p == 'Y') h.push_back(Gate{"h", {static_cast<int>(q)}, {}});
        if (p == 'Y') s.push_back(Gate{"s", {static_cast<int>(q)}, {}});
    }
    if (!h.empty()) c.append(Layer::unitary(std::move(h)));
    if (!s.empty()) c.append(Layer::unitary(std::move(s)));
}

double expectation(const ShotBatch &batch, const PauliString &observable, const std::vector<FeedforwardRule> &recovery,
                   uint64_t flips) {
    if (batch.shots.empty()) throw NumericalError("no shots to average");
    if (static_cast<int>(observable.num_qubits()) != batch.num_qubits) {
        throw ConfigError("observable size does not match the circuit");
    }
    const uint64_t mask = observable.x_mask() | observable.z_mask();
    const int base = observable.sign();
    long long total = 0;
    for (const auto &s : batch.shots) {
        int v = base * parity_sign(s.terminal, mask);
        if (!recovery.empty()) v *= software_recovery_sign(recovery, s.clbits ^ flips, observable);
        total += v;
    }
    return static_cast<double>(total) / static_cast<double>(batch.shots.size());
}

}  // namespace dynpec
