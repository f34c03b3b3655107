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
#include <string_view>
#include <utility>
#include <vector>

#include "dynpec/pauli.h"
#include "dynpec/rng.h"

namespace dynpec {

/// Primitive gates every Clifford in the gate table is lowered to.
enum class PrimOp : uint8_t { H, S, CX, X, Y, Z };

struct Prim {
    PrimOp op;
    int a;
    int b = -1;
};

/// Exact (sign-correct) lowering of a named Clifford gate on `qubits` into
/// H, S, CX and Pauli primitives. Throws ConfigError for non-Clifford gates.
std::vector<Prim> lower_clifford_gate(std::string_view name, const std::vector<int> &qubits);

/// Aaronson-Gottesman stabilizer tableau on at most 64 qubits.
class Tableau {
   public:
    explicit Tableau(int num_qubits);

    int num_qubits() const { return n_; }

    void h(int q);
    void s(int q);
    void cx(int c, int t);
    void x(int q);
    void y(int q);
    void z(int q);
    void apply(const Prim &p);
    void apply(const std::vector<Prim> &ps) {
        for (const auto &p : ps) apply(p);
    }
    /// Applies an n-qubit Pauli (phase ignored).
    void apply_pauli(uint64_t x_mask, uint64_t z_mask);

    /// Z-basis measurement of qubit q. A random outcome is drawn from `rng`,
    /// or forced to 0 when `rng` is null. Returns (outcome, was_random).
    std::pair<int, bool> measure(int q, Rng *rng);
    /// +1 / -1 if Z_q is determined, 0 otherwise. Does not change the state.
    int peek_z(int q) const;
    /// Stabilizer generator i with its sign.
    PauliString stabilizer(int i) const;

   private:
    struct Row {
        uint64_t x = 0, z = 0;
        bool r = false;
    };
    /// row h <- row i * row h.
    static void rowsum(Row &h, const Row &i);

    int n_;
    std::vector<Row> rows_;  // n destabilizers, then n stabilizers
};

}  // namespace dynpec
