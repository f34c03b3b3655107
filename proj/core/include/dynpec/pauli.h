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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dynpec {

/// An n-qubit Pauli operator i^phase * (P_0 (x) P_1 (x) ... (x) P_{n-1}) with
/// each P_j in {I, X, Y, Z} (Y Hermitian). Bits are packed 64 per word.
///
/// Label convention, used everywhere in the library: the leftmost character
/// of a label acts on qubit 0. "XZ" is X on qubit 0 and Z on qubit 1.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t num_qubits);

    /// Accepts an optional sign prefix ("+", "-", "i", "+i", "-i") followed
    /// by one character from {I, X, Y, Z} per qubit.
    static PauliString from_label(std::string_view label);
    /// Single-qubit Pauli `p` placed on `qubit` of an n-qubit register.
    static PauliString single(size_t num_qubits, size_t qubit, char p);
    static PauliString from_bits(size_t num_qubits, uint64_t x_bits, uint64_t z_bits, uint8_t phase = 0);

    std::string label() const;

    size_t num_qubits() const { return n_; }
    uint8_t phase() const { return phase_; }
    void set_phase(uint8_t phase) { phase_ = phase & 3; }
    /// +1 / -1 for Hermitian strings; throws if the phase is imaginary.
    int sign() const;

    bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
    void set_x(size_t q, bool v);
    void set_z(size_t q, bool v);
    char get(size_t q) const;
    void set(size_t q, char p);

    std::span<const uint64_t> x_words() const { return xs_; }
    std::span<const uint64_t> z_words() const { return zs_; }
    /// Low 64 bits of x / z; convenient for small registers.
    uint64_t x_mask() const { return xs_.empty() ? 0 : xs_[0]; }
    uint64_t z_mask() const { return zs_.empty() ? 0 : zs_[0]; }

    bool is_identity() const;  // ignores phase
    size_t weight() const;
    std::vector<size_t> support() const;

    /// Same operator without the phase.
    PauliString unsigned_part() const;

    bool operator==(const PauliString &other) const = default;
    /// Total order on (n, x, z, phase); used for ordered containers.
    bool operator<(const PauliString &other) const;
    /// Equality of the Pauli part, ignoring phase.
    bool same_pauli(const PauliString &other) const { return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_; }

   private:
    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    uint8_t phase_ = 0;
};

/// 1 iff p and q anticommute.
int symplectic_product(const PauliString &p, const PauliString &q);
inline bool commutes(const PauliString &p, const PauliString &q) { return symplectic_product(p, q) == 0; }

/// Operator product p*q with exact phase.
PauliString multiply(const PauliString &p, const PauliString &q);
inline PauliString operator*(const PauliString &p, const PauliString &q) { return multiply(p, q); }

/// Places a Pauli on `qubits` (local index j -> global qubits[j]) of an
/// n-qubit register.
PauliString embed(const PauliString &local, std::span<const int> qubits, size_t num_qubits);
/// Restriction of a global Pauli to `qubits`, in the order given. Phase is kept.
PauliString restrict_to(const PauliString &global, std::span<const int> qubits);

/// All 4^n Paulis on n qubits in lexicographic label order with I < X < Y < Z.
std::vector<PauliString> all_paulis(size_t num_qubits);

}  // namespace dynpec

template <>
struct std::hash<dynpec::PauliString> {
    size_t operator()(const dynpec::PauliString &p) const noexcept;
};
