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

#include <span>
#include <vector>

#include "dynpec/pauli.h"
#include "dynpec/rng.h"

namespace dynpec {

/// A Clifford unitary C represented by its conjugation action: the images
/// C X_j C^dagger and C Z_j C^dagger of every single-qubit generator, each a
/// Hermitian Pauli string carrying a +/- sign.
class CliffordOp {
   public:
    CliffordOp() = default;
    static CliffordOp identity(size_t num_qubits);
    /// Builds from explicit generator images; throws if they do not satisfy
    /// the symplectic commutation relations.
    static CliffordOp from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images);

    static CliffordOp h(size_t n, size_t q);
    static CliffordOp s(size_t n, size_t q);
    static CliffordOp sdg(size_t n, size_t q);
    static CliffordOp pauli(size_t n, size_t q, char p);
    static CliffordOp cx(size_t n, size_t control, size_t target);
    static CliffordOp cz(size_t n, size_t a, size_t b);
    static CliffordOp swap(size_t n, size_t a, size_t b);
    /// Product of `depth` random gates drawn from {H, S, CX}.
    static CliffordOp random(size_t n, Rng &rng, size_t depth = 0);

    size_t num_qubits() const { return x_images_.size(); }
    const PauliString &x_image(size_t q) const { return x_images_[q]; }
    const PauliString &z_image(size_t q) const { return z_images_[q]; }

    /// C p C^dagger with exact phase.
    PauliString conjugate(const PauliString &p) const;
    /// Clifford that applies `this` first and then `next`.
    CliffordOp then(const CliffordOp &next) const;
    CliffordOp inverse() const;
    /// This Clifford acting on `qubits` of an n-qubit register.
    CliffordOp embed(std::span<const int> qubits, size_t num_qubits) const;

    bool is_identity() const;
    /// Checks the symplectic relations of the stored images.
    bool is_valid() const;

    bool operator==(const CliffordOp &other) const = default;

   private:
    std::vector<PauliString> x_images_;
    std::vector<PauliString> z_images_;
};

/// Free-function form of CliffordOp::conjugate.
PauliString conjugate(const CliffordOp &c, const PauliString &p);

}  // namespace dynpec
