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

#include <Eigen/Dense>
#include <functional>
#include <ostream>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"
#include "dynpec/dense.h"

namespace dynpec {

inline constexpr int kPtmMaxQubits = 4;

/// Pauli basis for transfer matrices. Paulis whose components on `ancillas`
/// are I or Z come first, then the rest; each group in label order. With the
/// last of two qubits as ancilla this is II, IZ, XI, XZ, YI, YZ, ZI, ZZ, IX,
/// IY, XX, ...
std::vector<PauliString> ptm_basis(int num_qubits, const std::vector<int> &ancillas = {});

/// R[a][b] = Tr(P_a chi(P_b)) / 2^n in the given basis.
Eigen::MatrixXd ptm_of(const std::function<CMatrix(const CMatrix &)> &channel, const std::vector<PauliString> &basis);

/// Transfer matrix of the quantum channel a circuit implements (classical
/// outcomes summed over).
Eigen::MatrixXd ptm_of(const DynamicCircuit &c, const NoiseBinding &binding, const std::vector<PauliString> &basis,
                       const DenseOptions &options = {});

/// Average of ptm_of over all 4^|support| twirls of layer `layer`.
Eigen::MatrixXd twirl_averaged_ptm(const DynamicCircuit &c, size_t layer, const NoiseBinding &binding,
                                   const std::vector<PauliString> &basis);

/// CSV with a header row of basis labels and one labelled row per output Pauli.
void write_ptm_csv(std::ostream &out, const Eigen::MatrixXd &r, const std::vector<PauliString> &basis);

}  // namespace dynpec
