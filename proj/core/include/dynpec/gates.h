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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynpec/clifford.h"

namespace dynpec {

using CMatrix = Eigen::MatrixXcd;

struct GateInfo {
    std::string name;
    size_t arity = 1;
    size_t num_params = 0;
    bool clifford = false;
};

/// Gate table. Names are lower case:
///   single-qubit: i x y z h s sdg t tdg sx sxdg rx ry rz (r* take one angle)
///   two-qubit:    cx cz swap
///   three-qubit:  ccx
///   named single-qubit Cliffords built from T conjugations, named in
///   circuit (time) order: tdg_x_t = T^dag, X, T and t_x_tdg_x = T, X, T^dag, X.
const GateInfo &gate_info(std::string_view name);
bool is_known_gate(std::string_view name);

/// Unitary on 2^arity dims; local qubit j is bit j of the basis index.
CMatrix gate_unitary(std::string_view name, std::span<const double> params = {});

/// Tableau of a Clifford gate on its own qubits. Empty for non-Clifford gates.
std::optional<CliffordOp> gate_clifford(std::string_view name);

/// Recovers the Clifford tableau of a unitary (up to global phase) on at
/// most 4 qubits. Throws std::invalid_argument if the unitary is not Clifford.
CliffordOp clifford_from_unitary(const CMatrix &u, double tol = 1e-9);

/// Dense matrix of a Pauli string (qubit j = bit j of the basis index).
CMatrix pauli_matrix(const PauliString &p);

}  // namespace dynpec
