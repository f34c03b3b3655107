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
#include <nlohmann/json.hpp>
#include <utility>
#include <vector>

#include "dynpec/pauli.h"
#include "dynpec/rng.h"

namespace dynpec {

/// Rates below this are treated as exact zeros for sampling and overheads.
inline constexpr double kLambdaZero = 1e-12;

/// Ordered generator set on a qubit support. Generators are local to
/// `qubits`: character j of a generator label acts on global qubit qubits[j].
struct GeneratorSet {
    std::vector<int> qubits;
    std::vector<PauliString> generators;

    GeneratorSet() = default;
    GeneratorSet(std::vector<int> qubits, std::vector<PauliString> generators);
    static GeneratorSet from_labels(std::vector<int> qubits, const std::vector<std::string> &labels);

    size_t size() const { return generators.size(); }
    size_t num_qubits() const { return qubits.size(); }
    /// Checks: generators sized to the support, unsigned, non-identity, unique.
    void validate() const;
    bool operator==(const GeneratorSet &) const = default;
};

/// Ordered set of Pauli fidelity bases, local to a qubit support.
struct FidelityBasisSet {
    std::vector<int> qubits;
    std::vector<PauliString> bases;

    void validate() const;
    size_t size() const { return bases.size(); }
    bool operator==(const FidelityBasisSet &) const = default;
};

/// (1 + exp(-2 lambda)) / 2. Throws ConfigError for negative lambda.
double weight(double lambda);

/// Sparse Pauli-Lindblad channel prod_l (w_l id + (1 - w_l) P_l . P_l).
class NoiseModel {
   public:
    NoiseModel() = default;
    NoiseModel(GeneratorSet generators, std::vector<double> lambdas);
    static NoiseModel zero(GeneratorSet generators);

    const GeneratorSet &generator_set() const { return gens_; }
    const std::vector<int> &qubits() const { return gens_.qubits; }
    const std::vector<PauliString> &generators() const { return gens_.generators; }
    const std::vector<double> &lambdas() const { return lambdas_; }
    size_t size() const { return lambdas_.size(); }
    double weight(size_t l) const;

    double gamma() const;
    /// exp(-2 sum of lambdas over generators anticommuting with q); q local.
    double predict_fidelity(const PauliString &q) const;

    /// Same generators, rates multiplied by `factor` (>= 0).
    NoiseModel scaled(double factor) const;
    /// Lambda of a generator given by its local label; 0 if absent.
    double lambda_of(const PauliString &g) const;

    /// One draw from the channel: product of P_l, each included with
    /// probability 1 - w_l. Returned Pauli is local and unsigned.
    PauliString sample_forward(Rng &rng) const;
    /// One draw from the normalized inverse: same inclusion probabilities,
    /// each inclusion flips the sign. gamma * E[sign * P . P] is the inverse.
    std::pair<PauliString, int> sample_inverse(Rng &rng) const;

    /// Applies the channel to a density matrix on the model's own support
    /// (basis index bit j = local qubit j).
    Eigen::MatrixXcd apply_channel_dense(const Eigen::MatrixXcd &rho) const;
    /// Applies the exact signed inverse channel on the local support.
    Eigen::MatrixXcd apply_inverse_dense(const Eigen::MatrixXcd &rho) const;

    nlohmann::json to_json() const;
    static NoiseModel from_json(const nlohmann::json &j);

    bool operator==(const NoiseModel &) const = default;

   private:
    GeneratorSet gens_;
    std::vector<double> lambdas_;
};

/// Product channel of two models. Supports are merged (sorted); a generator
/// present in both gets the summed rate.
NoiseModel compose(const NoiseModel &a, const NoiseModel &b);

/// M[q][l] = symplectic_product(F_q, K_l). Both sets must share a support.
Eigen::MatrixXd build_M(const FidelityBasisSet &F, const GeneratorSet &K);

/// Conjugates every column/row pair of rho by the n-qubit Pauli p, i.e.
/// returns p rho p^dag, by index permutation. Basis index bit j = qubit j.
Eigen::MatrixXcd pauli_conjugate(const Eigen::MatrixXcd &rho, uint64_t x_mask, uint64_t z_mask);

}  // namespace dynpec
