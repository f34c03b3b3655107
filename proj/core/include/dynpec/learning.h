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
#include <ostream>
#include <string>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"
#include "dynpec/decay_fit.h"
#include "dynpec/noise_model.h"
#include "dynpec/passes.h"
#include "dynpec/topology.h"

namespace dynpec {

struct LearningConfig {
    std::vector<int> depths = {0, 1, 2, 4, 8, 16};
    size_t instances = 256;
    size_t shots = 128;
    uint64_t seed = 0;
    size_t workers = 1;
    /// Instance-level bootstrap resamples for the lambda stderr; 0 disables.
    size_t bootstrap = 200;

    void validate() const;
    static LearningConfig from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
};

/// Everything needed to generate and interpret the benchmarking circuits of
/// one PEC layer. Circuits act on a local register holding only the layer
/// support (local qubit j = spec.qubits[j]); measured qubit j writes local
/// clbit j.
struct LearningPlan {
    LayerSpec spec;
    Layer layer;  // local indices, feedforward replaced by delays
    int num_clbits = 0;
    FidelityBasisSet bases;
    GeneratorSet generators;
    /// Product preparation/measurement settings; measured qubits always Z.
    std::vector<PauliString> settings;
    /// Index into `settings` used to estimate each basis.
    std::vector<size_t> setting_of;
    /// Layer applications per depth unit: smallest L with U^L mapping every
    /// Pauli to plus or minus itself (1 for measurement layers).
    int period = 1;
    /// Sign of U^L q U^-L for each basis.
    std::vector<int> period_sign;
    /// Rows are sums of commutation rows over each basis' orbit under U.
    Eigen::MatrixXd M;

    int num_qubits() const { return static_cast<int>(spec.qubits.size()); }
};

/// Builds the plan for the layer labelled `label` in `c`. A topology entry
/// with the same name, when given, supplies the support and generators.
LearningPlan plan_learning(const DynamicCircuit &c, std::string_view label, const Topology *topology = nullptr);

/// Noise binding restricted to a plan's local register: the layer's own model
/// and coherent terms, the generators of delay models that lie inside the
/// support, and per-qubit readout and initial flips.
NoiseBinding localize_binding(const NoiseBinding &binding, const LearningPlan &plan);

/// One benchmarking circuit: basis preparation, `depth * period` twirled
/// applications of the layer (each followed by dephasing of measured qubits),
/// basis change. When `mitigation` is given, a sample of its inverse is merged
/// into every twirl; the product of the drawn signs is returned in `sign`.
struct LearningCircuit {
    DynamicCircuit circuit;
    TwirlRecord record;
    int sign = 1;
    /// Terminal bits flipped by the readout twirl; undo before evaluating parities.
    uint64_t readout_flips = 0;
};
LearningCircuit learning_circuit(const LearningPlan &plan, int depth, size_t setting, Rng &rng,
                                 const NoiseModel *mitigation = nullptr);

/// Per-instance fidelity estimates: values[d][q][i] is the mean terminal
/// eigenvalue of basis q in instance i at depth index d, already multiplied
/// by the period sign and, when mitigating, by gamma^depth and the instance
/// sign.
struct DecaySamples {
    std::vector<int> depths;
    std::vector<std::vector<std::vector<double>>> values;
};

/// Runs the benchmarking circuits on the trajectory backend. `instances`
/// overrides the per-depth instance count (one entry per depth).
DecaySamples sample_decays(const LearningPlan &plan, const NoiseBinding &local_binding, const LearningConfig &cfg,
                           const NoiseModel *mitigation = nullptr, const std::vector<size_t> &instances = {});

/// Means and standard errors over instances for every basis.
std::vector<DecayData> summarize(const LearningPlan &plan, const DecaySamples &samples);

/// -log(f)/2 solved against the plan's M by NNLS.
NoiseModel solve_lambdas(const LearningPlan &plan, const std::vector<double> &fidelities, double *residual = nullptr);

/// Exact twirl-averaged fidelities of the layer from the dense oracle, one
/// per basis of the plan, each raised to the plan period with its sign.
std::vector<double> exact_fidelities(const LearningPlan &plan, const NoiseBinding &local_binding);

struct LearnedModel {
    std::string layer;
    NoiseModel model;
    FidelityBasisSet bases;
    std::vector<DecayData> decays;
    std::vector<FidelityEstimate> fits;
    Eigen::MatrixXd M;
    double residual = 0;
    std::vector<double> lambda_stderr;
    uint64_t seed = 0;

    nlohmann::json report() const;
    static LearnedModel from_report(const nlohmann::json &j);
};

/// The full pipeline: sample, fit every decay, solve NNLS, bootstrap over
/// instances. `truth` is the simulated device.
LearnedModel learn_layer(const DynamicCircuit &c, std::string_view label, const NoiseBinding &truth,
                         const LearningConfig &cfg, const Topology *topology = nullptr);

/// Learning from decay samples already collected for `plan`.
LearnedModel learn_from_samples(const LearningPlan &plan, const DecaySamples &samples, const LearningConfig &cfg);

/// CSV with columns depth, basis, mean, stderr.
void write_decay_csv(std::ostream &out, const std::vector<DecayData> &decays);

}  // namespace dynpec
