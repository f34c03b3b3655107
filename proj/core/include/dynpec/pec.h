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
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"
#include "dynpec/learning.h"
#include "dynpec/noise_model.h"
#include "dynpec/passes.h"
#include "dynpec/trajectory.h"

namespace dynpec {

/// Which labelled layers get mitigation insertions.
enum class Arm { Full, UnitaryOnly, Raw };

std::string_view to_string(Arm arm);
Arm arm_from_string(std::string_view name);

struct MitigationPlan {
    DynamicCircuit circuit;
    /// Learned models by layer label; qubits are global.
    std::map<std::string, NoiseModel, std::less<>> models;
    Arm arm = Arm::Full;
    size_t instances = 1000;
    size_t shots = 100;
    uint64_t seed = 0;
    size_t workers = 1;
    size_t bootstrap = 1000;

    /// Indices of the layers that receive mitigation under `arm`.
    std::vector<size_t> mitigated_layers() const;
    /// Product of the per-layer overheads over mitigated layers.
    double gamma_total() const;
    /// Throws ConfigError when a mitigated layer has no model.
    void validate() const;
};

/// One randomized instance: inserted inverse Paulis (n-qubit, one per
/// mitigated layer), their sign product, the twirl bookkeeping and the shots.
struct MitigationSample {
    size_t index = 0;
    std::vector<size_t> layers;
    std::vector<PauliString> insertions;
    int sign = 1;
    TwirlRecord record;
    ShotBatch shots;
};

/// Instance `index` of a plan: every labelled layer twirled, inverse samples
/// merged into the twirls of mitigated layers. Deterministic in (seed, index).
std::pair<DynamicCircuit, MitigationSample> generate_mitigation_instance(const MitigationPlan &plan, size_t index);

/// Generates and executes all instances on the trajectory backend.
std::vector<MitigationSample> run_mitigation(const MitigationPlan &plan, const NoiseBinding &truth);

struct Estimate {
    std::string observable;
    double value = 0;
    double stderr_ = 0;
    double gamma_total = 1;
    size_t effective_samples = 0;
    double accept_rate = 1;
    /// Set for post-selected estimates, which are diagnostics only.
    bool diagnostic = false;

    nlohmann::json to_json() const;
};

/// Keeps the shots whose recorded bits (after twirl-flip correction) match
/// `pattern` on `clbits` (bit j of pattern for clbits[j]).
struct PostSelection {
    std::vector<int> clbits;
    uint64_t pattern = 0;

    /// Parses "01..." with character j for clbits[j].
    static PostSelection parse(const std::vector<int> &clbits, std::string_view pattern);
    bool accepts(uint64_t corrected) const;
};

/// Filters every sample's shots; returns the kept samples and the accept
/// rate over all shots. Throws ConfigError when clbits is empty or out of range.
std::pair<std::vector<MitigationSample>, double> post_select(const std::vector<MitigationSample> &samples,
                                                             const PostSelection &selection, int num_clbits);

/// gamma_total times the mean over instances of sign * (per-instance
/// expectation with twirl flips and software recovery). Standard error from
/// `bootstrap` instance resamples. Instances without shots are skipped.
Estimate estimate_observable(const std::vector<MitigationSample> &samples, const PauliString &observable,
                             const std::vector<FeedforwardRule> &recovery, double gamma_total, size_t bootstrap = 1000,
                             uint64_t seed = 0);

/// Exact estimator of an arm: the dense oracle with every mitigated layer's
/// inverse channel applied in place of sampling.
double exact_mitigated_expectation(const MitigationPlan &plan, const NoiseBinding &truth, const PauliString &observable,
                                   const std::vector<FeedforwardRule> &recovery = {});

/// Same quantity by explicit enumeration of every signed inverse branch
/// (2^(sum of generator counts) dense runs); for cross-checks on small plans.
double enumerated_mitigated_expectation(const MitigationPlan &plan, const NoiseBinding &truth,
                                        const PauliString &observable, const std::vector<FeedforwardRule> &recovery = {});

/// Noiseless dense expectation of the plan's circuit.
double ideal_expectation(const DynamicCircuit &c, const PauliString &observable,
                         const std::vector<FeedforwardRule> &recovery = {});

struct ValidationConfig {
    LearningConfig learning;
    /// Cap on the total number of circuits; 0 means no cap.
    size_t max_circuits = 0;
};

struct ValidationResult {
    std::vector<size_t> instances;  // per depth
    std::vector<DecayData> mitigated;
    std::vector<DecayData> unmitigated;
    std::vector<FidelityEstimate> fit_mitigated;
    std::vector<FidelityEstimate> fit_unmitigated;
};

/// Learning-style circuits with and without a sampled inverse of `model`
/// merged into every twirl. Mitigated instance counts grow as
/// gamma^(2 k period) from cfg.learning.instances; exceeding max_circuits
/// throws BudgetError before anything runs.
ValidationResult validate_mitigation(const DynamicCircuit &c, std::string_view label, const NoiseBinding &truth,
                                     const NoiseModel &model, const ValidationConfig &cfg,
                                     const Topology *topology = nullptr);

}  // namespace dynpec
