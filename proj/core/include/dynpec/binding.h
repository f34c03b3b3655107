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
#include <string>
#include <vector>

#include "dynpec/noise_model.h"
#include "dynpec/pauli.h"

namespace dynpec {

/// exp(-i angle/2 P) applied on the layer's qubits before its Pauli noise.
struct CoherentTerm {
    PauliString pauli;  // n-qubit, global
    double angle = 0;
};

/// Assignment error of one qubit's readout: p10 = P(record 1 | outcome 0),
/// p01 = P(record 0 | outcome 1). Only the recorded bit changes.
struct ReadoutError {
    double p01 = 0;
    double p10 = 0;
};

/// Planted noise used by both simulators.
///
/// Layer noise acts immediately before the labelled layer. Delay noise with
/// tag "ff_latency" acts right after the projectors of every measurement layer
/// carrying feedforward (or conditional delays); explicit delay layers use
/// their own tag. The discriminator flips the control-wire bit with
/// probability r; feedforward and the recorded bit both see the flipped value.
struct NoiseBinding {
    std::map<std::string, NoiseModel, std::less<>> layers;
    std::map<std::string, NoiseModel, std::less<>> delays;
    std::map<std::string, std::vector<CoherentTerm>, std::less<>> coherent;
    std::map<int, ReadoutError> readout;
    std::map<int, double> init_flip;
    double discriminator = 0;
    /// When set, a labelled PEC layer without a model is an error.
    bool strict = false;

    bool has_coherent() const;
    const NoiseModel *layer_model(std::string_view label) const;
    const NoiseModel *delay_model(std::string_view tag) const;
    ReadoutError readout_of(int qubit) const;

    void validate(int num_qubits) const;
    nlohmann::json to_json() const;
    static NoiseBinding from_json(const nlohmann::json &doc);
};

}  // namespace dynpec
