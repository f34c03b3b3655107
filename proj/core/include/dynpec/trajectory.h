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
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "dynpec/binding.h"
#include "dynpec/circuit.h"

namespace dynpec {

/// One shot: recorded classical bits (after discriminator and assignment
/// errors, before any twirl correction) and the terminal Z-basis outcome of
/// every qubit (bit q = qubit q).
struct ShotRecord {
    uint64_t clbits = 0;
    uint64_t terminal = 0;
};

struct ShotBatch {
    int num_qubits = 0;
    int num_clbits = 0;
    std::vector<ShotRecord> shots;

    size_t size() const { return shots.size(); }
    /// Bitstring -> count. A key lists clbit 0 first, then a space, then
    /// terminal qubit 0 first.
    std::map<std::string, uint64_t> counts() const;
    nlohmann::json counts_json() const;
};

std::string outcome_key(uint64_t clbits, int num_clbits, uint64_t terminal, int num_qubits);

struct TrajectoryOptions {
    size_t workers = 1;
    /// Shots per independently seeded block; fixed so results do not depend
    /// on the worker count.
    size_t block_shots = 1024;
    /// Use per-shot tableau simulation even when the Pauli-frame path applies.
    bool force_tableau = false;
};

/// Stabilizer Monte-Carlo execution. Circuits whose classically controlled
/// operations are all Paulis run as bit-sliced Pauli frames around one
/// noiseless reference; others fall back to one tableau per shot. Every
/// qubit is measured in the Z basis at the end. Deterministic in (seed,
/// shots, block_shots). Throws ConfigError for non-Clifford gates or coherent
/// noise.
ShotBatch run_trajectories(const DynamicCircuit &c, const NoiseBinding &binding, size_t shots, uint64_t seed,
                           const TrajectoryOptions &options = {});

/// True when run_trajectories can use the Pauli-frame path for `c`.
bool frame_simulable(const DynamicCircuit &c);

}  // namespace dynpec
