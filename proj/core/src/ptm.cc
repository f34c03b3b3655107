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

#include "dynpec/ptm.h"

#include <iomanip>
#include <set>

#include "dynpec/error.h"
#include "dynpec/passes.h"

namespace dynpec {

std::vector<PauliString> ptm_basis(int num_qubits, const std::vector<int> &ancillas) {
    if (num_qubits < 1 || num_qubits > kPtmMaxQubits) {
        throw ConfigError("transfer matrices are limited to " + std::to_string(kPtmMaxQubits) + " qubits");
    }
    std::vector<PauliString> first, second;
    for (auto &p : all_paulis(num_qubits)) {
        bool diag = true;
        for (int a : ancillas) {
            char c = p.get(a);
            if (c == 'X' || c == 'Y') diag = false;
        }
        (diag ? first : second).push_back(std::move(p));
    }
    first.insert(first.end(), second.begin(), second.end());
    return first;
}

Eigen::MatrixXd ptm_of(const std::function<CMatrix(const CMatrix &)> &channel, const std::vector<PauliString> &basis) {
    if (basis.empty()) throw ConfigError("empty transfer-matrix basis");
    const size_t n = basis[0].num_qubits();
    if (n > kPtmMaxQubits) throw ConfigError("transfer matrices are limited to 4 qubits");
    const double norm = 1.0 / static_cast<double>(size_t{1} << n);
    Eigen::MatrixXd r(basis.size(), basis.size());
    for (size_t b = 0; b < basis.size(); b++) {
        CMatrix out = channel(pauli_matrix(basis[b]));
        for (size_t a = 0; a < basis.size(); a++) r(a, b) = norm * pauli_trace(basis[a], out).real();
    }
    return r;
}

Eigen::MatrixXd ptm_of(const DynamicCircuit &c, const NoiseBinding &binding, const std::vector<PauliString> &basis,
                       const DenseOptions &options) {
    DenseOptions opts = options;
    opts.keep_records = false;
    NoiseBinding b = binding;
    b.init_flip.clear();
    return ptm_of([&](const CMatrix &in) { return run_dense(c, b, in, opts).state(); }, basis);
}

Eigen::MatrixXd twirl_averaged_ptm(const DynamicCircuit &c, size_t layer, const NoiseBinding &binding,
                                   const std::vector<PauliString> &basis) {
    if (layer >= c.layers().size()) throw ConfigError("layer index out of range");
    auto support = layer_support(c.layers()[layer]);
    const size_t k = support.size();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    const uint64_t count = uint64_t{1} << (2 * k);
    for (uint64_t idx = 0; idx < count; idx++) {
        PauliString p(c.num_qubits());
        for (size_t j = 0; j < k; j++) p.set(support[j], "IXYZ"[(idx >> (2 * j)) & 3]);
        auto [tw, rec] = apply_insertions(c, {LayerInsertion{layer, p, PauliString()}});
        acc += ptm_of(tw, binding, basis);
    }
    return acc / static_cast<double>(count);
}

void write_ptm_csv(std::ostream &out, const Eigen::MatrixXd &r, const std::vector<PauliString> &basis) {
    out << "out\\in";
    for (const auto &p : basis) out << ',' << p.label();
    out << '\n';
    out << std::setprecision(17);
    for (size_t a = 0; a < basis.size(); a++) {
        out << basis[a].label();
        for (size_t b = 0; b < basis.size(); b++) out << ',' << r(a, b);
        out << '\n';
    }
}

}  // namespace dynpec
