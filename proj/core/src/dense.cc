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

#include "dynpec/dense.h"

#include <bit>
#include <cmath>

#include "dynpec/error.h"
#include "dynpec/expectation.h"

namespace dynpec {

namespace {

using cd = std::complex<double>;
using Key = std::pair<uint64_t, uint64_t>;
using Branches = std::map<Key, CMatrix>;

uint64_t spread_mask(const std::vector<int> &qubits, uint64_t local) {
    uint64_t out = 0;
    for (size_t j = 0; j < qubits.size(); j++) {
        if ((local >> j) & 1) out |= 1ULL << qubits[j];
    }
    return out;
}

std::pair<uint64_t, uint64_t> global_masks(const std::vector<int> &qubits, const PauliString &local) {
    return {spread_mask(qubits, local.x_mask()), spread_mask(qubits, local.z_mask())};
}

void dephase(CMatrix &rho, int q) {
    const Eigen::Index dim = rho.rows();
    const uint64_t bit = 1ULL << q;
    for (Eigen::Index c = 0; c < dim; c++) {
        for (Eigen::Index r = 0; r < dim; r++) {
            if (((r ^ c) & bit) != 0) rho(r, c) = 0;
        }
    }
}

void project(CMatrix &rho, int q, int outcome) {
    const Eigen::Index dim = rho.rows();
    const uint64_t bit = 1ULL << q;
    const uint64_t want = outcome ? bit : 0;
    for (Eigen::Index c = 0; c < dim; c++) {
        bool cz = (static_cast<uint64_t>(c) & bit) != want;
        for (Eigen::Index r = 0; r < dim; r++) {
            if (cz || (static_cast<uint64_t>(r) & bit) != want) rho(r, c) = 0;
        }
    }
}

void merge_into(Branches &dst, Key key, CMatrix &&rho) {
    auto it = dst.find(key);
    if (it == dst.end()) {
        dst.emplace(key, std::move(rho));
    } else {
        it->second += rho;
    }
}

/// Bits read by rules at or after layer i, before being overwritten.
std::vector<uint64_t> live_masks(const DynamicCircuit &c) {
    const auto &layers = c.layers();
    std::vector<uint64_t> live(layers.size() + 1, 0);
    for (size_t i = layers.size(); i-- > 0;) {
        uint64_t m = live[i + 1];
        const Layer &l = layers[i];
        if (l.kind == LayerKind::Measurement) {
            for (int b : l.clbits) m &= ~(1ULL << b);
        }
        for (const auto &r : l.feedforward) m |= 1ULL << r.clbit;
        live[i] = m;
    }
    return live;
}

}  // namespace

void apply_gate(CMatrix &rho, const CMatrix &u, const std::vector<int> &qubits) {
    const size_t k = qubits.size();
    const size_t sub = size_t{1} << k;
    const Eigen::Index dim = rho.rows();
    uint64_t mask = 0;
    std::vector<uint64_t> offs(sub);
    for (size_t j = 0; j < sub; j++) offs[j] = spread_mask(qubits, j);
    for (int q : qubits) mask |= 1ULL << q;
    std::vector<cd> v(sub), w(sub);
    // Left multiplication: act on row indices of every column.
    for (Eigen::Index c = 0; c < dim; c++) {
        for (uint64_t base = 0; base < static_cast<uint64_t>(dim); base++) {
            if (base & mask) continue;
            for (size_t j = 0; j < sub; j++) v[j] = rho(base | offs[j], c);
            for (size_t a = 0; a < sub; a++) {
                cd s = 0;
                for (size_t b = 0; b < sub; b++) s += u(a, b) * v[b];
                w[a] = s;
            }
            for (size_t j = 0; j < sub; j++) rho(base | offs[j], c) = w[j];
        }
    }
    // Right multiplication by U^dag: act on column indices of every row.
    for (uint64_t base = 0; base < static_cast<uint64_t>(dim); base++) {
        if (base & mask) continue;
        for (Eigen::Index r = 0; r < dim; r++) {
            for (size_t j = 0; j < sub; j++) v[j] = rho(r, base | offs[j]);
            for (size_t a = 0; a < sub; a++) {
                cd s = 0;
                for (size_t b = 0; b < sub; b++) s += v[b] * std::conj(u(a, b));
                w[a] = s;
            }
            for (size_t j = 0; j < sub; j++) rho(r, base | offs[j]) = w[j];
        }
    }
}

void apply_noise(CMatrix &rho, const NoiseModel &model) {
    for (size_t l = 0; l < model.size(); l++) {
        if (model.lambdas()[l] == 0) continue;
        double w = model.weight(l);
        auto [xm, zm] = global_masks(model.qubits(), model.generators()[l]);
        rho = w * rho + (1 - w) * pauli_conjugate(rho, xm, zm);
    }
}

void apply_inverse_noise(CMatrix &rho, const NoiseModel &model) {
    for (size_t l = 0; l < model.size(); l++) {
        if (model.lambdas()[l] == 0) continue;
        double w = model.weight(l);
        double g = 1.0 / (2 * w - 1);
        auto [xm, zm] = global_masks(model.qubits(), model.generators()[l]);
        rho = (w * g) * rho - ((1 - w) * g) * pauli_conjugate(rho, xm, zm);
    }
}

std::complex<double> pauli_trace(const PauliString &p, const CMatrix &rho) {
    static const cd powers[4] = {1.0, cd(0, 1), -1.0, cd(0, -1)};
    const uint64_t xm = p.x_mask(), zm = p.z_mask();
    const int base = p.phase() + std::popcount(xm & zm);
    cd s = 0;
    const Eigen::Index dim = rho.rows();
    // P|c> = i^base (-1)^{z.c} |c ^ x>.
    for (Eigen::Index c = 0; c < dim; c++) {
        int e = base + 2 * (std::popcount(zm & static_cast<uint64_t>(c)) & 1);
        s += powers[e & 3] * rho(c, static_cast<Eigen::Index>(static_cast<uint64_t>(c) ^ xm));
    }
    return s;
}

CMatrix initial_state(int num_qubits, const std::map<int, double> &flip) {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        double p = 1;
        for (int q = 0; q < num_qubits; q++) {
            auto it = flip.find(q);
            double f = it == flip.end() ? 0.0 : it->second;
            p *= ((i >> q) & 1) ? f : 1 - f;
        }
        rho(i, i) = p;
    }
    return rho;
}

DenseResult run_dense(const DynamicCircuit &c, const NoiseBinding &binding, const std::optional<CMatrix> &input,
                      const DenseOptions &options) {
    const int n = c.num_qubits();
    if (n > kDenseMaxQubits) {
        throw ConfigError("dense backend supports at most " + std::to_string(kDenseMaxQubits) + " qubits, got " +
                          std::to_string(n));
    }
    c.validate();
    binding.validate(n);
    const bool ideal = options.ideal;
    const Eigen::Index dim = Eigen::Index{1} << n;

    Branches branches;
    if (input) {
        if (input->rows() != dim || input->cols() != dim) throw ConfigError("input state has the wrong dimension");
        branches.emplace(Key{0, 0}, *input);
    } else {
        branches.emplace(Key{0, 0}, initial_state(n, ideal ? std::map<int, double>{} : binding.init_flip));
    }
    const auto live = live_masks(c);
    const NoiseModel *latency = binding.delay_model("ff_latency");

    auto for_each_state = [&](auto &&f) {
        for (auto &[k, rho] : branches) f(rho);
    };

    const auto &layers = c.layers();
    for (size_t i = 0; i < layers.size(); i++) {
        const Layer &layer = layers[i];
        if (!layer.label.empty() && layer.is_pec_candidate()) {
            if (auto it = options.inverse.find(layer.label); it != options.inverse.end()) {
                for_each_state([&](CMatrix &rho) { apply_inverse_noise(rho, it->second); });
            }
            if (!ideal) {
                if (auto it = binding.coherent.find(layer.label); it != binding.coherent.end()) {
                    for (const auto &t : it->second) {
                        CMatrix u = std::cos(t.angle / 2) * CMatrix::Identity(dim, dim) -
                                    cd(0, std::sin(t.angle / 2)) * pauli_matrix(t.pauli.unsigned_part());
                        for_each_state([&](CMatrix &rho) { rho = u * rho * u.adjoint(); });
                    }
                }
                const NoiseModel *m = binding.layer_model(layer.label);
                if (m) {
                    for_each_state([&](CMatrix &rho) { apply_noise(rho, *m); });
                } else if (binding.strict) {
                    throw ConfigError("no noise bound to layer '" + layer.label + "'");
                }
            }
        }
        auto run_rules = [&](const std::vector<FeedforwardRule> &rules) {
            if (rules.empty()) return;
            if (!ideal && latency) for_each_state([&](CMatrix &rho) { apply_noise(rho, *latency); });
            for (auto &[key, rho] : branches) {
                for (const auto &r : rules) {
                    if (r.op == "delay" || static_cast<int>((key.first >> r.clbit) & 1) != r.value) continue;
                    if (r.is_two_qubit()) {
                        apply_gate(rho, gate_unitary("cx"), {r.control, r.target});
                    } else {
                        apply_gate(rho, gate_unitary(r.op), {r.target});
                    }
                }
            }
        };

        switch (layer.kind) {
            case LayerKind::Unitary:
                for (const auto &g : layer.gates) {
                    CMatrix u = gate_unitary(g.name, g.params);
                    for_each_state([&](CMatrix &rho) { apply_gate(rho, u, g.qubits); });
                }
                break;
            case LayerKind::Measurement: {
                const double r = ideal ? 0.0 : binding.discriminator;
                for (size_t j = 0; j < layer.qubits.size(); j++) {
                    const int q = layer.qubits[j];
                    const uint64_t bit = 1ULL << layer.clbits[j];
                    const ReadoutError ro = ideal ? ReadoutError{} : binding.readout_of(q);
                    Branches next;
                    for (auto &[key, rho] : branches) {
                        for (int m = 0; m < 2; m++) {
                            CMatrix part = rho;
                            project(part, q, m);
                            if (part.squaredNorm() == 0) continue;
                            const double p_assign = m ? ro.p01 : ro.p10;
                            for (int d = 0; d < 2; d++) {
                                const double pd = d ? r : 1 - r;
                                if (pd == 0) continue;
                                const uint64_t ctrl_bit = (m ^ d) ? bit : 0;
                                for (int a = 0; a < 2; a++) {
                                    const double pa = a ? p_assign : 1 - p_assign;
                                    if (pa == 0) continue;
                                    const uint64_t rec_bit = (m ^ d ^ a) ? bit : 0;
                                    Key nk{(key.first & ~bit) | ctrl_bit,
                                           options.keep_records ? ((key.second & ~bit) | rec_bit) : 0};
                                    merge_into(next, nk, (pd * pa) * part);
                                }
                            }
                        }
                    }
                    branches = std::move(next);
                }
                run_rules(layer.feedforward);
                break;
            }
            case LayerKind::Delay:
                if (!ideal) {
                    if (const NoiseModel *m = binding.delay_model(layer.tag)) {
                        for_each_state([&](CMatrix &rho) { apply_noise(rho, *m); });
                    }
                }
                break;
            case LayerKind::Dephase:
                for_each_state([&](CMatrix &rho) {
                    for (int q : layer.qubits) dephase(rho, q);
                });
                break;
            case LayerKind::Conditional:
                run_rules(layer.feedforward);
                break;
        }
        if (!options.keep_records) {
            Branches merged;
            for (auto &[key, rho] : branches) merge_into(merged, Key{key.first & live[i + 1], 0}, std::move(rho));
            branches = std::move(merged);
        }
    }

    DenseResult out;
    out.num_qubits = n;
    out.num_clbits = c.num_clbits();
    for (auto &[key, rho] : branches) out.branches.push_back(DenseBranch{key.first, key.second, std::move(rho)});
    return out;
}

CMatrix DenseResult::state() const {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    CMatrix s = CMatrix::Zero(dim, dim);
    for (const auto &b : branches) s += b.rho;
    return s;
}

std::map<uint64_t, double> DenseResult::record_distribution() const {
    std::map<uint64_t, double> out;
    for (const auto &b : branches) out[b.rec] += b.probability();
    return out;
}

std::map<std::pair<uint64_t, uint64_t>, double> DenseResult::outcome_distribution(const NoiseBinding *binding) const {
    std::map<std::pair<uint64_t, uint64_t>, double> out;
    const uint64_t dim = uint64_t{1} << num_qubits;
    for (const auto &b : branches) {
        std::vector<double> probs(dim);
        for (uint64_t i = 0; i < dim; i++) probs[i] = b.rho(i, i).real();
        if (binding) {
            for (int q = 0; q < num_qubits; q++) {
                ReadoutError ro = binding->readout_of(q);
                if (ro.p01 == 0 && ro.p10 == 0) continue;
                const uint64_t bit = 1ULL << q;
                for (uint64_t i = 0; i < dim; i++) {
                    if (i & bit) continue;
                    double p0 = probs[i], p1 = probs[i | bit];
                    probs[i] = p0 * (1 - ro.p10) + p1 * ro.p01;
                    probs[i | bit] = p0 * ro.p10 + p1 * (1 - ro.p01);
                }
            }
        }
        for (uint64_t i = 0; i < dim; i++) {
            if (probs[i] != 0) out[{b.rec, i}] += probs[i];
        }
    }
    return out;
}

double DenseResult::expectation(const PauliString &observable, const std::vector<FeedforwardRule> &recovery,
                                uint64_t flips) const {
    if (observable.num_qubits() != static_cast<size_t>(num_qubits)) throw ConfigError("observable has the wrong size");
    double s = 0;
    for (const auto &b : branches) {
        int sign = recovery.empty() ? 1 : software_recovery_sign(recovery, b.rec ^ flips, observable);
        s += sign * pauli_trace(observable, b.rho).real();
    }
    return s;
}

std::pair<double, double> DenseResult::post_selected(const PauliString &observable, const std::vector<int> &clbits,
                                                     uint64_t pattern, uint64_t flips) const {
    double mass = 0, value = 0;
    for (const auto &b : branches) {
        uint64_t bits = b.rec ^ flips;
        bool ok = true;
        for (size_t j = 0; j < clbits.size(); j++) {
            if (((bits >> clbits[j]) & 1) != ((pattern >> j) & 1)) ok = false;
        }
        if (!ok) continue;
        mass += b.probability();
        value += pauli_trace(observable, b.rho).real();
    }
    return {mass, value};
}

}  // namespace dynpec
