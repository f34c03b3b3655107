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

#include "dynpec/trajectory.h"

#include <algorithm>
#include <bit>

#include "dynpec/error.h"
#include "dynpec/gates.h"
#include "dynpec/parallel.h"
#include "dynpec/tableau.h"

namespace dynpec {

namespace {

struct PauliTerm {
    double p;
    uint64_t x, z;
};

uint64_t spread(const std::vector<int> &qubits, uint64_t local) {
    uint64_t out = 0;
    for (size_t j = 0; j < qubits.size(); j++) {
        if ((local >> j) & 1) out |= 1ULL << qubits[j];
    }
    return out;
}

void append_terms(std::vector<PauliTerm> &out, const NoiseModel &m) {
    for (size_t l = 0; l < m.size(); l++) {
        if (m.lambdas()[l] < kLambdaZero) continue;
        const auto &g = m.generators()[l];
        out.push_back(PauliTerm{1.0 - m.weight(l), spread(m.qubits(), g.x_mask()), spread(m.qubits(), g.z_mask())});
    }
}

bool is_pauli_name(const std::string &op) { return op == "i" || op == "x" || op == "y" || op == "z" || op == "delay"; }

std::pair<uint64_t, uint64_t> pauli_masks(const std::string &op, int q) {
    uint64_t b = 1ULL << q;
    if (op == "x") return {b, 0};
    if (op == "y") return {b, b};
    if (op == "z") return {0, b};
    return {0, 0};
}

template <typename F>
void for_each_hit(Rng &rng, double p, size_t count, F &&f) {
    if (p <= 0) return;
    if (p >= 1) {
        for (size_t i = 0; i < count; i++) f(i);
        return;
    }
    uint64_t pos = rng.geometric(p);
    while (pos < count) {
        f(static_cast<size_t>(pos));
        uint64_t gap = rng.geometric(p);
        if (gap >= count) break;
        pos += 1 + gap;
    }
}

void check_supported(const DynamicCircuit &c, const NoiseBinding &binding) {
    if (c.num_qubits() > 64) throw ConfigError("trajectory backend supports at most 64 qubits");
    if (binding.has_coherent()) throw ConfigError("coherent perturbations are only supported by the dense backend");
    for (const auto &layer : c.layers()) {
        for (const auto &g : layer.gates) {
            if (!gate_info(g.name).clifford) throw ConfigError("gate '" + g.name + "' is not Clifford");
        }
        for (const auto &r : layer.feedforward) {
            if (r.op != "delay" && !gate_info(r.op).clifford) {
                throw ConfigError("feedforward '" + r.op + "' is not Clifford");
            }
        }
    }
}

/// Instruction of the frame program.
struct FrameOp {
    enum Kind : uint8_t { H, S, CX, Noise, RandomZ, Measure, Toggle } kind;
    int a = -1;
    int b = -1;
    // Noise: terms [a, b). Measure: a = qubit, b = clbit.
    // Toggle: a = target, b = clbit.
    bool ref = false;  // Measure: reference outcome. Toggle: reference fired.
    uint8_t value = 0;
    uint64_t tx = 0, tz = 0;  // Toggle Pauli masks.
    double p10 = 0, p01 = 0, r = 0;
};

struct FrameProgram {
    int n = 0;
    int num_clbits = 0;
    std::vector<FrameOp> ops;
    std::vector<PauliTerm> terms;
    uint64_t ref_terminal = 0;
    std::vector<ReadoutError> terminal_readout;
};

FrameProgram compile_frames(const DynamicCircuit &c, const NoiseBinding &binding) {
    FrameProgram prog;
    prog.n = c.num_qubits();
    prog.num_clbits = c.num_clbits();
    const int n = prog.n;
    Tableau ref(n);
    uint64_t ref_ctrl = 0;
    const NoiseModel *latency = binding.delay_model("ff_latency");

    auto add_noise = [&](const NoiseModel &m) {
        int start = static_cast<int>(prog.terms.size());
        append_terms(prog.terms, m);
        int end = static_cast<int>(prog.terms.size());
        if (end > start) prog.ops.push_back(FrameOp{FrameOp::Noise, start, end});
    };
    auto add_prims = [&](const std::vector<Prim> &prims) {
        for (const auto &p : prims) {
            ref.apply(p);
            switch (p.op) {
                case PrimOp::H: prog.ops.push_back(FrameOp{FrameOp::H, p.a}); break;
                case PrimOp::S: prog.ops.push_back(FrameOp{FrameOp::S, p.a}); break;
                case PrimOp::CX: prog.ops.push_back(FrameOp{FrameOp::CX, p.a, p.b}); break;
                default: break;
            }
        }
    };
    auto add_rules = [&](const std::vector<FeedforwardRule> &rules) {
        if (rules.empty()) return;
        if (latency) add_noise(*latency);
        for (const auto &r : rules) {
            if (r.op == "delay" || r.op == "i") continue;
            bool fired = static_cast<int>((ref_ctrl >> r.clbit) & 1) == r.value;
            auto [tx, tz] = pauli_masks(r.op, r.target);
            if (fired) ref.apply_pauli(tx, tz);
            FrameOp op{FrameOp::Toggle, r.target, r.clbit};
            op.ref = fired;
            op.value = static_cast<uint8_t>(r.value);
            op.tx = tx;
            op.tz = tz;
            prog.ops.push_back(op);
        }
    };

    // Random Z on every frame fixes the gauge of the reference state.
    for (int q = 0; q < n; q++) prog.ops.push_back(FrameOp{FrameOp::RandomZ, q});
    {
        int start = static_cast<int>(prog.terms.size());
        for (const auto &[q, p] : binding.init_flip) {
            if (p > 0) prog.terms.push_back(PauliTerm{p, 1ULL << q, 0});
        }
        int end = static_cast<int>(prog.terms.size());
        if (end > start) prog.ops.push_back(FrameOp{FrameOp::Noise, start, end});
    }

    for (const auto &layer : c.layers()) {
        if (!layer.label.empty() && layer.is_pec_candidate()) {
            if (const NoiseModel *m = binding.layer_model(layer.label)) {
                add_noise(*m);
            } else if (binding.strict) {
                throw ConfigError("no noise bound to layer '" + layer.label + "'");
            }
        }
        switch (layer.kind) {
            case LayerKind::Unitary:
                for (const auto &g : layer.gates) add_prims(lower_clifford_gate(g.name, g.qubits));
                break;
            case LayerKind::Measurement:
                for (size_t j = 0; j < layer.qubits.size(); j++) {
                    const int q = layer.qubits[j], b = layer.clbits[j];
                    int outcome = ref.measure(q, nullptr).first;
                    ref_ctrl = (ref_ctrl & ~(1ULL << b)) | (static_cast<uint64_t>(outcome) << b);
                    FrameOp op{FrameOp::Measure, q, b};
                    op.ref = outcome;
                    ReadoutError ro = binding.readout_of(q);
                    op.p10 = ro.p10;
                    op.p01 = ro.p01;
                    op.r = binding.discriminator;
                    prog.ops.push_back(op);
                }
                add_rules(layer.feedforward);
                break;
            case LayerKind::Delay:
                if (const NoiseModel *m = binding.delay_model(layer.tag)) add_noise(*m);
                break;
            case LayerKind::Dephase:
                for (int q : layer.qubits) prog.ops.push_back(FrameOp{FrameOp::RandomZ, q});
                break;
            case LayerKind::Conditional:
                add_rules(layer.feedforward);
                break;
        }
    }
    for (int q = 0; q < n; q++) {
        if (ref.measure(q, nullptr).first) prog.ref_terminal |= 1ULL << q;
        prog.terminal_readout.push_back(binding.readout_of(q));
    }
    return prog;
}

/// Runs `count` shots of a compiled frame program into `out`.
void run_frame_block(const FrameProgram &prog, Rng &rng, size_t count, ShotRecord *out) {
    const int n = prog.n;
    const size_t W = (count + 63) / 64;
    std::vector<uint64_t> x(n * W, 0), z(n * W, 0), ctrl(std::max(prog.num_clbits, 1) * W, 0),
        rec(std::max(prog.num_clbits, 1) * W, 0), scratch(W), scratch2(W);
    auto X = [&](int q) { return x.data() + q * W; };
    auto Z = [&](int q) { return z.data() + q * W; };
    auto set_hits = [&](uint64_t *dst, double p) {
        std::fill(dst, dst + W, 0);
        for_each_hit(rng, p, count, [&](size_t s) { dst[s >> 6] |= 1ULL << (s & 63); });
    };

    for (const auto &op : prog.ops) {
        switch (op.kind) {
            case FrameOp::H:
                std::swap_ranges(X(op.a), X(op.a) + W, Z(op.a));
                break;
            case FrameOp::S:
                for (size_t w = 0; w < W; w++) Z(op.a)[w] ^= X(op.a)[w];
                break;
            case FrameOp::CX:
                for (size_t w = 0; w < W; w++) {
                    X(op.b)[w] ^= X(op.a)[w];
                    Z(op.a)[w] ^= Z(op.b)[w];
                }
                break;
            case FrameOp::Noise:
                for (int t = op.a; t < op.b; t++) {
                    const PauliTerm &term = prog.terms[t];
                    for_each_hit(rng, term.p, count, [&](size_t s) {
                        const uint64_t bit = 1ULL << (s & 63);
                        const size_t w = s >> 6;
                        for (uint64_t m = term.x; m; m &= m - 1) X(std::countr_zero(m))[w] ^= bit;
                        for (uint64_t m = term.z; m; m &= m - 1) Z(std::countr_zero(m))[w] ^= bit;
                    });
                }
                break;
            case FrameOp::RandomZ:
                for (size_t w = 0; w < W; w++) Z(op.a)[w] ^= rng();
                break;
            case FrameOp::Measure: {
                uint64_t *c = ctrl.data() + op.b * W;
                uint64_t *rc = rec.data() + op.b * W;
                const uint64_t refw = op.ref ? ~0ULL : 0;
                for (size_t w = 0; w < W; w++) {
                    c[w] = X(op.a)[w] ^ refw;  // true outcome for now
                    Z(op.a)[w] ^= rng();
                }
                // Assignment error depends on the true outcome.
                set_hits(scratch.data(), op.p10);
                set_hits(scratch2.data(), op.p01);
                for (size_t w = 0; w < W; w++) rc[w] = (~c[w] & scratch[w]) | (c[w] & scratch2[w]);
                set_hits(scratch.data(), op.r);
                for (size_t w = 0; w < W; w++) {
                    c[w] ^= scratch[w];
                    rc[w] ^= c[w];
                }
                break;
            }
            case FrameOp::Toggle: {
                const uint64_t *c = ctrl.data() + op.b * W;
                const uint64_t refw = op.ref ? ~0ULL : 0;
                for (size_t w = 0; w < W; w++) {
                    uint64_t fired = op.value ? c[w] : ~c[w];
                    uint64_t diff = fired ^ refw;
                    if (op.tx) X(op.a)[w] ^= diff;
                    if (op.tz) Z(op.a)[w] ^= diff;
                }
                break;
            }
        }
    }
    // Terminal measurement of every qubit.
    std::vector<uint64_t> term(n * W);
    for (int q = 0; q < n; q++) {
        uint64_t *t = term.data() + q * W;
        const uint64_t refw = (prog.ref_terminal >> q) & 1 ? ~0ULL : 0;
        for (size_t w = 0; w < W; w++) t[w] = X(q)[w] ^ refw;
        const ReadoutError &ro = prog.terminal_readout[q];
        if (ro.p10 > 0 || ro.p01 > 0) {
            set_hits(scratch.data(), ro.p10);
            set_hits(scratch2.data(), ro.p01);
            for (size_t w = 0; w < W; w++) t[w] ^= (~t[w] & scratch[w]) | (t[w] & scratch2[w]);
        }
    }
    for (size_t s = 0; s < count; s++) {
        const size_t w = s >> 6;
        const int bit = s & 63;
        uint64_t cb = 0, tb = 0;
        for (int b = 0; b < prog.num_clbits; b++) cb |= ((rec[b * W + w] >> bit) & 1) << b;
        for (int q = 0; q < n; q++) tb |= ((term[q * W + w] >> bit) & 1) << q;
        out[s] = ShotRecord{cb, tb};
    }
}

/// Lowered layer for per-shot tableau simulation.
struct ShotLayer {
    const Layer *layer;
    std::vector<PauliTerm> noise;
    std::vector<Prim> prims;
    std::vector<std::vector<Prim>> rule_prims;
};

void run_tableau_block(const DynamicCircuit &c, const NoiseBinding &binding, const std::vector<ShotLayer> &lowered,
                       const std::vector<PauliTerm> &latency, Rng &rng, size_t count, ShotRecord *out) {
    const int n = c.num_qubits();
    for (size_t s = 0; s < count; s++) {
        Tableau t(n);
        for (const auto &[q, p] : binding.init_flip) {
            if (rng.bernoulli(p)) t.x(q);
        }
        uint64_t ctrl = 0, rec = 0;
        auto noise = [&](const std::vector<PauliTerm> &terms) {
            for (const auto &term : terms) {
                if (rng.bernoulli(term.p)) t.apply_pauli(term.x, term.z);
            }
        };
        auto rules = [&](const ShotLayer &sl) {
            if (sl.layer->feedforward.empty()) return;
            noise(latency);
            for (size_t k = 0; k < sl.layer->feedforward.size(); k++) {
                const auto &r = sl.layer->feedforward[k];
                if (static_cast<int>((ctrl >> r.clbit) & 1) == r.value) t.apply(sl.rule_prims[k]);
            }
        };
        for (const auto &sl : lowered) {
            noise(sl.noise);
            const Layer &layer = *sl.layer;
            switch (layer.kind) {
                case LayerKind::Unitary:
                    t.apply(sl.prims);
                    break;
                case LayerKind::Measurement:
                    for (size_t j = 0; j < layer.qubits.size(); j++) {
                        const int q = layer.qubits[j];
                        const uint64_t bit = 1ULL << layer.clbits[j];
                        int m = t.measure(q, &rng).first;
                        ReadoutError ro = binding.readout_of(q);
                        int a = rng.bernoulli(m ? ro.p01 : ro.p10) ? 1 : 0;
                        int d = rng.bernoulli(binding.discriminator) ? 1 : 0;
                        ctrl = (ctrl & ~bit) | ((m ^ d) ? bit : 0);
                        rec = (rec & ~bit) | ((m ^ d ^ a) ? bit : 0);
                    }
                    rules(sl);
                    break;
                case LayerKind::Delay:
                    break;
                case LayerKind::Dephase:
                    for (int q : layer.qubits) {
                        if (rng() >> 63) t.z(q);
                    }
                    break;
                case LayerKind::Conditional:
                    rules(sl);
                    break;
            }
        }
        uint64_t term = 0;
        for (int q = 0; q < n; q++) {
            int m = t.measure(q, &rng).first;
            ReadoutError ro = binding.readout_of(q);
            if (rng.bernoulli(m ? ro.p01 : ro.p10)) m ^= 1;
            if (m) term |= 1ULL << q;
        }
        out[s] = ShotRecord{rec, term};
    }
}

}  // namespace

bool frame_simulable(const DynamicCircuit &c) {
    for (const auto &layer : c.layers()) {
        for (const auto &r : layer.feedforward) {
            if (r.is_two_qubit() || !is_pauli_name(r.op)) return false;
        }
    }
    return true;
}

std::string outcome_key(uint64_t clbits, int num_clbits, uint64_t terminal, int num_qubits) {
    std::string key;
    key.reserve(num_clbits + num_qubits + 1);
    for (int b = 0; b < num_clbits; b++) key.push_back(((clbits >> b) & 1) ? '1' : '0');
    if (num_clbits > 0) key.push_back(' ');
    for (int q = 0; q < num_qubits; q++) key.push_back(((terminal >> q) & 1) ? '1' : '0');
    return key;
}

std::map<std::string, uint64_t> ShotBatch::counts() const {
    std::map<std::string, uint64_t> out;
    for (const auto &s : shots) out[outcome_key(s.clbits, num_clbits, s.terminal, num_qubits)]++;
    return out;
}

nlohmann::json ShotBatch::counts_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[k, v] : counts()) j[k] = v;
    return j;
}

ShotBatch run_trajectories(const DynamicCircuit &c, const NoiseBinding &binding, size_t shots, uint64_t seed,
                           const TrajectoryOptions &options) {
    c.validate();
    binding.validate(c.num_qubits());
    check_supported(c, binding);
    if (options.block_shots == 0) throw ConfigError("block size must be positive");

    ShotBatch batch;
    batch.num_qubits = c.num_qubits();
    batch.num_clbits = c.num_clbits();
    batch.shots.resize(shots);
    const size_t blocks = (shots + options.block_shots - 1) / options.block_shots;
    auto block_range = [&](size_t k) {
        size_t start = k * options.block_shots;
        return std::pair<size_t, size_t>{start, std::min(shots, start + options.block_shots)};
    };

    if (frame_simulable(c) && !options.force_tableau) {
        const FrameProgram prog = compile_frames(c, binding);
        parallel_for(blocks, options.workers, [&](size_t k) {
            auto [start, end] = block_range(k);
            Rng rng(stream_seed(seed, k));
            run_frame_block(prog, rng, end - start, batch.shots.data() + start);
        });
        return batch;
    }

    std::vector<ShotLayer> lowered;
    for (const auto &layer : c.layers()) {
        ShotLayer sl{&layer, {}, {}, {}};
        if (!layer.label.empty() && layer.is_pec_candidate()) {
            if (const NoiseModel *m = binding.layer_model(layer.label)) {
                append_terms(sl.noise, *m);
            } else if (binding.strict) {
                throw ConfigError("no noise bound to layer '" + layer.label + "'");
            }
        }
        if (layer.kind == LayerKind::Delay) {
            if (const NoiseModel *m = binding.delay_model(layer.tag)) append_terms(sl.noise, *m);
        }
        for (const auto &g : layer.gates) {
            auto p = lower_clifford_gate(g.name, g.qubits);
            sl.prims.insert(sl.prims.end(), p.begin(), p.end());
        }
        for (const auto &r : layer.feedforward) {
            if (r.op == "delay") {
                sl.rule_prims.emplace_back();
            } else if (r.is_two_qubit()) {
                sl.rule_prims.push_back(lower_clifford_gate("cx", {r.control, r.target}));
            } else {
                sl.rule_prims.push_back(lower_clifford_gate(r.op, {r.target}));
            }
        }
        lowered.push_back(std::move(sl));
    }
    std::vector<PauliTerm> latency;
    if (const NoiseModel *m = binding.delay_model("ff_latency")) append_terms(latency, *m);
    parallel_for(blocks, options.workers, [&](size_t k) {
        auto [start, end] = block_range(k);
        Rng rng(stream_seed(seed, k));
        run_tableau_block(c, binding, lowered, latency, rng, end - start, batch.shots.data() + start);
    });
    return batch;
}

}  // namespace dynpec
