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

#include "dynpec/passes.h"

#include <algorithm>
#include <set>

#include "dynpec/error.h"
#include "dynpec/gates.h"

namespace dynpec {

namespace {

std::string pauli_gate_name(char p) {
    switch (p) {
        case 'X': return "x";
        case 'Y': return "y";
        case 'Z': return "z";
    }
    return "i";
}

bool is_pauli_op(const std::string &op) { return op == "i" || op == "x" || op == "y" || op == "z" || op == "delay"; }

char pauli_of_op(const std::string &op) {
    if (op == "x") return 'X';
    if (op == "y") return 'Y';
    if (op == "z") return 'Z';
    return 'I';
}

}  // namespace

Layer pauli_layer(const PauliString &p) {
    std::vector<Gate> gates;
    for (size_t q = 0; q < p.num_qubits(); q++) {
        char c = p.get(q);
        if (c != 'I') gates.push_back(Gate{pauli_gate_name(c), {static_cast<int>(q)}, {}});
    }
    return Layer::unitary(std::move(gates));
}

std::optional<CliffordOp> layer_clifford(const Layer &layer, int num_qubits) {
    if (layer.kind != LayerKind::Unitary) return std::nullopt;
    CliffordOp out = CliffordOp::identity(num_qubits);
    for (const auto &g : layer.gates) {
        auto local = gate_clifford(g.name);
        if (!local) return std::nullopt;
        out = out.then(local->embed(g.qubits, num_qubits));
    }
    return out;
}

DynamicCircuit insert_dephasing(const DynamicCircuit &c) {
    DynamicCircuit out(c.num_qubits(), c.num_clbits());
    out.set_metadata(c.metadata());
    const auto &layers = c.layers();
    for (size_t i = 0; i < layers.size(); i++) {
        out.append(layers[i]);
        if (layers[i].kind != LayerKind::Measurement || layers[i].qubits.empty()) continue;
        std::set<int> measured(layers[i].qubits.begin(), layers[i].qubits.end());
        bool done = i + 1 < layers.size() && layers[i + 1].kind == LayerKind::Dephase &&
                    std::set<int>(layers[i + 1].qubits.begin(), layers[i + 1].qubits.end()) == measured;
        if (!done) out.append(Layer::dephase({measured.begin(), measured.end()}));
    }
    return out;
}

DynamicCircuit replace_feedforward_with_delay(const DynamicCircuit &c) {
    DynamicCircuit out = c;
    for (auto &layer : out.mutable_layers()) {
        for (auto &rule : layer.feedforward) {
            rule.op = "delay";
            rule.control = -1;
        }
    }
    return out;
}

std::pair<PauliString, int> conjugate_twirl_through_clifford_ffwd(const FeedforwardRule &rule, const PauliString &p) {
    if (p.num_qubits() != 1) throw std::invalid_argument("expected a single-qubit Pauli");
    PauliString unsigned_p = p.unsigned_part();
    if (rule.op == "delay" || rule.op == "i") return {unsigned_p, 1};
    if (rule.is_two_qubit()) throw ConfigError("feedforward '" + rule.op + "' is not a single-qubit operation");
    auto c = gate_clifford(rule.op);
    if (!c || c->num_qubits() != 1) throw ConfigError("feedforward '" + rule.op + "' is not a single-qubit Clifford");
    PauliString q = c->conjugate(unsigned_p);
    int s = q.sign();
    return {q.unsigned_part(), s};
}

std::pair<DynamicCircuit, TwirlRecord> apply_insertions(const DynamicCircuit &c,
                                                        const std::vector<LayerInsertion> &insertions) {
    const int n = c.num_qubits();
    const auto &layers = c.layers();
    std::vector<const LayerInsertion *> at(layers.size(), nullptr);
    for (const auto &ins : insertions) {
        if (ins.layer >= layers.size()) throw ConfigError("twirl layer index out of range");
        if (at[ins.layer]) throw ConfigError("layer " + std::to_string(ins.layer) + " twirled twice");
        if (ins.twirl.num_qubits() != static_cast<size_t>(n)) throw ConfigError("twirl has the wrong qubit count");
        if (ins.mitigation.num_qubits() != 0 && ins.mitigation.num_qubits() != static_cast<size_t>(n)) {
            throw ConfigError("mitigation Pauli has the wrong qubit count");
        }
        at[ins.layer] = &ins;
    }

    DynamicCircuit out(n, c.num_clbits());
    out.set_metadata(c.metadata());
    TwirlRecord rec;
    uint64_t flips = 0;

    auto adjust_rules = [&](std::vector<FeedforwardRule> &rules) {
        for (auto &r : rules) {
            if ((flips >> r.clbit) & 1) r.value ^= 1;
        }
    };

    for (size_t i = 0; i < layers.size(); i++) {
        Layer layer = layers[i];
        const LayerInsertion *ins = at[i];
        if (!ins) {
            if (layer.kind == LayerKind::Conditional) adjust_rules(layer.feedforward);
            if (layer.kind == LayerKind::Measurement) {
                for (int b : layer.clbits) flips &= ~(1ULL << b);
                adjust_rules(layer.feedforward);
            }
            out.append(std::move(layer));
            continue;
        }
        if (!layer.is_pec_candidate()) throw ConfigError("layer " + std::to_string(i) + " is not twirlable");
        auto support = layer_support(layer);
        std::set<int> sup(support.begin(), support.end());
        for (const PauliString *p : {&ins->twirl, &ins->mitigation}) {
            for (size_t q = 0; q < p->num_qubits(); q++) {
                if (p->get(q) != 'I' && !sup.contains(static_cast<int>(q))) {
                    throw ConfigError("insertion on layer " + std::to_string(i) + " leaves the layer support");
                }
            }
        }
        PauliString twirl = ins->twirl.unsigned_part();
        PauliString before = ins->mitigation.num_qubits() ? (twirl * ins->mitigation).unsigned_part() : twirl;
        rec.layers.push_back(i);
        rec.paulis.push_back(twirl);

        if (layer.kind == LayerKind::Unitary) {
            auto u = layer_clifford(layer, n);
            if (!u) throw ConfigError("layer " + std::to_string(i) + " contains non-Clifford gates and cannot be twirled");
            PauliString after = u->conjugate(twirl);
            rec.sign *= after.sign();
            if (!before.is_identity()) out.append(pauli_layer(before));
            out.append(std::move(layer));
            if (!after.is_identity()) out.append(pauli_layer(after.unsigned_part()));
            continue;
        }

        // Measurement layer: twirl passes through the projectors unchanged up
        // to an outcome relabelling.
        for (size_t j = 0; j < layer.qubits.size(); j++) {
            int b = layer.clbits[j];
            char comp = twirl.get(layer.qubits[j]);
            if (comp == 'X' || comp == 'Y') {
                flips |= 1ULL << b;
            } else {
                flips &= ~(1ULL << b);
            }
        }
        adjust_rules(layer.feedforward);
        std::vector<FeedforwardRule> corrections;
        for (const auto &r : layer.feedforward) {
            if (r.is_two_qubit()) throw ConfigError("twirl a classically controlled CNOT only after decomposing it");
            PauliString pt = PauliString::single(1, 0, twirl.get(r.target));
            if (is_pauli_op(r.op)) {
                if (!commutes(PauliString::single(1, 0, pauli_of_op(r.op)), pt)) rec.sign = -rec.sign;
                continue;
            }
            auto [qt, s] = conjugate_twirl_through_clifford_ffwd(r, pt);
            rec.sign *= s;
            PauliString fix = (qt * pt).unsigned_part();
            if (!fix.is_identity()) {
                corrections.push_back(FeedforwardRule{r.clbit, r.value, pauli_gate_name(fix.get(0)), r.target, -1});
            }
        }
        if (!before.is_identity()) out.append(pauli_layer(before));
        out.append(std::move(layer));
        if (!twirl.is_identity()) out.append(pauli_layer(twirl));
        if (!corrections.empty()) out.append(Layer::conditional(std::move(corrections)));
    }
    rec.flips = flips;
    return {std::move(out), std::move(rec)};
}

std::pair<DynamicCircuit, TwirlRecord> sample_twirl_instance(const DynamicCircuit &c,
                                                             const std::vector<size_t> &layers, Rng &rng) {
    std::vector<LayerInsertion> ins;
    for (size_t idx : layers) {
        if (idx >= c.layers().size()) throw ConfigError("twirl layer index out of range");
        PauliString p(c.num_qubits());
        for (int q : layer_support(c.layers()[idx])) p.set(q, "IXYZ"[rng.below(4)]);
        ins.push_back(LayerInsertion{idx, std::move(p), PauliString()});
    }
    return apply_insertions(c, ins);
}

std::pair<DynamicCircuit, TwirlRecord> sample_twirl_instance(const DynamicCircuit &c,
                                                             const std::vector<size_t> &layers, uint64_t seed) {
    Rng rng(seed);
    return sample_twirl_instance(c, layers, rng);
}

std::vector<size_t> pec_layer_indices(const DynamicCircuit &c) {
    std::vector<size_t> out;
    for (size_t i = 0; i < c.layers().size(); i++) {
        const Layer &l = c.layers()[i];
        if (!l.label.empty() && l.is_pec_candidate()) out.push_back(i);
    }
    return out;
}

std::vector<Layer> toffoli_network(int a, int c, int t) {
    auto g1 = [](const char *name, int q) { return Layer::unitary({Gate{name, {q}, {}}}); };
    auto cx = [](int ctl, int tgt) { return Layer::unitary({Gate{"cx", {ctl, tgt}, {}}}); };
    return {g1("h", t),   cx(c, t),   g1("tdg", t), cx(a, t),   g1("t", t),    cx(c, t),
            g1("tdg", t), cx(a, t),   g1("t", c),   g1("t", t), g1("h", t),    cx(a, c),
            g1("t", a),   g1("tdg", c), cx(a, c)};
}

DynamicCircuit decompose_cc_cnot(const DynamicCircuit &c, size_t layer_index) {
    if (layer_index >= c.layers().size()) throw ConfigError("layer index out of range");
    const Layer &src = c.layers()[layer_index];
    auto it = std::find_if(src.feedforward.begin(), src.feedforward.end(),
                           [](const FeedforwardRule &r) { return r.is_two_qubit(); });
    if (src.kind != LayerKind::Measurement || it == src.feedforward.end()) {
        throw ConfigError("layer " + std::to_string(layer_index) + " has no classically controlled CNOT");
    }
    if (std::count_if(src.feedforward.begin(), src.feedforward.end(),
                      [](const FeedforwardRule &r) { return r.is_two_qubit(); }) != 1) {
        throw ConfigError("layer " + std::to_string(layer_index) + " has more than one classically controlled CNOT");
    }
    const FeedforwardRule rule = *it;
    const int ctl = rule.control, tgt = rule.target;

    // With the Toffoli's first control measured, every CNOT it drives becomes a
    // classically controlled X. Grouping each with its neighbouring T gates
    // leaves two Clifford conditionals on the target and one on the control.
    Layer meas = src;
    meas.feedforward.erase(meas.feedforward.begin() + (it - src.feedforward.begin()));
    auto cond = [&](const char *op, int q) {
        return Layer::conditional({FeedforwardRule{rule.clbit, rule.value, op, q, -1}});
    };
    auto g1 = [](const char *name, int q) { return Layer::unitary({Gate{name, {q}, {}}}); };
    auto cx = Layer::unitary({Gate{"cx", {ctl, tgt}, {}}});

    DynamicCircuit out(c.num_qubits(), c.num_clbits());
    out.set_metadata(c.metadata());
    for (size_t i = 0; i < c.layers().size(); i++) {
        if (i != layer_index) {
            out.append(c.layers()[i]);
            continue;
        }
        out.append(meas);
        out.append(g1("h", tgt));
        out.append(cx);
        out.append(cond("tdg_x_t", tgt));
        out.append(cx);
        out.append(cond("tdg_x_t", tgt));
        out.append(g1("h", tgt));
        out.append(cond("t_x_tdg_x", ctl));
    }
    out.validate();
    return out;
}

}  // namespace dynpec
