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

#include "dynpec/circuit.h"

#include "gtest/gtest.h"

#include "dynpec/dense.h"
#include "dynpec/error.h"
#include "dynpec/families.h"
#include "dynpec/gates.h"
#include "dynpec/passes.h"
#include "dynpec/ptm.h"
#include "test_util.h"

using namespace dynpec;

namespace {

const char *kFeedforwardDoc = R"({
  "n_qubits": 2, "n_clbits": 1,
  "layers": [
    {"kind": "unitary", "gates": [["h", [0]]]},
    {"kind": "unitary", "label": "cx", "gates": [["cx", [0, 1]]]},
    {"kind": "measurement", "label": "meas", "qubits": [1], "clbits": [0],
     "feedforward": [{"clbit": 0, "value": 1, "op": "x", "target": 0}]}
  ]
})";

DenseResult ideal_run(const DynamicCircuit &c, const CMatrix &input) {
    DenseOptions opts;
    opts.ideal = true;
    return run_dense(c, NoiseBinding{}, input, opts);
}

/// Per-record states of a run with the given recorded-bit correction applied.
std::map<uint64_t, CMatrix> states_by_record(const DenseResult &r, uint64_t flips) {
    std::map<uint64_t, CMatrix> out;
    for (const auto &b : r.branches) {
        auto [it, fresh] = out.try_emplace(b.rec ^ flips, CMatrix::Zero(b.rho.rows(), b.rho.cols()));
        it->second += b.rho;
    }
    return out;
}

double max_record_state_difference(const std::map<uint64_t, CMatrix> &a, const std::map<uint64_t, CMatrix> &b) {
    double worst = 0;
    for (const auto &[k, rho] : a) {
        auto it = b.find(k);
        double d = it == b.end() ? rho.cwiseAbs().maxCoeff() : (rho - it->second).cwiseAbs().maxCoeff();
        worst = std::max(worst, d);
    }
    for (const auto &[k, rho] : b) {
        if (!a.contains(k)) worst = std::max(worst, rho.cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace

TEST(DynamicCircuit, parses_feedforward_document) {
    auto c = parse_circuit(kFeedforwardDoc);
    EXPECT_EQ(c.num_qubits(), 2);
    EXPECT_EQ(c.num_clbits(), 1);
    ASSERT_EQ(c.layers().size(), 3u);
    EXPECT_EQ(c.layers()[2].kind, LayerKind::Measurement);
    EXPECT_EQ(c.layers()[2].feedforward[0].op, "x");
    EXPECT_EQ(c.pec_labels(), (std::vector<std::string>{"cx", "meas"}));
    EXPECT_EQ(parse_circuit(serialize_circuit(c)), c);
}

TEST(DynamicCircuit, minimal_measure_only_document) {
    auto c = parse_circuit(R"({"n_qubits": 1, "n_clbits": 1,
        "layers": [{"kind": "measurement", "qubits": [0], "clbits": [0]}]})");
    ASSERT_EQ(c.layers().size(), 1u);
    EXPECT_EQ(c.layers()[0].kind, LayerKind::Measurement);
}

TEST(DynamicCircuit, round_trips_every_family) {
    Rng rng(3);
    std::vector<DynamicCircuit> circuits = {feedforward_circuit(1), feedforward_circuit(0.3), tile_circuit(),
                                            cc_cnot_reference(), decompose_cc_cnot(cc_cnot_reference(), 0)};
    for (int i = 0; i < 10; i++) circuits.push_back(random_dynamic_circuit(rng).first);
    for (const auto &c : circuits) EXPECT_EQ(parse_circuit(serialize_circuit(c)), c);
}

TEST(DynamicCircuit, rejects_malformed_documents) {
    EXPECT_THROW(parse_circuit(R"({"n_qubits": 1, "n_clbits": 0, "layers": [{"kind": "teleport"}]})"), ConfigError);
    EXPECT_THROW(parse_circuit("not json"), ConfigError);
    EXPECT_THROW(parse_circuit(R"({"n_qubits": 1, "n_clbits": 0,
        "layers": [{"kind": "unitary", "gates": [["h", [1]]]}]})"),
                 ConfigError);
    EXPECT_THROW(parse_circuit(R"({"n_qubits": 2, "n_clbits": 0,
        "layers": [{"kind": "unitary", "gates": [["h", [0]], ["x", [0]]]}]})"),
                 ConfigError);
    EXPECT_THROW(parse_circuit(R"({"n_qubits": 2, "n_clbits": 1,
        "layers": [{"kind": "measurement", "qubits": [0, 1], "clbits": [0, 0]}]})"),
                 ConfigError);
    EXPECT_THROW(parse_circuit(R"({"n_qubits": 1, "n_clbits": 0,
        "layers": [{"kind": "unitary", "gates": [["warp", [0]]]}]})"),
                 ConfigError);
}

TEST(Passes, insert_dephasing_is_idempotent) {
    auto c = feedforward_circuit(0.5);
    auto once = insert_dephasing(c);
    ASSERT_EQ(once.layers().size(), c.layers().size() + 1);
    EXPECT_EQ(once.layers().back().kind, LayerKind::Dephase);
    EXPECT_EQ(once.layers().back().qubits, std::vector<int>{1});
    EXPECT_EQ(insert_dephasing(once), once);

    auto tile = insert_dephasing(tile_circuit());
    int dephase = 0;
    for (const auto &l : tile.layers()) dephase += l.kind == LayerKind::Dephase;
    EXPECT_EQ(dephase, 2);
}

TEST(Passes, replace_feedforward_with_delay) {
    auto c = feedforward_circuit(0.5);
    auto d = replace_feedforward_with_delay(c);
    const auto &rule = d.layers().back().feedforward.at(0);
    EXPECT_EQ(rule.op, "delay");
    EXPECT_EQ(rule.clbit, 0);
    EXPECT_EQ(rule.target, 0);

    DynamicCircuit two(3, 1);
    two.append(Layer::measurement({0}, {0}, {FeedforwardRule{0, 1, "x", 1}, FeedforwardRule{0, 0, "z", 2}}));
    auto replaced = replace_feedforward_with_delay(two);
    for (const auto &r : replaced.layers()[0].feedforward) EXPECT_EQ(r.op, "delay");

    auto plain = tile_circuit();
    EXPECT_EQ(replace_feedforward_with_delay(plain), plain);
}

TEST(Passes, measurement_twirl_flags_and_signs) {
    auto c = feedforward_circuit(0.5);
    size_t meas = c.layer_index("meas");
    auto twirled = [&](const char *label) {
        return apply_insertions(c, {LayerInsertion{meas, PauliString::from_label(label), PauliString()}}).second;
    };
    EXPECT_TRUE(twirled("IX").flipped(0));
    EXPECT_TRUE(twirled("IY").flipped(0));
    EXPECT_FALSE(twirled("IZ").flipped(0));
    EXPECT_FALSE(twirled("XI").flipped(0));
    EXPECT_EQ(twirled("ZI").sign, -1);
    EXPECT_EQ(twirled("XI").sign, 1);

    // The trigger of the feedforward follows the flipped record.
    auto [circuit, rec] = apply_insertions(c, {LayerInsertion{meas, PauliString::from_label("IX"), PauliString()}});
    bool found = false;
    for (const auto &l : circuit.layers()) {
        if (l.kind == LayerKind::Measurement) {
            EXPECT_EQ(l.feedforward.at(0).value, 0);
            found = true;
        }
    }
    EXPECT_TRUE(found);
    EXPECT_THROW(apply_insertions(c, {LayerInsertion{0, PauliString::from_label("XX"), PauliString()}}), ConfigError);
}

TEST(Passes, twirled_instances_equal_the_untwirled_circuit) {
    Rng rng(17);
    for (int trial = 0; trial < 40; trial++) {
        auto [c, binding] = random_dynamic_circuit(rng);
        auto layers = pec_layer_indices(c);
        if (layers.empty()) continue;
        CMatrix input = dynpec::testing::random_density(c.num_qubits(), rng);
        auto reference = states_by_record(ideal_run(c, input), 0);
        for (int k = 0; k < 3; k++) {
            auto [tw, rec] = sample_twirl_instance(c, layers, rng);
            auto got = states_by_record(ideal_run(tw, input), rec.flips);
            EXPECT_LT(max_record_state_difference(reference, got), 1e-10) << c.serialize();
        }
    }
}

TEST(Passes, twirl_and_mitigation_merge_before_unitary_layers) {
    auto c = feedforward_circuit(1);
    size_t cx = c.layer_index("cx");
    auto [out, rec] = apply_insertions(
        c, {LayerInsertion{cx, PauliString::from_label("XI"), PauliString::from_label("XZ")}});
    ASSERT_EQ(out.layers().size(), 4u);
    EXPECT_EQ(out.layers()[0].gates.size(), 1u);
    EXPECT_EQ(out.layers()[0].gates[0].name, "z");
    EXPECT_EQ(out.layers()[0].gates[0].qubits, std::vector<int>{1});
    EXPECT_EQ(out.layers()[2].gates.size(), 2u);  // X on both after CX
}

TEST(Passes, conjugate_twirl_through_clifford_feedforward) {
    FeedforwardRule x{0, 1, "x", 0};
    auto [q, s] = conjugate_twirl_through_clifford_ffwd(x, PauliString::from_label("Z"));
    EXPECT_EQ(q.label(), "Z");
    EXPECT_EQ(s, -1);

    FeedforwardRule id{0, 1, "i", 0};
    for (const char *p : {"X", "Y", "Z", "I"}) {
        auto [qi, si] = conjugate_twirl_through_clifford_ffwd(id, PauliString::from_label(p));
        EXPECT_EQ(qi.label(), p);
        EXPECT_EQ(si, 1);
    }

    // 2x2 oracle for T^dag X T.
    FeedforwardRule txt{0, 1, "tdg_x_t", 0};
    CMatrix u = gate_unitary("tdg_x_t");
    for (const char *p : {"X", "Y", "Z"}) {
        auto [qc, sc] = conjugate_twirl_through_clifford_ffwd(txt, PauliString::from_label(p));
        CMatrix expected = u * dynpec::testing::label_matrix(p) * u.adjoint();
        CMatrix got = static_cast<double>(sc) * dynpec::testing::label_matrix(qc.label());
        EXPECT_LT((expected - got).cwiseAbs().maxCoeff(), 1e-12) << p;
    }
    EXPECT_THROW(conjugate_twirl_through_clifford_ffwd(FeedforwardRule{0, 1, "t", 0}, PauliString::from_label("X")),
                 ConfigError);
}

TEST(Passes, clifford_feedforward_twirl_adds_conditional_correction) {
    DynamicCircuit c(2, 1);
    c.append(Layer::unitary({Gate{"h", {1}, {}}}));
    c.append(Layer::measurement({1}, {0}, {FeedforwardRule{0, 1, "h", 0}}, "m"));
    Rng rng(8);
    CMatrix input = dynpec::testing::random_density(2, rng);
    auto reference = states_by_record(ideal_run(c, input), 0);
    for (const auto &p : all_paulis(2)) {
        auto [tw, rec] = apply_insertions(c, {LayerInsertion{1, p, PauliString()}});
        auto got = states_by_record(ideal_run(tw, input), rec.flips);
        EXPECT_LT(max_record_state_difference(reference, got), 1e-10) << p.label();
    }
}

TEST(Passes, cc_cnot_fragment_matches_reference_channel) {
    auto ref = cc_cnot_reference(0, 1, 2);
    auto frag = decompose_cc_cnot(ref, 0);
    for (const auto &l : frag.layers()) {
        for (const auto &r : l.feedforward) {
            EXPECT_FALSE(r.is_two_qubit());
            auto cl = gate_clifford(r.op);
            ASSERT_TRUE(cl.has_value()) << r.op;
            EXPECT_TRUE(cl->is_valid());
        }
    }
    auto basis = ptm_basis(3);
    Eigen::MatrixXd a = ptm_of(ref, NoiseBinding{}, basis), b = ptm_of(frag, NoiseBinding{}, basis);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);

    Rng rng(4);
    for (int trial = 0; trial < 5; trial++) {
        CMatrix input = dynpec::testing::random_density(3, rng);
        EXPECT_LT(max_record_state_difference(states_by_record(ideal_run(ref, input), 0),
                                              states_by_record(ideal_run(frag, input), 0)),
                  1e-10);
    }
    EXPECT_THROW(decompose_cc_cnot(feedforward_circuit(1), 1), ConfigError);
}

TEST(Passes, toffoli_network_uses_six_cnots) {
    auto layers = toffoli_network(0, 1, 2);
    int cnots = 0;
    DynamicCircuit c(3, 0);
    for (const auto &l : layers) {
        for (const auto &g : l.gates) cnots += g.name == "cx";
        c.append(l);
    }
    EXPECT_EQ(cnots, 6);
    // The network implements CCX exactly: compare transfer matrices.
    DynamicCircuit ccx(3, 0);
    ccx.append(Layer::unitary({Gate{"ccx", {0, 1, 2}, {}}}));
    auto basis = ptm_basis(3);
    EXPECT_LT((ptm_of(c, NoiseBinding{}, basis) - ptm_of(ccx, NoiseBinding{}, basis)).cwiseAbs().maxCoeff(), 1e-10);
}
