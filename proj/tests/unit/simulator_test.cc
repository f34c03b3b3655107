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

#include "gtest/gtest.h"

#include <cmath>

#include "dynpec/dense.h"
#include "dynpec/error.h"
#include "dynpec/expectation.h"
#include "dynpec/families.h"
#include "dynpec/passes.h"
#include "dynpec/ptm.h"
#include "dynpec/trajectory.h"
#include "test_util.h"

using namespace dynpec;
using dynpec::testing::label_matrix;
using dynpec::testing::Mat;

namespace {

double total_variation(const std::map<std::pair<uint64_t, uint64_t>, double> &dense, const ShotBatch &batch) {
    std::map<std::pair<uint64_t, uint64_t>, double> emp;
    for (const auto &s : batch.shots) emp[{s.clbits, s.terminal}] += 1.0 / batch.size();
    double tvd = 0;
    for (const auto &[k, p] : dense) {
        auto it = emp.find(k);
        tvd += std::abs(p - (it == emp.end() ? 0.0 : it->second));
    }
    for (const auto &[k, p] : emp) {
        if (!dense.contains(k)) tvd += p;
    }
    return tvd / 2;
}

DynamicCircuit bell() {
    DynamicCircuit c(2, 0);
    c.append(Layer::unitary({{"h", {0}}}));
    c.append(Layer::unitary({{"cx", {0, 1}}}));
    return c;
}

/// Two-qubit measurement of qubit 1 twirled over {0, 1}, feedforward optional.
DynamicCircuit pair_measurement(std::vector<FeedforwardRule> ff = {}) {
    DynamicCircuit c(2, 1);
    Layer m = Layer::measurement({1}, {0}, std::move(ff), "meas");
    m.support = {0, 1};
    c.append(m);
    return c;
}

}  // namespace

TEST(DenseBackend, feedforward_family_ideal_values) {
    DenseOptions ideal;
    ideal.ideal = true;
    auto one = run_dense(feedforward_circuit(1), NoiseBinding{}, {}, ideal);
    EXPECT_NEAR(one.expectation(PauliString::from_label("ZI")), 1.0, 1e-12);
    EXPECT_NEAR(one.record_distribution().at(0), 1.0, 1e-12);

    auto half = run_dense(feedforward_circuit(0.5), NoiseBinding{}, {}, ideal);
    auto rec = half.record_distribution();
    EXPECT_NEAR(rec.at(0), 0.5, 1e-12);
    EXPECT_NEAR(rec.at(1), 0.5, 1e-12);
    EXPECT_NEAR(half.expectation(PauliString::from_label("ZI")), 1.0, 1e-12);

    auto third = run_dense(feedforward_circuit(0.3), NoiseBinding{}, {}, ideal);
    EXPECT_NEAR(third.record_distribution().at(0), 0.3, 1e-12);
    EXPECT_NEAR(third.expectation(PauliString::from_label("ZI")), 1.0, 1e-12);
    EXPECT_NEAR(third.expectation(PauliString::from_label("IZ")), 2 * 0.3 - 1, 1e-12);
}

TEST(DenseBackend, measure_then_dephase_plus_state) {
    DynamicCircuit c(1, 1);
    c.append(Layer::measurement({0}, {0}));
    c.append(Layer::dephase({0}));
    CMatrix plus = CMatrix::Constant(2, 2, 0.5);
    auto r = run_dense(c, NoiseBinding{}, plus);
    EXPECT_LT((r.state() - CMatrix::Identity(2, 2) / 2).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(DenseBackend, outputs_are_trace_preserving_and_positive) {
    Rng rng(44);
    for (int trial = 0; trial < 20; trial++) {
        auto [c, binding] = random_dynamic_circuit(rng);
        auto r = run_dense(c, binding);
        CMatrix rho = r.state();
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
        double mass = 0;
        for (const auto &[k, p] : r.outcome_distribution(&binding)) mass += p;
        EXPECT_NEAR(mass, 1.0, 1e-12);
    }
}

TEST(DenseBackend, rejects_oversized_and_strict_unbound) {
    DynamicCircuit big(kDenseMaxQubits + 1, 0);
    EXPECT_THROW(run_dense(big, NoiseBinding{}), ConfigError);
    NoiseBinding strict;
    strict.strict = true;
    EXPECT_THROW(run_dense(feedforward_circuit(1), strict), ConfigError);
}

TEST(DenseBackend, discriminator_error_biases_feedforward) {
    for (double alpha : {1.0, 0.5, 0.2}) {
        NoiseBinding b;
        b.discriminator = 0.03;
        auto r = run_dense(feedforward_circuit(alpha), b);
        // A misread trigger leaves the data qubit in the wrong state.
        EXPECT_NEAR(r.expectation(PauliString::from_label("ZI")), 1 - 2 * 0.03, 1e-12) << alpha;
        // The ancilla itself never sees the control wire.
        EXPECT_NEAR(r.expectation(PauliString::from_label("IZ")), 2 * alpha - 1, 1e-12) << alpha;
    }
}

TEST(Ptm, identity_channel) {
    for (int n = 1; n <= 2; n++) {
        auto basis = ptm_basis(n);
        auto r = ptm_of(DynamicCircuit(n, 0), NoiseBinding{}, basis);
        EXPECT_LT((r - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff(), 1e-14);
    }
    EXPECT_THROW(ptm_basis(kPtmMaxQubits + 1), ConfigError);
}

TEST(Ptm, basis_order_puts_ancilla_diagonal_paulis_first) {
    std::vector<std::string> labels;
    for (const auto &p : ptm_basis(2, {1})) labels.push_back(p.label());
    std::vector<std::string> head(labels.begin(), labels.begin() + 11);
    EXPECT_EQ(head, (std::vector<std::string>{"II", "IZ", "XI", "XZ", "YI", "YZ", "ZI", "ZZ", "IX", "IY", "XX"}));
}

TEST(Ptm, twirled_identity_feedforward_measurement_has_seven_fidelities) {
    NoiseBinding b;
    b.layers.emplace("meas", NoiseModel(GeneratorSet::from_labels({0, 1}, {"XI", "IX", "ZX", "YY"}), {0.03, 0.05, 0.02, 0.04}));
    b.coherent["meas"] = {CoherentTerm{PauliString::from_label("ZI"), 0.2}, CoherentTerm{PauliString::from_label("XX"), 0.1}};
    auto c = pair_measurement();
    auto basis = ptm_basis(2, {1});
    auto r = twirl_averaged_ptm(c, 0, b, basis);
    int nonzero = 0;
    for (size_t a = 0; a < basis.size(); a++) {
        for (size_t k = 0; k < basis.size(); k++) {
            if (a != k) EXPECT_LT(std::abs(r(a, k)), 1e-10);
        }
        if (a > 0 && std::abs(r(a, a)) > 1e-10) {
            nonzero++;
            char anc = basis[a].get(1);
            EXPECT_TRUE(anc == 'I' || anc == 'Z') << basis[a].label();
        }
    }
    EXPECT_EQ(nonzero, 7);

    // Untwirled, the coherent term leaves off-diagonal weight.
    auto raw = ptm_of(c, b, basis);
    EXPECT_GT((raw - Eigen::MatrixXd(raw.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Ptm, untwirled_feedforward_has_two_by_two_blocks) {
    auto c = pair_measurement({FeedforwardRule{0, 1, "x", 0}});
    auto basis = ptm_basis(2, {1});
    auto r = ptm_of(c, NoiseBinding{}, basis);

    // Kraus oracle: sum_m (X^m (x) I) P_m rho P_m (X^m (x) I).
    Mat p0 = (label_matrix("II") + label_matrix("IZ")) / 2, p1 = (label_matrix("II") - label_matrix("IZ")) / 2;
    Mat x = label_matrix("XI");
    auto oracle = ptm_of([&](const CMatrix &rho) -> CMatrix { return p0 * rho * p0 + x * p1 * rho * p1 * x; }, basis);
    EXPECT_LT((r - oracle).cwiseAbs().maxCoeff(), 1e-12);

    // Inputs with ancilla X or Y are destroyed; the rest pair P(x)I with P(x)Z.
    for (size_t a = 0; a < basis.size(); a++) {
        for (size_t k = 0; k < basis.size(); k++) {
            bool same_data = basis[a].get(0) == basis[k].get(0);
            bool diag_anc = (basis[a].get(1) == 'I' || basis[a].get(1) == 'Z') &&
                            (basis[k].get(1) == 'I' || basis[k].get(1) == 'Z');
            if (!(same_data && diag_anc)) EXPECT_NEAR(r(a, k), 0.0, 1e-14) << basis[a].label() << " " << basis[k].label();
        }
    }
    auto at = [&](const char *out, const char *in) {
        size_t i = 0, j = 0;
        for (size_t k = 0; k < basis.size(); k++) {
            if (basis[k].label() == out) i = k;
            if (basis[k].label() == in) j = k;
        }
        return r(i, j);
    };
    EXPECT_NEAR(at("XI", "XI"), 1, 1e-12);
    EXPECT_NEAR(at("XZ", "XZ"), 1, 1e-12);
    EXPECT_NEAR(at("ZI", "ZZ"), 1, 1e-12);
    EXPECT_NEAR(at("ZZ", "ZI"), 1, 1e-12);
    EXPECT_NEAR(at("ZI", "ZI"), 0, 1e-12);
    EXPECT_NEAR(at("YZ", "YI"), 1, 1e-12);
}

TEST(TrajectoryBackend, bell_pair_counts) {
    auto batch = run_trajectories(bell(), NoiseBinding{}, 4000, 3);
    auto counts = batch.counts();
    ASSERT_EQ(counts.size(), 2u);
    EXPECT_TRUE(counts.contains("00"));
    EXPECT_TRUE(counts.contains("11"));
    EXPECT_NEAR(counts["00"] / 4000.0, 0.5, 0.04);
    EXPECT_EQ(outcome_key(0b10, 2, 0b001, 3), "01 100");
    EXPECT_EQ(batch.counts_json().size(), 2u);
}

TEST(TrajectoryBackend, rejects_non_clifford_and_coherent) {
    DynamicCircuit t(1, 0);
    t.append(Layer::unitary({{"t", {0}}}));
    EXPECT_THROW(run_trajectories(t, NoiseBinding{}, 10, 0), ConfigError);
    NoiseBinding coh;
    coh.coherent["cx"] = {CoherentTerm{PauliString::from_label("ZI"), 0.1}};
    EXPECT_THROW(run_trajectories(feedforward_circuit(1), coh, 10, 0), ConfigError);
}

TEST(TrajectoryBackend, agrees_with_dense_on_random_circuits) {
    Rng rng(2024);
    const size_t shots = 20000;
    for (int trial = 0; trial < 12; trial++) {
        auto [c, binding] = random_dynamic_circuit(rng);
        auto dense = run_dense(c, binding).outcome_distribution(&binding);
        auto batch = run_trajectories(c, binding, shots, 100 + trial);
        EXPECT_LT(total_variation(dense, batch), 4 / std::sqrt(static_cast<double>(shots))) << c.serialize();
        TrajectoryOptions slow;
        slow.force_tableau = true;
        auto tab = run_trajectories(c, binding, shots, 900 + trial, slow);
        EXPECT_LT(total_variation(dense, tab), 4 / std::sqrt(static_cast<double>(shots))) << c.serialize();
    }
}

TEST(TrajectoryBackend, clifford_feedforward_uses_tableau_path) {
    DynamicCircuit c(2, 1);
    c.append(Layer::unitary({{"h", {1}}}));
    c.append(Layer::measurement({1}, {0}, {FeedforwardRule{0, 1, "h", 0}}));
    EXPECT_FALSE(frame_simulable(c));
    EXPECT_TRUE(frame_simulable(feedforward_circuit(0.5)));
    auto dense = run_dense(c, NoiseBinding{}).outcome_distribution();
    auto batch = run_trajectories(c, NoiseBinding{}, 20000, 5);
    EXPECT_LT(total_variation(dense, batch), 4 / std::sqrt(20000.0));
}

TEST(TrajectoryBackend, deterministic_across_worker_counts) {
    Rng rng(8);
    for (int trial = 0; trial < 4; trial++) {
        auto [c, binding] = random_dynamic_circuit(rng);
        TrajectoryOptions one, many;
        many.workers = 4;
        auto a = run_trajectories(c, binding, 5000, 77, one);
        auto b = run_trajectories(c, binding, 5000, 77, many);
        ASSERT_EQ(a.size(), b.size());
        for (size_t i = 0; i < a.size(); i++) {
            ASSERT_EQ(a.shots[i].clbits, b.shots[i].clbits);
            ASSERT_EQ(a.shots[i].terminal, b.shots[i].terminal);
        }
        EXPECT_EQ(a.counts_json().dump(), b.counts_json().dump());
    }
}

TEST(TrajectoryBackend, planted_measurement_noise_decays_at_predicted_rate) {
    const double lambda = 0.05;
    NoiseBinding b;
    b.layers.emplace("m", NoiseModel(GeneratorSet::from_labels({0}, {"X"}), {lambda}));
    const size_t shots = 200000;
    for (int k : {1, 4, 8}) {
        DynamicCircuit c(1, 1);
        for (int i = 0; i < k; i++) c.append(Layer::measurement({0}, {0}, {}, "m"));
        double predicted = std::pow(b.layers.at("m").predict_fidelity(PauliString::from_label("Z")), k);
        EXPECT_NEAR(predicted, std::exp(-2 * lambda * k), 1e-14);
        auto batch = run_trajectories(c, b, shots, k);
        double e = expectation(batch, PauliString::from_label("Z"));
        EXPECT_NEAR(e, predicted, 4 * std::sqrt((1 - predicted * predicted) / shots)) << k;
        EXPECT_NEAR(run_dense(c, b).expectation(PauliString::from_label("Z")), predicted, 1e-12);
    }
}

TEST(Expectation, software_recovery_sign_examples) {
    std::vector<FeedforwardRule> x{{0, 1, "x", 0}};
    EXPECT_EQ(software_recovery_sign(x, 1, PauliString::from_label("Z")), -1);
    EXPECT_EQ(software_recovery_sign(x, 1, PauliString::from_label("X")), 1);
    EXPECT_EQ(software_recovery_sign(x, 0, PauliString::from_label("Z")), 1);
    auto stab = tile_stabilizers();
    // X recovery on data 0 flips the first Z check, not the second.
    EXPECT_EQ(software_recovery_sign(tile_recovery(), 0b01, stab[0]), -1);
    EXPECT_EQ(software_recovery_sign(tile_recovery(), 0b01, stab[1]), 1);
    EXPECT_EQ(software_recovery_sign(tile_recovery(), 0b11, stab[1]), -1);
    EXPECT_THROW(software_recovery_sign({{0, 1, "h", 0}}, 1, PauliString::from_label("Z")), ConfigError);
}

TEST(Expectation, counts_examples) {
    ShotBatch zeros;
    zeros.num_qubits = 1;
    zeros.shots.assign(10, ShotRecord{});
    EXPECT_EQ(expectation(zeros, PauliString::from_label("Z")), 1.0);
    ShotBatch ones = zeros;
    ones.num_clbits = 1;
    for (auto &s : ones.shots) s.clbits = 1;
    EXPECT_EQ(expectation(ones, PauliString::from_label("Z"), {{0, 1, "x", 0}}), -1.0);
    EXPECT_EQ(expectation(ones, PauliString::from_label("Z"), {{0, 1, "x", 0}}, 1), 1.0);
}

TEST(Expectation, tile_stabilizers_are_one_with_software_recovery) {
    DenseOptions ideal;
    ideal.ideal = true;
    auto r = run_dense(tile_circuit(), NoiseBinding{}, {}, ideal);
    ASSERT_EQ(tile_stabilizers().size(), 4u);
    for (const auto &s : tile_stabilizers()) EXPECT_NEAR(r.expectation(s, tile_recovery()), 1.0, 1e-12) << s.label();
    // Without recovery the Z checks average to zero.
    EXPECT_NEAR(r.expectation(tile_stabilizers()[0]), 0.0, 1e-12);
}

TEST(Expectation, hardware_and_software_recovery_agree) {
    Rng rng(5);
    auto c = tile_circuit();
    NoiseBinding b;
    for (const auto &label : c.pec_labels()) {
        auto support = layer_support(c.layers()[c.layer_index(label)]);
        std::vector<PauliString> gens;
        std::vector<double> lambdas;
        for (size_t j = 0; j < support.size(); j++) {
            gens.push_back(PauliString::single(support.size(), j, "XYZ"[rng.below(3)]));
            lambdas.push_back(0.05 * rng.uniform());
        }
        b.layers.emplace(label, NoiseModel(GeneratorSet(support, gens), lambdas));
    }
    b.discriminator = 0.02;
    DynamicCircuit hw = c;
    hw.append(Layer::conditional(tile_recovery()));
    auto soft = run_dense(c, b);
    auto hard = run_dense(hw, b);
    for (const auto &s : tile_stabilizers()) {
        EXPECT_NEAR(soft.expectation(s, tile_recovery()), hard.expectation(s), 1e-12) << s.label();
    }
    // Z checks need no basis change, so the trajectory backend can compare them too.
    auto ts = run_trajectories(c, b, 20000, 1);
    auto th = run_trajectories(hw, b, 20000, 1);
    EXPECT_NEAR(expectation(ts, tile_stabilizers()[0], tile_recovery()), expectation(th, tile_stabilizers()[0]),
                6 / std::sqrt(20000.0));
}
