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

#include "dynpec/pauli.h"

#include "gtest/gtest.h"

#include "dynpec/clifford.h"
#include "dynpec/error.h"
#include "dynpec/gates.h"
#include "test_util.h"

using namespace dynpec;
using dynpec::testing::label_matrix;
using dynpec::testing::Mat;

namespace {

Mat phase_factor(uint8_t phase) {
    static const std::complex<double> powers[4] = {1.0, {0, 1}, -1.0, {0, -1}};
    return Mat::Identity(1, 1) * powers[phase & 3];
}

/// Independent matrix of a PauliString, built from its label.
Mat matrix_of(const PauliString &p) {
    std::string label;
    for (size_t q = 0; q < p.num_qubits(); q++) label.push_back(p.get(q));
    return phase_factor(p.phase())(0, 0) * label_matrix(label);
}

PauliString random_pauli(size_t n, Rng &rng) {
    PauliString p(n);
    for (size_t q = 0; q < n; q++) p.set(q, "IXYZ"[rng.below(4)]);
    return p;
}

}  // namespace

TEST(PauliString, label_round_trip) {
    for (const char *label : {"XZ", "II", "YXZI", "-Y", "iZ", "-iXX"}) {
        EXPECT_EQ(PauliString::from_label(label).label(), std::string(label));
    }
    auto xz = PauliString::from_label("XZ");
    EXPECT_TRUE(xz.x(0));
    EXPECT_FALSE(xz.z(0));
    EXPECT_FALSE(xz.x(1));
    EXPECT_TRUE(xz.z(1));
    EXPECT_TRUE(PauliString::from_label("II").is_identity());
    auto my = PauliString::from_label("-Y");
    EXPECT_EQ(my.phase(), 2);
    EXPECT_EQ(my.sign(), -1);
    EXPECT_TRUE(my.x(0) && my.z(0));
}

TEST(PauliString, label_errors) {
    EXPECT_THROW(PauliString::from_label(""), ConfigError);
    EXPECT_THROW(PauliString::from_label("XQ"), ConfigError);
    EXPECT_THROW(PauliString::from_label("-"), ConfigError);
}

TEST(PauliString, symplectic_examples) {
    EXPECT_EQ(symplectic_product(PauliString::from_label("X"), PauliString::from_label("Z")), 1);
    EXPECT_EQ(symplectic_product(PauliString::from_label("XI"), PauliString::from_label("IZ")), 0);
    EXPECT_EQ(symplectic_product(PauliString::from_label("XX"), PauliString::from_label("ZZ")), 0);
    Mat xx = label_matrix("XX"), zz = label_matrix("ZZ");
    EXPECT_LT((xx * zz - zz * xx).norm(), 1e-12);
    EXPECT_THROW(symplectic_product(PauliString::from_label("X"), PauliString::from_label("XX")),
                 std::invalid_argument);
}

TEST(PauliString, symplectic_matches_matrix_commutation) {
    Rng rng(11);
    for (int trial = 0; trial < 300; trial++) {
        size_t n = 1 + rng.below(3);
        auto p = random_pauli(n, rng), q = random_pauli(n, rng);
        Mat a = matrix_of(p), b = matrix_of(q);
        bool commute = (a * b - b * a).norm() < 1e-9;
        EXPECT_EQ(symplectic_product(p, q), commute ? 0 : 1) << p.label() << " " << q.label();
    }
}

TEST(PauliString, multiply_examples) {
    auto xz = PauliString::from_label("X") * PauliString::from_label("Z");
    EXPECT_EQ(xz.label(), "-iY");
    Mat expected = label_matrix("X") * label_matrix("Z");
    EXPECT_LT((matrix_of(xz) - expected).norm(), 1e-12);
    auto p = PauliString::from_label("XYZ");
    EXPECT_EQ(p * PauliString::from_label("III"), p);
    auto pp = p * p;
    EXPECT_TRUE(pp.is_identity());
    EXPECT_EQ(pp.phase(), 0);
}

TEST(PauliString, multiply_matches_matrix_product_and_is_associative) {
    Rng rng(5);
    for (int trial = 0; trial < 300; trial++) {
        size_t n = 1 + rng.below(3);
        auto p = random_pauli(n, rng), q = random_pauli(n, rng), r = random_pauli(n, rng);
        p.set_phase(rng.below(4));
        EXPECT_LT((matrix_of(p * q) - matrix_of(p) * matrix_of(q)).norm(), 1e-9);
        EXPECT_EQ((p * q) * r, p * (q * r));
    }
}

TEST(PauliString, embed_and_restrict) {
    auto local = PauliString::from_label("XZ");
    std::vector<int> qubits = {3, 1};
    auto g = embed(local, qubits, 5);
    EXPECT_EQ(g.label(), "IZIXI");
    EXPECT_EQ(restrict_to(g, qubits), local);
    EXPECT_EQ(all_paulis(2).size(), 16u);
    EXPECT_EQ(all_paulis(2)[1].label(), "IX");
}

TEST(CliffordOp, conjugate_examples) {
    auto h = CliffordOp::h(1, 0);
    EXPECT_EQ(h.conjugate(PauliString::from_label("X")).label(), "Z");
    auto cx = CliffordOp::cx(2, 0, 1);
    EXPECT_EQ(cx.conjugate(PauliString::from_label("XI")).label(), "XX");
    EXPECT_EQ(cx.conjugate(PauliString::from_label("IZ")).label(), "ZZ");

    // 4x4 conjugation oracle; control is bit 0.
    Mat u = Mat::Zero(4, 4);
    for (int c = 0; c < 2; c++) {
        for (int t = 0; t < 2; t++) u((c | ((t ^ c) << 1)), (c | (t << 1))) = 1;
    }
    for (const char *label : {"XI", "IZ", "YI", "IY", "XY", "ZZ"}) {
        auto p = PauliString::from_label(label);
        EXPECT_LT((matrix_of(cx.conjugate(p)) - u * matrix_of(p) * u.adjoint()).norm(), 1e-12) << label;
    }
}

TEST(CliffordOp, random_cliffords_are_valid_and_preserve_commutation) {
    Rng rng(21);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + rng.below(4);
        auto c = CliffordOp::random(n, rng);
        ASSERT_TRUE(c.is_valid());
        EXPECT_TRUE(c.then(c.inverse()).is_identity());
        EXPECT_TRUE(c.inverse().then(c).is_identity());
        auto p = random_pauli(n, rng), q = random_pauli(n, rng);
        EXPECT_EQ(symplectic_product(p, q), symplectic_product(c.conjugate(p), c.conjugate(q)));
        EXPECT_EQ(c.conjugate(p * q), c.conjugate(p) * c.conjugate(q));
    }
}

TEST(CliffordOp, tabulated_gates_match_their_unitaries) {
    for (const char *name : {"h", "s", "sdg", "sx", "sxdg", "x", "y", "z", "tdg_x_t", "t_x_tdg_x", "cx", "cz", "swap"}) {
        auto c = gate_clifford(name);
        ASSERT_TRUE(c.has_value()) << name;
        Mat u = gate_unitary(name);
        for (const auto &p : all_paulis(c->num_qubits())) {
            EXPECT_LT((matrix_of(c->conjugate(p)) - u * matrix_of(p) * u.adjoint()).norm(), 1e-9) << name << " " << p.label();
        }
    }
    EXPECT_FALSE(gate_clifford("t").has_value());
}
