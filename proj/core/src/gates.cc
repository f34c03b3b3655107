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

#include "dynpec/gates.h"

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "dynpec/error.h"

namespace dynpec {

namespace {

using cd = std::complex<double>;
const cd kI(0.0, 1.0);

const std::map<std::string, GateInfo, std::less<>> &gate_table() {
    static const std::map<std::string, GateInfo, std::less<>> table = [] {
        std::map<std::string, GateInfo, std::less<>> t;
        auto add = [&](std::string name, size_t arity, size_t params, bool clifford) {
            t.emplace(name, GateInfo{name, arity, params, clifford});
        };
        for (const char *g : {"i", "x", "y", "z", "h", "s", "sdg", "sx", "sxdg", "tdg_x_t", "t_x_tdg_x"}) add(g, 1, 0, true);
        add("t", 1, 0, false);
        add("tdg", 1, 0, false);
        add("rx", 1, 1, false);
        add("ry", 1, 1, false);
        add("rz", 1, 1, false);
        add("cx", 2, 0, true);
        add("cz", 2, 0, true);
        add("swap", 2, 0, true);
        add("ccx", 3, 0, false);
        return t;
    }();
    return table;
}

CMatrix mat2(cd a, cd b, cd c, cd d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CMatrix t_gate(bool dagger) { return mat2(1, 0, 0, std::exp((dagger ? -1.0 : 1.0) * kI * M_PI / 4.0)); }

}  // namespace

const GateInfo &gate_info(std::string_view name) {
    const auto &table = gate_table();
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown gate '" + std::string(name) + "'");
    return it->second;
}

bool is_known_gate(std::string_view name) { return gate_table().contains(name); }

CMatrix gate_unitary(std::string_view name, std::span<const double> params) {
    const GateInfo &info = gate_info(name);
    if (params.size() != info.num_params) {
        throw ConfigError("gate '" + info.name + "' expects " + std::to_string(info.num_params) + " parameter(s)");
    }
    const double r = 1.0 / std::sqrt(2.0);
    if (name == "i") return CMatrix::Identity(2, 2);
    if (name == "x") return mat2(0, 1, 1, 0);
    if (name == "y") return mat2(0, -kI, kI, 0);
    if (name == "z") return mat2(1, 0, 0, -1);
    if (name == "h") return mat2(r, r, r, -r);
    if (name == "s") return mat2(1, 0, 0, kI);
    if (name == "sdg") return mat2(1, 0, 0, -kI);
    if (name == "t") return t_gate(false);
    if (name == "tdg") return t_gate(true);
    if (name == "sx") return 0.5 * mat2(1.0 + kI, 1.0 - kI, 1.0 - kI, 1.0 + kI);
    if (name == "sxdg") return 0.5 * mat2(1.0 - kI, 1.0 + kI, 1.0 + kI, 1.0 - kI);
    if (name == "tdg_x_t") {
        // Circuit order T^dag, X, T: operator T X T^dag.
        return t_gate(false) * mat2(0, 1, 1, 0) * t_gate(true);
    }
    if (name == "t_x_tdg_x") {
        // Circuit order T, X, T^dag, X: operator X T^dag X T.
        CMatrix x = mat2(0, 1, 1, 0);
        return x * t_gate(true) * x * t_gate(false);
    }
    if (name == "rx" || name == "ry" || name == "rz") {
        double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
        if (name == "rx") return mat2(c, -kI * s, -kI * s, c);
        if (name == "ry") return mat2(c, -s, s, c);
        return mat2(std::exp(-kI * params[0] / 2.0), 0, 0, std::exp(kI * params[0] / 2.0));
    }
    if (name == "cx" || name == "cz" || name == "swap") {
        CMatrix m = CMatrix::Zero(4, 4);
        for (int i = 0; i < 4; i++) {
            int b0 = i & 1, b1 = (i >> 1) & 1;
            if (name == "cx") {
                m(b0 ? (i ^ 2) : i, i) = 1;
            } else if (name == "cz") {
                m(i, i) = (b0 && b1) ? -1 : 1;
            } else {
                m((b0 << 1) | b1, i) = 1;
            }
        }
        return m;
    }
    if (name == "ccx") {
        CMatrix m = CMatrix::Zero(8, 8);
        for (int i = 0; i < 8; i++) m(((i & 3) == 3) ? (i ^ 4) : i, i) = 1;
        return m;
    }
    throw ConfigError("no unitary for gate '" + std::string(name) + "'");
}

std::optional<CliffordOp> gate_clifford(std::string_view name) {
    static std::mutex mu;
    static std::map<std::string, CliffordOp, std::less<>> cache;
    const GateInfo &info = gate_info(name);
    if (!info.clifford) return std::nullopt;
    std::lock_guard lock(mu);
    auto it = cache.find(name);
    if (it == cache.end()) {
        it = cache.emplace(std::string(name), clifford_from_unitary(gate_unitary(name))).first;
    }
    return it->second;
}

CMatrix pauli_matrix(const PauliString &p) {
    size_t n = p.num_qubits();
    if (n > 12) throw std::invalid_argument("pauli_matrix: too many qubits");
    size_t dim = size_t{1} << n;
    uint64_t xm = p.x_mask(), zm = p.z_mask();
    int base = p.phase() + std::popcount(xm & zm);
    static const cd powers[4] = {1.0, kI, -1.0, -kI};
    CMatrix m = CMatrix::Zero(dim, dim);
    for (size_t c = 0; c < dim; c++) {
        int e = base + 2 * (std::popcount(zm & c) & 1);
        m(c ^ xm, c) = powers[e & 3];
    }
    return m;
}

CliffordOp clifford_from_unitary(const CMatrix &u, double tol) {
    size_t dim = u.rows();
    size_t n = std::countr_zero(dim);
    if (u.cols() != u.rows() || (size_t{1} << n) != dim || n == 0 || n > 4) {
        throw std::invalid_argument("clifford_from_unitary: expected a 2^n x 2^n matrix with 1 <= n <= 4");
    }
    if (!(u.adjoint() * u).isApprox(CMatrix::Identity(dim, dim), tol)) {
        throw std::invalid_argument("clifford_from_unitary: matrix is not unitary");
    }
    auto basis = all_paulis(n);
    auto image_of = [&](const PauliString &g) {
        CMatrix m = u * pauli_matrix(g) * u.adjoint();
        for (const auto &p : basis) {
            cd c = (pauli_matrix(p).adjoint() * m).trace() / static_cast<double>(dim);
            if (std::abs(std::abs(c) - 1.0) < tol) {
                if (std::abs(c.imag()) > tol) break;
                PauliString out = p;
                out.set_phase(c.real() > 0 ? 0 : 2);
                return out;
            }
            if (std::abs(c) > tol) break;
        }
        throw std::invalid_argument("clifford_from_unitary: unitary does not map Paulis to Paulis");
    };
    std::vector<PauliString> xs, zs;
    for (size_t q = 0; q < n; q++) {
        xs.push_back(image_of(PauliString::single(n, q, 'X')));
        zs.push_back(image_of(PauliString::single(n, q, 'Z')));
    }
    return CliffordOp::from_images(std::move(xs), std::move(zs));
}

}  // namespace dynpec
