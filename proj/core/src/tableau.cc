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

#include "dynpec/tableau.h"

#include <bit>
#include <map>
#include <mutex>
#include <string>

#include "dynpec/clifford.h"
#include "dynpec/error.h"
#include "dynpec/gates.h"

namespace dynpec {

namespace {

/// H/S word plus trailing Pauli reproducing a single-qubit Clifford exactly.
std::vector<PrimOp> lower_single(std::string_view name) {
    auto target = gate_clifford(name);
    if (!target) throw ConfigError("gate '" + std::string(name) + "' is not Clifford");
    const CliffordOp H = CliffordOp::h(1, 0), S = CliffordOp::s(1, 0);
    // Breadth-first over H/S words; six cosets of the Pauli group exist so
    // length 3 suffices.
    std::vector<std::vector<PrimOp>> frontier = {{}};
    for (int len = 0; len <= 4; len++) {
        std::vector<std::vector<PrimOp>> next;
        for (const auto &word : frontier) {
            CliffordOp w = CliffordOp::identity(1);
            for (PrimOp p : word) w = w.then(p == PrimOp::H ? H : S);
            if (w.x_image(0).same_pauli(target->x_image(0)) && w.z_image(0).same_pauli(target->z_image(0))) {
                bool flip_x = w.x_image(0).phase() != target->x_image(0).phase();
                bool flip_z = w.z_image(0).phase() != target->z_image(0).phase();
                std::vector<PrimOp> out = word;
                // A trailing Pauli flips the sign of every image it anticommutes with.
                for (PrimOp p : {PrimOp::X, PrimOp::Y, PrimOp::Z}) {
                    char c = p == PrimOp::X ? 'X' : p == PrimOp::Y ? 'Y' : 'Z';
                    PauliString pp = PauliString::single(1, 0, c);
                    if (!commutes(pp, w.x_image(0)) == flip_x && !commutes(pp, w.z_image(0)) == flip_z) {
                        out.push_back(p);
                        return out;
                    }
                }
                if (!flip_x && !flip_z) return out;
            }
            for (PrimOp p : {PrimOp::H, PrimOp::S}) {
                auto extended = word;
                extended.push_back(p);
                next.push_back(std::move(extended));
            }
        }
        frontier = std::move(next);
    }
    throw std::logic_error("no H/S lowering found for gate '" + std::string(name) + "'");
}

}  // namespace

std::vector<Prim> lower_clifford_gate(std::string_view name, const std::vector<int> &qubits) {
    const GateInfo &info = gate_info(name);
    if (!info.clifford) throw ConfigError("gate '" + std::string(name) + "' is not Clifford");
    if (qubits.size() != info.arity) throw ConfigError("gate '" + std::string(name) + "' has the wrong arity");
    if (name == "cx") return {{PrimOp::CX, qubits[0], qubits[1]}};
    if (name == "cz") {
        return {{PrimOp::H, qubits[1]}, {PrimOp::CX, qubits[0], qubits[1]}, {PrimOp::H, qubits[1]}};
    }
    if (name == "swap") {
        return {{PrimOp::CX, qubits[0], qubits[1]}, {PrimOp::CX, qubits[1], qubits[0]}, {PrimOp::CX, qubits[0], qubits[1]}};
    }
    static std::mutex mu;
    static std::map<std::string, std::vector<PrimOp>, std::less<>> cache;
    std::vector<PrimOp> ops;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(name);
        if (it == cache.end()) it = cache.emplace(std::string(name), lower_single(name)).first;
        ops = it->second;
    }
    std::vector<Prim> out;
    for (PrimOp p : ops) out.push_back(Prim{p, qubits[0]});
    return out;
}

Tableau::Tableau(int num_qubits) : n_(num_qubits), rows_(2 * num_qubits) {
    if (num_qubits < 0 || num_qubits > 64) throw ConfigError("tableau supports at most 64 qubits");
    for (int q = 0; q < n_; q++) {
        rows_[q].x = 1ULL << q;
        rows_[n_ + q].z = 1ULL << q;
    }
}

void Tableau::h(int q) {
    const uint64_t b = 1ULL << q;
    for (auto &row : rows_) {
        bool xb = row.x & b, zb = row.z & b;
        if (xb && zb) row.r = !row.r;
        row.x = (row.x & ~b) | (zb ? b : 0);
        row.z = (row.z & ~b) | (xb ? b : 0);
    }
}

void Tableau::s(int q) {
    const uint64_t b = 1ULL << q;
    for (auto &row : rows_) {
        bool xb = row.x & b, zb = row.z & b;
        if (xb && zb) row.r = !row.r;
        if (xb) row.z ^= b;
    }
}

void Tableau::cx(int c, int t) {
    const uint64_t bc = 1ULL << c, bt = 1ULL << t;
    for (auto &row : rows_) {
        bool xc = row.x & bc, zc = row.z & bc, xt = row.x & bt, zt = row.z & bt;
        if (xc && zt && (xt == zc)) row.r = !row.r;
        if (xc) row.x ^= bt;
        if (zt) row.z ^= bc;
    }
}

void Tableau::x(int q) {
    for (auto &row : rows_) {
        if (row.z >> q & 1) row.r = !row.r;
    }
}

void Tableau::z(int q) {
    for (auto &row : rows_) {
        if (row.x >> q & 1) row.r = !row.r;
    }
}

void Tableau::y(int q) {
    for (auto &row : rows_) {
        if (((row.x ^ row.z) >> q) & 1) row.r = !row.r;
    }
}

void Tableau::apply(const Prim &p) {
    switch (p.op) {
        case PrimOp::H: h(p.a); break;
        case PrimOp::S: s(p.a); break;
        case PrimOp::CX: cx(p.a, p.b); break;
        case PrimOp::X: x(p.a); break;
        case PrimOp::Y: y(p.a); break;
        case PrimOp::Z: z(p.a); break;
    }
}

void Tableau::apply_pauli(uint64_t x_mask, uint64_t z_mask) {
    for (auto &row : rows_) {
        if (std::popcount((row.x & z_mask) ^ (row.z & x_mask)) & 1) row.r = !row.r;
    }
}

void Tableau::rowsum(Row &h, const Row &i) {
    const uint64_t px = i.x, pz = i.z, qx = h.x, qz = h.z;
    const uint64_t p_x = px & ~pz, p_y = px & pz, p_z = ~px & pz;
    const uint64_t q_x = qx & ~qz, q_y = qx & qz, q_z = ~qx & qz;
    const uint64_t plus = (p_x & q_y) | (p_y & q_z) | (p_z & q_x);
    const uint64_t minus = (p_x & q_z) | (p_y & q_x) | (p_z & q_y);
    int phase = 2 * (i.r ? 1 : 0) + 2 * (h.r ? 1 : 0) + std::popcount(plus) - std::popcount(minus);
    phase = ((phase % 4) + 4) % 4;
    h.r = phase >= 2;
    h.x ^= i.x;
    h.z ^= i.z;
}

std::pair<int, bool> Tableau::measure(int q, Rng *rng) {
    const uint64_t b = 1ULL << q;
    int p = -1;
    for (int i = n_; i < 2 * n_; i++) {
        if (rows_[i].x & b) {
            p = i;
            break;
        }
    }
    if (p >= 0) {
        for (int i = 0; i < 2 * n_; i++) {
            if (i != p && (rows_[i].x & b)) rowsum(rows_[i], rows_[p]);
        }
        rows_[p - n_] = rows_[p];
        int outcome = rng ? static_cast<int>((*rng)() >> 63) : 0;
        rows_[p] = Row{0, b, outcome == 1};
        return {outcome, true};
    }
    Row scratch;
    for (int i = 0; i < n_; i++) {
        if (rows_[i].x & b) rowsum(scratch, rows_[i + n_]);
    }
    return {scratch.r ? 1 : 0, false};
}

int Tableau::peek_z(int q) const {
    const uint64_t b = 1ULL << q;
    for (int i = n_; i < 2 * n_; i++) {
        if (rows_[i].x & b) return 0;
    }
    Row scratch;
    for (int i = 0; i < n_; i++) {
        if (rows_[i].x & b) rowsum(scratch, rows_[i + n_]);
    }
    return scratch.r ? -1 : 1;
}

PauliString Tableau::stabilizer(int i) const {
    const Row &row = rows_[n_ + i];
    return PauliString::from_bits(n_, row.x, row.z, row.r ? 2 : 0);
}

}  // namespace dynpec
