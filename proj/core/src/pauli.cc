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

#include <bit>

#include "dynpec/error.h"
#include "dynpec/rng.h"

namespace dynpec {

namespace {

size_t num_words(size_t n) { return (n + 63) / 64; }

void check_same_size(const PauliString &p, const PauliString &q, const char *what) {
    if (p.num_qubits() != q.num_qubits()) {
        throw std::invalid_argument(std::string(what) + ": qubit count mismatch (" + std::to_string(p.num_qubits()) +
                                    " vs " + std::to_string(q.num_qubits()) + ")");
    }
}

}  // namespace

PauliString::PauliString(size_t num_qubits) : n_(num_qubits), xs_(num_words(num_qubits), 0), zs_(num_words(num_qubits), 0) {}

PauliString PauliString::from_label(std::string_view label) {
    uint8_t phase = 0;
    if (label.starts_with("+i")) {
        phase = 1;
        label.remove_prefix(2);
    } else if (label.starts_with("-i")) {
        phase = 3;
        label.remove_prefix(2);
    } else if (label.starts_with("+")) {
        label.remove_prefix(1);
    } else if (label.starts_with("-")) {
        phase = 2;
        label.remove_prefix(1);
    } else if (label.starts_with("i")) {
        phase = 1;
        label.remove_prefix(1);
    }
    if (label.empty()) {
        throw ConfigError("empty Pauli label");
    }
    PauliString p(label.size());
    for (size_t q = 0; q < label.size(); q++) {
        char c = label[q];
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw ConfigError("invalid character '" + std::string(1, c) + "' in Pauli label");
        }
        p.set(q, c);
    }
    p.phase_ = phase;
    return p;
}

PauliString PauliString::single(size_t num_qubits, size_t qubit, char c) {
    if (qubit >= num_qubits) throw std::out_of_range("qubit index out of range");
    PauliString p(num_qubits);
    p.set(qubit, c);
    return p;
}

PauliString PauliString::from_bits(size_t num_qubits, uint64_t x_bits, uint64_t z_bits, uint8_t phase) {
    if (num_qubits > 64) throw std::invalid_argument("from_bits supports at most 64 qubits");
    PauliString p(num_qubits);
    uint64_t mask = num_qubits == 64 ? ~0ULL : ((1ULL << num_qubits) - 1);
    if (num_qubits > 0) {
        p.xs_[0] = x_bits & mask;
        p.zs_[0] = z_bits & mask;
    }
    p.phase_ = phase & 3;
    return p;
}

std::string PauliString::label() const {
    static constexpr const char *prefix[4] = {"", "i", "-", "-i"};
    std::string out = prefix[phase_];
    out.reserve(out.size() + n_);
    for (size_t q = 0; q < n_; q++) out.push_back(get(q));
    return out;
}

int PauliString::sign() const {
    if (phase_ & 1) throw std::logic_error("Pauli string " + label() + " is not Hermitian");
    return phase_ == 0 ? 1 : -1;
}

void PauliString::set_x(size_t q, bool v) {
    uint64_t bit = 1ULL << (q & 63);
    xs_[q >> 6] = v ? (xs_[q >> 6] | bit) : (xs_[q >> 6] & ~bit);
}

void PauliString::set_z(size_t q, bool v) {
    uint64_t bit = 1ULL << (q & 63);
    zs_[q >> 6] = v ? (zs_[q >> 6] | bit) : (zs_[q >> 6] & ~bit);
}

char PauliString::get(size_t q) const {
    static constexpr char table[4] = {'I', 'X', 'Z', 'Y'};
    return table[(x(q) ? 1 : 0) | (z(q) ? 2 : 0)];
}

void PauliString::set(size_t q, char p) {
    switch (p) {
        case 'I': set_x(q, false), set_z(q, false); break;
        case 'X': set_x(q, true), set_z(q, false); break;
        case 'Y': set_x(q, true), set_z(q, true); break;
        case 'Z': set_x(q, false), set_z(q, true); break;
        default: throw ConfigError("invalid Pauli character '" + std::string(1, p) + "'");
    }
}

bool PauliString::is_identity() const {
    for (size_t w = 0; w < xs_.size(); w++) {
        if (xs_[w] | zs_[w]) return false;
    }
    return true;
}

size_t PauliString::weight() const {
    size_t total = 0;
    for (size_t w = 0; w < xs_.size(); w++) total += std::popcount(xs_[w] | zs_[w]);
    return total;
}

std::vector<size_t> PauliString::support() const {
    std::vector<size_t> out;
    for (size_t q = 0; q < n_; q++) {
        if (x(q) || z(q)) out.push_back(q);
    }
    return out;
}

PauliString PauliString::unsigned_part() const {
    PauliString p = *this;
    p.phase_ = 0;
    return p;
}

bool PauliString::operator<(const PauliString &other) const {
    if (n_ != other.n_) return n_ < other.n_;
    // Compare qubit by qubit so the order agrees with label order (I < X < Y < Z).
    static constexpr int rank[4] = {0, 1, 3, 2};  // index = x | z<<1
    for (size_t q = 0; q < n_; q++) {
        int a = rank[(x(q) ? 1 : 0) | (z(q) ? 2 : 0)];
        int b = rank[(other.x(q) ? 1 : 0) | (other.z(q) ? 2 : 0)];
        if (a != b) return a < b;
    }
    return phase_ < other.phase_;
}

int symplectic_product(const PauliString &p, const PauliString &q) {
    check_same_size(p, q, "symplectic_product");
    auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
    uint64_t acc = 0;
    for (size_t w = 0; w < px.size(); w++) acc ^= (px[w] & qz[w]) ^ (pz[w] & qx[w]);
    return std::popcount(acc) & 1;
}

PauliString multiply(const PauliString &p, const PauliString &q) {
    check_same_size(p, q, "multiply");
    PauliString out(p.num_qubits());
    auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
    int phase = p.phase() + q.phase();
    for (size_t w = 0; w < px.size(); w++) {
        uint64_t p_x = px[w] & ~pz[w], p_y = px[w] & pz[w], p_z = ~px[w] & pz[w];
        uint64_t q_x = qx[w] & ~qz[w], q_y = qx[w] & qz[w], q_z = ~qx[w] & qz[w];
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders pick up -i.
        uint64_t plus = (p_x & q_y) | (p_y & q_z) | (p_z & q_x);
        uint64_t minus = (p_x & q_z) | (p_y & q_x) | (p_z & q_y);
        phase += std::popcount(plus) - std::popcount(minus);
    }
    for (size_t q2 = 0; q2 < p.num_qubits(); q2++) {
        out.set_x(q2, p.x(q2) ^ q.x(q2));
        out.set_z(q2, p.z(q2) ^ q.z(q2));
    }
    out.set_phase(static_cast<uint8_t>(((phase % 4) + 4) % 4));
    return out;
}

PauliString embed(const PauliString &local, std::span<const int> qubits, size_t num_qubits) {
    if (local.num_qubits() != qubits.size()) {
        throw std::invalid_argument("embed: local Pauli " + local.label() + " does not match a support of size " +
                                    std::to_string(qubits.size()));
    }
    PauliString out(num_qubits);
    for (size_t j = 0; j < qubits.size(); j++) {
        if (qubits[j] < 0 || static_cast<size_t>(qubits[j]) >= num_qubits) {
            throw std::out_of_range("embed: qubit " + std::to_string(qubits[j]) + " out of range");
        }
        out.set_x(qubits[j], local.x(j));
        out.set_z(qubits[j], local.z(j));
    }
    out.set_phase(local.phase());
    return out;
}

PauliString restrict_to(const PauliString &global, std::span<const int> qubits) {
    PauliString out(qubits.size());
    for (size_t j = 0; j < qubits.size(); j++) {
        if (qubits[j] < 0 || static_cast<size_t>(qubits[j]) >= global.num_qubits()) {
            throw std::out_of_range("restrict_to: qubit out of range");
        }
        out.set_x(j, global.x(qubits[j]));
        out.set_z(j, global.z(qubits[j]));
    }
    out.set_phase(global.phase());
    return out;
}

std::vector<PauliString> all_paulis(size_t num_qubits) {
    if (num_qubits > 12) throw std::invalid_argument("all_paulis: too many qubits to enumerate");
    static constexpr char order[4] = {'I', 'X', 'Y', 'Z'};
    size_t total = size_t{1} << (2 * num_qubits);
    std::vector<PauliString> out;
    out.reserve(total);
    for (size_t idx = 0; idx < total; idx++) {
        PauliString p(num_qubits);
        // Qubit 0 is the most significant base-4 digit so the list is in label order.
        for (size_t q = 0; q < num_qubits; q++) {
            size_t digit = (idx >> (2 * (num_qubits - 1 - q))) & 3;
            p.set(q, order[digit]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace dynpec

size_t std::hash<dynpec::PauliString>::operator()(const dynpec::PauliString &p) const noexcept {
    uint64_t h = dynpec::mix64(p.num_qubits() * 4 + p.phase());
    for (uint64_t w : p.x_words()) h = dynpec::mix64(h ^ w);
    for (uint64_t w : p.z_words()) h = dynpec::mix64(h ^ (w + 0x51ED27));
    return static_cast<size_t>(h);
}
