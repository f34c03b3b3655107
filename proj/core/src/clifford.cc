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

#include "dynpec/clifford.h"

#include <stdexcept>
#include <string>

namespace dynpec {

CliffordOp CliffordOp::identity(size_t n) {
    CliffordOp c;
    for (size_t q = 0; q < n; q++) {
        c.x_images_.push_back(PauliString::single(n, q, 'X'));
        c.z_images_.push_back(PauliString::single(n, q, 'Z'));
    }
    return c;
}

CliffordOp CliffordOp::from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images) {
    CliffordOp c;
    c.x_images_ = std::move(x_images);
    c.z_images_ = std::move(z_images);
    if (!c.is_valid()) throw std::invalid_argument("generator images do not define a Clifford");
    return c;
}

CliffordOp CliffordOp::h(size_t n, size_t q) {
    CliffordOp c = identity(n);
    c.x_images_[q] = PauliString::single(n, q, 'Z');
    c.z_images_[q] = PauliString::single(n, q, 'X');
    return c;
}

CliffordOp CliffordOp::s(size_t n, size_t q) {
    CliffordOp c = identity(n);
    c.x_images_[q] = PauliString::single(n, q, 'Y');
    return c;
}

CliffordOp CliffordOp::sdg(size_t n, size_t q) {
    CliffordOp c = identity(n);
    c.x_images_[q] = PauliString::single(n, q, 'Y');
    c.x_images_[q].set_phase(2);
    return c;
}

CliffordOp CliffordOp::pauli(size_t n, size_t q, char p) {
    CliffordOp c = identity(n);
    PauliString gate = PauliString::single(n, q, p);
    if (!commutes(gate, c.x_images_[q])) c.x_images_[q].set_phase(2);
    if (!commutes(gate, c.z_images_[q])) c.z_images_[q].set_phase(2);
    return c;
}

CliffordOp CliffordOp::cx(size_t n, size_t control, size_t target) {
    if (control == target) throw std::invalid_argument("cx: control equals target");
    CliffordOp c = identity(n);
    c.x_images_[control].set_x(target, true);  // X_c -> X_c X_t
    c.z_images_[target].set_z(control, true);  // Z_t -> Z_c Z_t
    return c;
}

CliffordOp CliffordOp::cz(size_t n, size_t a, size_t b) {
    if (a == b) throw std::invalid_argument("cz: repeated qubit");
    CliffordOp c = identity(n);
    c.x_images_[a].set_z(b, true);
    c.x_images_[b].set_z(a, true);
    return c;
}

CliffordOp CliffordOp::swap(size_t n, size_t a, size_t b) {
    CliffordOp c = identity(n);
    std::swap(c.x_images_[a], c.x_images_[b]);
    std::swap(c.z_images_[a], c.z_images_[b]);
    return c;
}

CliffordOp CliffordOp::random(size_t n, Rng &rng, size_t depth) {
    if (depth == 0) depth = 8 * n + 8;
    CliffordOp c = identity(n);
    for (size_t k = 0; k < depth; k++) {
        size_t kind = rng.below(n > 1 ? 4 : 3);
        size_t q = rng.below(n);
        if (kind == 0) {
            c = c.then(h(n, q));
        } else if (kind == 1) {
            c = c.then(s(n, q));
        } else if (kind == 2) {
            c = c.then(pauli(n, q, "XYZ"[rng.below(3)]));
        } else {
            size_t t = rng.below(n - 1);
            if (t >= q) t++;
            c = c.then(cx(n, q, t));
        }
    }
    return c;
}

PauliString CliffordOp::conjugate(const PauliString &p) const {
    size_t n = num_qubits();
    if (p.num_qubits() != n) {
        throw std::invalid_argument("conjugate: Pauli has " + std::to_string(p.num_qubits()) +
                                    " qubits but the Clifford acts on " + std::to_string(n));
    }
    // p = i^phase * prod_j (i^{x_j z_j} X_j^{x_j} Z_j^{z_j}) and conjugation is a homomorphism.
    PauliString out(n);
    int extra = p.phase();
    for (size_t q = 0; q < n; q++) {
        bool xq = p.x(q), zq = p.z(q);
        if (xq && zq) extra += 1;
        if (xq) out = multiply(out, x_images_[q]);
        if (zq) out = multiply(out, z_images_[q]);
    }
    out.set_phase(static_cast<uint8_t>((out.phase() + extra) & 3));
    return out;
}

CliffordOp CliffordOp::then(const CliffordOp &next) const {
    if (next.num_qubits() != num_qubits()) throw std::invalid_argument("then: qubit count mismatch");
    CliffordOp out;
    out.x_images_.reserve(num_qubits());
    out.z_images_.reserve(num_qubits());
    for (size_t q = 0; q < num_qubits(); q++) {
        out.x_images_.push_back(next.conjugate(x_images_[q]));
        out.z_images_.push_back(next.conjugate(z_images_[q]));
    }
    return out;
}

CliffordOp CliffordOp::inverse() const {
    size_t n = num_qubits();
    // Conjugation preserves symplectic products, so the X_k coefficient of the
    // preimage Q of g is <g, z_image(k)> and its Z_k coefficient is <g, x_image(k)>.
    CliffordOp inv;
    inv.x_images_.assign(n, PauliString(n));
    inv.z_images_.assign(n, PauliString(n));
    for (size_t j = 0; j < n; j++) {
        for (size_t k = 0; k < n; k++) {
            if (z_images_[k].z(j)) inv.x_images_[j].set_x(k, true);
            if (x_images_[k].z(j)) inv.x_images_[j].set_z(k, true);
            if (z_images_[k].x(j)) inv.z_images_[j].set_x(k, true);
            if (x_images_[k].x(j)) inv.z_images_[j].set_z(k, true);
        }
    }
    // Fix phases so that this->conjugate(inv(g)) == g exactly.
    for (size_t j = 0; j < n; j++) {
        for (auto *images : {&inv.x_images_, &inv.z_images_}) {
            PauliString &pre = (*images)[j];
            PauliString img = conjugate(pre);
            const PauliString target = (images == &inv.x_images_) ? PauliString::single(n, j, 'X')
                                                                   : PauliString::single(n, j, 'Z');
            if (!img.same_pauli(target)) throw std::logic_error("inverse: tableau is not invertible");
            uint8_t fix = static_cast<uint8_t>((4 - img.phase()) & 3);
            pre.set_phase(static_cast<uint8_t>((pre.phase() + fix) & 3));
        }
    }
    return inv;
}

CliffordOp CliffordOp::embed(std::span<const int> qubits, size_t n) const {
    if (qubits.size() != num_qubits()) throw std::invalid_argument("embed: support size mismatch");
    CliffordOp out = identity(n);
    for (size_t j = 0; j < qubits.size(); j++) {
        out.x_images_[qubits[j]] = dynpec::embed(x_images_[j], qubits, n);
        out.z_images_[qubits[j]] = dynpec::embed(z_images_[j], qubits, n);
    }
    return out;
}

bool CliffordOp::is_identity() const { return *this == identity(num_qubits()); }

bool CliffordOp::is_valid() const {
    size_t n = x_images_.size();
    if (z_images_.size() != n) return false;
    for (size_t a = 0; a < n; a++) {
        if (x_images_[a].num_qubits() != n || z_images_[a].num_qubits() != n) return false;
        if ((x_images_[a].phase() & 1) || (z_images_[a].phase() & 1)) return false;
        if (x_images_[a].is_identity() || z_images_[a].is_identity()) return false;
        for (size_t b = 0; b < n; b++) {
            if (symplectic_product(x_images_[a], x_images_[b]) != 0) return false;
            if (symplectic_product(z_images_[a], z_images_[b]) != 0) return false;
            if (symplectic_product(x_images_[a], z_images_[b]) != (a == b ? 1 : 0)) return false;
        }
    }
    return true;
}

PauliString conjugate(const CliffordOp &c, const PauliString &p) { return c.conjugate(p); }

}  // namespace dynpec
