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

#include "dynpec/noise_model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "dynpec/error.h"

namespace dynpec {

using nlohmann::json;

GeneratorSet::GeneratorSet(std::vector<int> qs, std::vector<PauliString> gens)
    : qubits(std::move(qs)), generators(std::move(gens)) {
    validate();
}

GeneratorSet GeneratorSet::from_labels(std::vector<int> qubits, const std::vector<std::string> &labels) {
    std::vector<PauliString> gens;
    for (const auto &l : labels) gens.push_back(PauliString::from_label(l));
    return GeneratorSet(std::move(qubits), std::move(gens));
}

namespace {

void validate_support(const std::vector<int> &qubits) {
    std::set<int> seen;
    for (int q : qubits) {
        if (q < 0) throw ConfigError("negative qubit index in support");
        if (!seen.insert(q).second) throw ConfigError("repeated qubit " + std::to_string(q) + " in support");
    }
    if (qubits.size() > 64) throw ConfigError("supports are limited to 64 qubits");
}

void validate_paulis(const std::vector<int> &qubits, const std::vector<PauliString> &ps, const char *what) {
    validate_support(qubits);
    std::set<PauliString> seen;
    for (const auto &p : ps) {
        if (p.num_qubits() != qubits.size()) {
            throw ConfigError(std::string(what) + " " + p.label() + " does not match the support of " +
                              std::to_string(qubits.size()) + " qubit(s)");
        }
        if (p.phase() != 0) throw ConfigError(std::string(what) + " " + p.label() + " must be unsigned");
        if (p.is_identity()) throw ConfigError(std::string(what) + " set must not contain the identity");
        if (!seen.insert(p).second) throw ConfigError("duplicate " + std::string(what) + " " + p.label());
    }
}

}  // namespace

void GeneratorSet::validate() const { validate_paulis(qubits, generators, "generator"); }
void FidelityBasisSet::validate() const { validate_paulis(qubits, bases, "basis"); }

double weight(double lambda) {
    if (!(lambda >= 0)) throw ConfigError("noise rates must be non-negative");
    return 0.5 * (1.0 + std::exp(-2.0 * lambda));
}

NoiseModel::NoiseModel(GeneratorSet generators, std::vector<double> lambdas)
    : gens_(std::move(generators)), lambdas_(std::move(lambdas)) {
    gens_.validate();
    if (lambdas_.size() != gens_.size()) {
        throw ConfigError("noise model has " + std::to_string(gens_.size()) + " generators but " +
                          std::to_string(lambdas_.size()) + " rates");
    }
    for (double l : lambdas_) {
        if (!(l >= 0) || !std::isfinite(l)) throw ConfigError("noise rates must be finite and non-negative");
    }
}

NoiseModel NoiseModel::zero(GeneratorSet generators) {
    size_t k = generators.size();
    return NoiseModel(std::move(generators), std::vector<double>(k, 0.0));
}

double NoiseModel::weight(size_t l) const { return dynpec::weight(lambdas_[l]); }

double NoiseModel::gamma() const {
    double s = 0;
    for (double l : lambdas_) {
        if (l >= kLambdaZero) s += l;
    }
    return std::exp(2.0 * s);
}

double NoiseModel::predict_fidelity(const PauliString &q) const {
    if (q.num_qubits() != gens_.num_qubits()) throw ConfigError("basis " + q.label() + " does not match model support");
    double s = 0;
    for (size_t l = 0; l < lambdas_.size(); l++) {
        if (!commutes(q, gens_.generators[l])) s += lambdas_[l];
    }
    return std::exp(-2.0 * s);
}

NoiseModel NoiseModel::scaled(double factor) const {
    if (!(factor >= 0)) throw ConfigError("scale factor must be non-negative");
    NoiseModel out = *this;
    for (double &l : out.lambdas_) l *= factor;
    return out;
}

double NoiseModel::lambda_of(const PauliString &g) const {
    for (size_t l = 0; l < lambdas_.size(); l++) {
        if (gens_.generators[l].same_pauli(g)) return lambdas_[l];
    }
    return 0.0;
}

PauliString NoiseModel::sample_forward(Rng &rng) const {
    PauliString out(gens_.num_qubits());
    for (size_t l = 0; l < lambdas_.size(); l++) {
        if (lambdas_[l] < kLambdaZero) continue;
        if (rng.bernoulli(1.0 - weight(l))) out = out * gens_.generators[l];
    }
    return out.unsigned_part();
}

std::pair<PauliString, int> NoiseModel::sample_inverse(Rng &rng) const {
    PauliString out(gens_.num_qubits());
    int sign = 1;
    for (size_t l = 0; l < lambdas_.size(); l++) {
        if (lambdas_[l] < kLambdaZero) continue;
        if (rng.bernoulli(1.0 - weight(l))) {
            out = out * gens_.generators[l];
            sign = -sign;
        }
    }
    return {out.unsigned_part(), sign};
}

Eigen::MatrixXcd pauli_conjugate(const Eigen::MatrixXcd &rho, uint64_t x_mask, uint64_t z_mask) {
    const Eigen::Index dim = rho.rows();
    Eigen::MatrixXcd out(dim, dim);
    for (Eigen::Index c = 0; c < dim; c++) {
        const bool cs = std::popcount(z_mask & static_cast<uint64_t>(c)) & 1;
        const Eigen::Index oc = static_cast<Eigen::Index>(static_cast<uint64_t>(c) ^ x_mask);
        for (Eigen::Index r = 0; r < dim; r++) {
            const bool rs = std::popcount(z_mask & static_cast<uint64_t>(r)) & 1;
            const Eigen::Index orow = static_cast<Eigen::Index>(static_cast<uint64_t>(r) ^ x_mask);
            out(orow, oc) = (rs != cs) ? -rho(r, c) : rho(r, c);
        }
    }
    return out;
}

namespace {

void check_dim(const Eigen::MatrixXcd &rho, size_t n) {
    if (n > 12 || rho.rows() != (Eigen::Index{1} << n) || rho.cols() != rho.rows()) {
        throw std::invalid_argument("density matrix dimension does not match the model support");
    }
}

}  // namespace

Eigen::MatrixXcd NoiseModel::apply_channel_dense(const Eigen::MatrixXcd &rho) const {
    check_dim(rho, gens_.num_qubits());
    Eigen::MatrixXcd out = rho;
    for (size_t l = 0; l < lambdas_.size(); l++) {
        if (lambdas_[l] == 0) continue;
        double w = weight(l);
        const auto &g = gens_.generators[l];
        out = w * out + (1 - w) * pauli_conjugate(out, g.x_mask(), g.z_mask());
    }
    return out;
}

Eigen::MatrixXcd NoiseModel::apply_inverse_dense(const Eigen::MatrixXcd &rho) const {
    check_dim(rho, gens_.num_qubits());
    Eigen::MatrixXcd out = rho;
    for (size_t l = 0; l < lambdas_.size(); l++) {
        if (lambdas_[l] == 0) continue;
        double w = weight(l);
        double g = 1.0 / (2 * w - 1);
        const auto &p = gens_.generators[l];
        out = (w * g) * out - ((1 - w) * g) * pauli_conjugate(out, p.x_mask(), p.z_mask());
    }
    return out;
}

json NoiseModel::to_json() const {
    json gens = json::array();
    for (const auto &g : gens_.generators) gens.push_back(g.label());
    return {{"qubits", gens_.qubits}, {"generators", gens}, {"lambdas", lambdas_}};
}

NoiseModel NoiseModel::from_json(const json &j) {
    try {
        auto qubits = j.at("qubits").get<std::vector<int>>();
        auto labels = j.at("generators").get<std::vector<std::string>>();
        auto lambdas = j.at("lambdas").get<std::vector<double>>();
        return NoiseModel(GeneratorSet::from_labels(std::move(qubits), labels), std::move(lambdas));
    } catch (const json::exception &e) {
        throw ConfigError(std::string("noise model schema violation: ") + e.what());
    }
}

NoiseModel compose(const NoiseModel &a, const NoiseModel &b) {
    std::set<int> all(a.qubits().begin(), a.qubits().end());
    all.insert(b.qubits().begin(), b.qubits().end());
    std::vector<int> qubits(all.begin(), all.end());
    auto lift = [&](const NoiseModel &m, size_t l) {
        PauliString out(qubits.size());
        const PauliString &g = m.generators()[l];
        for (size_t j = 0; j < m.qubits().size(); j++) {
            size_t pos = std::lower_bound(qubits.begin(), qubits.end(), m.qubits()[j]) - qubits.begin();
            out.set(pos, g.get(j));
        }
        return out;
    };
    std::vector<PauliString> gens;
    std::vector<double> lambdas;
    std::map<PauliString, size_t> index;
    for (const NoiseModel *m : {&a, &b}) {
        for (size_t l = 0; l < m->size(); l++) {
            PauliString g = lift(*m, l);
            auto [it, fresh] = index.emplace(g, gens.size());
            if (fresh) {
                gens.push_back(g);
                lambdas.push_back(m->lambdas()[l]);
            } else {
                lambdas[it->second] += m->lambdas()[l];
            }
        }
    }
    return NoiseModel(GeneratorSet(std::move(qubits), std::move(gens)), std::move(lambdas));
}

Eigen::MatrixXd build_M(const FidelityBasisSet &F, const GeneratorSet &K) {
    if (F.qubits != K.qubits) throw ConfigError("fidelity bases and generators must share a support");
    Eigen::MatrixXd m(F.size(), K.size());
    for (size_t q = 0; q < F.size(); q++) {
        for (size_t l = 0; l < K.size(); l++) m(q, l) = symplectic_product(F.bases[q], K.generators[l]);
    }
    return m;
}

}  // namespace dynpec
