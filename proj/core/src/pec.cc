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

#include "dynpec/pec.h"

#include <cmath>

#include "dynpec/dense.h"
#include "dynpec/error.h"
#include "dynpec/expectation.h"
#include "dynpec/parallel.h"

namespace dynpec {

using nlohmann::json;

std::string_view to_string(Arm arm) {
    switch (arm) {
        case Arm::Full: return "full";
        case Arm::UnitaryOnly: return "unitary_only";
        case Arm::Raw: return "raw";
    }
    return "?";
}

Arm arm_from_string(std::string_view name) {
    if (name == "full") return Arm::Full;
    if (name == "unitary_only") return Arm::UnitaryOnly;
    if (name == "raw") return Arm::Raw;
    throw ConfigError("unknown arm '" + std::string(name) + "'");
}

std::vector<size_t> MitigationPlan::mitigated_layers() const {
    std::vector<size_t> out;
    if (arm == Arm::Raw) return out;
    for (size_t i : pec_layer_indices(circuit)) {
        if (arm == Arm::UnitaryOnly && circuit.layers()[i].kind != LayerKind::Unitary) continue;
        out.push_back(i);
    }
    return out;
}

double MitigationPlan::gamma_total() const {
    double g = 1;
    for (size_t i : mitigated_layers()) {
        auto it = models.find(circuit.layers()[i].label);
        if (it != models.end()) g *= it->second.gamma();
    }
    return g;
}

void MitigationPlan::validate() const {
    circuit.validate();
    if (instances == 0) throw ConfigError("mitigation needs at least one instance");
    if (shots == 0) throw ConfigError("shots must be at least 1");
    for (size_t i : mitigated_layers()) {
        const Layer &layer = circuit.layers()[i];
        auto it = models.find(layer.label);
        if (it == models.end()) throw ConfigError("no learned model for layer '" + layer.label + "'");
        auto support = layer_support(layer);
        for (int q : it->second.qubits()) {
            if (!std::binary_search(support.begin(), support.end(), q)) {
                throw ConfigError("model of layer '" + layer.label + "' acts outside the layer support");
            }
        }
    }
}

std::pair<DynamicCircuit, MitigationSample> generate_mitigation_instance(const MitigationPlan &plan, size_t index) {
    const DynamicCircuit &c = plan.circuit;
    const int n = c.num_qubits();
    Rng rng(stream_seed(plan.seed, index));
    auto mitigated = plan.mitigated_layers();
    MitigationSample sample;
    sample.index = index;
    std::vector<LayerInsertion> ins;
    for (size_t i : pec_layer_indices(c)) {
        const Layer &layer = c.layers()[i];
        PauliString twirl(n);
        for (int q : layer_support(layer)) twirl.set(q, "IXYZ"[rng.below(4)]);
        PauliString mit;
        if (std::find(mitigated.begin(), mitigated.end(), i) != mitigated.end()) {
            const NoiseModel &m = plan.models.find(layer.label)->second;
            auto [p, s] = m.sample_inverse(rng);
            mit = embed(p, m.qubits(), n);
            sample.sign *= s;
            sample.layers.push_back(i);
            sample.insertions.push_back(mit);
        }
        ins.push_back(LayerInsertion{i, std::move(twirl), std::move(mit)});
    }
    auto [circuit, record] = apply_insertions(c, ins);
    sample.record = std::move(record);
    return {std::move(circuit), std::move(sample)};
}

std::vector<MitigationSample> run_mitigation(const MitigationPlan &plan, const NoiseBinding &truth) {
    plan.validate();
    std::vector<MitigationSample> out(plan.instances);
    parallel_for(plan.instances, plan.workers, [&](size_t i) {
        auto [circuit, sample] = generate_mitigation_instance(plan, i);
        TrajectoryOptions opts;
        opts.workers = 1;
        sample.shots = run_trajectories(circuit, truth, plan.shots, stream_seed(plan.seed, i, 0x5A3E7ULL), opts);
        out[i] = std::move(sample);
    });
    return out;
}

json Estimate::to_json() const {
    return {{"observable", observable},
            {"value", value},
            {"stderr", stderr_},
            {"gamma_total", gamma_total},
            {"effective_samples", effective_samples},
            {"accept_rate", accept_rate},
            {"diagnostic", diagnostic}};
}

PostSelection PostSelection::parse(const std::vector<int> &clbits, std::string_view pattern) {
    if (pattern.size() != clbits.size()) throw ConfigError("post-selection pattern length does not match its clbits");
    PostSelection p;
    p.clbits = clbits;
    for (size_t j = 0; j < pattern.size(); j++) {
        if (pattern[j] == '1') {
            p.pattern |= 1ULL << j;
        } else if (pattern[j] != '0') {
            throw ConfigError("post-selection pattern must contain only 0 and 1");
        }
    }
    return p;
}

bool PostSelection::accepts(uint64_t corrected) const {
    for (size_t j = 0; j < clbits.size(); j++) {
        if (((corrected >> clbits[j]) & 1) != ((pattern >> j) & 1)) return false;
    }
    return true;
}

std::pair<std::vector<MitigationSample>, double> post_select(const std::vector<MitigationSample> &samples,
                                                             const PostSelection &selection, int num_clbits) {
    if (selection.clbits.empty()) throw ConfigError("post-selection needs at least one clbit");
    for (int b : selection.clbits) {
        if (b < 0 || b >= num_clbits) throw ConfigError("post-selection clbit out of range");
    }
    size_t total = 0, kept = 0;
    std::vector<MitigationSample> out;
    out.reserve(samples.size());
    for (const auto &s : samples) {
        MitigationSample f = s;
        f.shots.shots.clear();
        for (const auto &shot : s.shots.shots) {
            total++;
            if (selection.accepts(shot.clbits ^ s.record.flips)) {
                f.shots.shots.push_back(shot);
                kept++;
            }
        }
        out.push_back(std::move(f));
    }
    return {std::move(out), total ? static_cast<double>(kept) / static_cast<double>(total) : 0.0};
}

Estimate estimate_observable(const std::vector<MitigationSample> &samples, const PauliString &observable,
                             const std::vector<FeedforwardRule> &recovery, double gamma_total, size_t bootstrap,
                             uint64_t seed) {
    std::vector<double> values;
    size_t shots = 0;
    for (const auto &s : samples) {
        if (s.shots.shots.empty()) continue;
        values.push_back(s.sign * expectation(s.shots, observable, recovery, s.record.flips));
        shots += s.shots.size();
    }
    if (values.empty()) throw NumericalError("no samples to estimate " + observable.label());
    Estimate e;
    e.observable = observable.label();
    e.gamma_total = gamma_total;
    e.effective_samples = shots;
    double sum = 0;
    for (double v : values) sum += v;
    e.value = gamma_total * sum / values.size();
    if (bootstrap > 0 && values.size() > 1) {
        Rng rng(stream_seed(seed, 0xB0075742ULL));
        double m1 = 0, m2 = 0;
        for (size_t b = 0; b < bootstrap; b++) {
            double s = 0;
            for (size_t k = 0; k < values.size(); k++) s += values[rng.below(values.size())];
            double v = gamma_total * s / values.size();
            m1 += v;
            m2 += v * v;
        }
        m1 /= bootstrap;
        e.stderr_ = std::sqrt(std::max(0.0, (m2 - bootstrap * m1 * m1) / (bootstrap - 1)));
    }
    return e;
}

double exact_mitigated_expectation(const MitigationPlan &plan, const NoiseBinding &truth, const PauliString &observable,
                                   const std::vector<FeedforwardRule> &recovery) {
    plan.validate();
    DenseOptions opts;
    for (size_t i : plan.mitigated_layers()) {
        const std::string &label = plan.circuit.layers()[i].label;
        opts.inverse.emplace(label, plan.models.find(label)->second);
    }
    return run_dense(plan.circuit, truth, {}, opts).expectation(observable, recovery);
}

double enumerated_mitigated_expectation(const MitigationPlan &plan, const NoiseBinding &truth,
                                        const PauliString &observable, const std::vector<FeedforwardRule> &recovery) {
    plan.validate();
    const int n = plan.circuit.num_qubits();
    struct Term {
        size_t layer;
        PauliString p;  // global
        double w;
    };
    std::vector<Term> terms;
    for (size_t i : plan.mitigated_layers()) {
        const NoiseModel &m = plan.models.find(plan.circuit.layers()[i].label)->second;
        for (size_t l = 0; l < m.size(); l++) {
            if (m.lambdas()[l] < kLambdaZero) continue;
            terms.push_back(Term{i, embed(m.generators()[l], m.qubits(), n), m.weight(l)});
        }
    }
    if (terms.size() > 20) throw ConfigError("too many inverse branches to enumerate");
    double total = 0;
    for (uint64_t mask = 0; mask < (uint64_t{1} << terms.size()); mask++) {
        double coeff = 1;
        std::map<size_t, PauliString> insert;
        for (size_t t = 0; t < terms.size(); t++) {
            const double w = terms[t].w, g = 1 / (2 * w - 1);
            if ((mask >> t) & 1) {
                coeff *= -(1 - w) * g;
                auto [it, fresh] = insert.try_emplace(terms[t].layer, PauliString(n));
                it->second = (it->second * terms[t].p).unsigned_part();
            } else {
                coeff *= w * g;
            }
        }
        DynamicCircuit c(n, plan.circuit.num_clbits());
        for (size_t i = 0; i < plan.circuit.layers().size(); i++) {
            if (auto it = insert.find(i); it != insert.end() && !it->second.is_identity()) {
                c.append(pauli_layer(it->second));
            }
            c.append(plan.circuit.layers()[i]);
        }
        total += coeff * run_dense(c, truth).expectation(observable, recovery);
    }
    return total;
}

double ideal_expectation(const DynamicCircuit &c, const PauliString &observable,
                         const std::vector<FeedforwardRule> &recovery) {
    DenseOptions opts;
    opts.ideal = true;
    return run_dense(c, NoiseBinding{}, {}, opts).expectation(observable, recovery);
}

ValidationResult validate_mitigation(const DynamicCircuit &c, std::string_view label, const NoiseBinding &truth,
                                     const NoiseModel &model, const ValidationConfig &cfg, const Topology *topology) {
    cfg.learning.validate();
    LearningPlan plan = plan_learning(c, label, topology);
    NoiseBinding local = localize_binding(truth, plan);
    ValidationResult out;
    const double g = model.gamma();
    size_t total = 0;
    for (int k : cfg.learning.depths) {
        double scaled = std::ceil(static_cast<double>(cfg.learning.instances) * std::pow(g, 2.0 * k * plan.period));
        if (!std::isfinite(scaled) || scaled > 1e12) throw BudgetError("mitigation validation budget overflows");
        out.instances.push_back(static_cast<size_t>(scaled));
        total += out.instances.back() * plan.settings.size();
    }
    total += cfg.learning.depths.size() * cfg.learning.instances * plan.settings.size();
    if (cfg.max_circuits && total > cfg.max_circuits) {
        throw BudgetError("mitigation validation needs " + std::to_string(total) + " circuits, cap is " +
                          std::to_string(cfg.max_circuits));
    }
    LearningConfig mitigated_cfg = cfg.learning;
    mitigated_cfg.seed = stream_seed(cfg.learning.seed, 0x3171A7EDULL);
    DecaySamples mit = sample_decays(plan, local, mitigated_cfg, &model, out.instances);
    DecaySamples raw = sample_decays(plan, local, cfg.learning);
    out.mitigated = summarize(plan, mit);
    out.unmitigated = summarize(plan, raw);
    for (const auto &d : out.mitigated) out.fit_mitigated.push_back(fit_decay(d));
    for (const auto &d : out.unmitigated) out.fit_unmitigated.push_back(fit_decay(d));
    return out;
}

}  // namespace dynpec
