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

#include "dynpec/learning.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>

#include "dynpec/error.h"
#include "dynpec/expectation.h"
#include "dynpec/nnls.h"
#include "dynpec/parallel.h"
#include "dynpec/ptm.h"
#include "dynpec/trajectory.h"

namespace dynpec {

using nlohmann::json;

void LearningConfig::validate() const {
    if (depths.empty()) throw ConfigError("learning needs at least one depth");
    for (int d : depths) {
        if (d < 0) throw ConfigError("depths must be non-negative");
    }
    if (std::set<int>(depths.begin(), depths.end()).size() < 2) {
        throw ConfigError("learning needs at least two distinct depths");
    }
    if (instances == 0) throw ConfigError("learning needs at least one instance per point");
    if (shots == 0) throw ConfigError("shots must be at least 1");
}

LearningConfig LearningConfig::from_json(const json &j) {
    LearningConfig cfg;
    try {
        cfg.depths = j.value("depths", cfg.depths);
        cfg.instances = j.value("instances", cfg.instances);
        cfg.shots = j.value("shots", cfg.shots);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.bootstrap = j.value("bootstrap", cfg.bootstrap);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("learning config schema violation: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json LearningConfig::to_json() const {
    return {{"depths", depths}, {"instances", instances}, {"shots", shots}, {"seed", seed}, {"bootstrap", bootstrap}};
}

namespace {

int local_index(const std::vector<int> &support, int q) {
    auto it = std::find(support.begin(), support.end(), q);
    return it == support.end() ? -1 : static_cast<int>(it - support.begin());
}

/// Re-expresses a model on global qubits in local coordinates. Generators
/// touching qubits outside `support` are dropped when `drop_outside` is set.
std::optional<NoiseModel> localize_model(const NoiseModel &m, const std::vector<int> &support, bool drop_outside,
                                         std::string_view what) {
    std::vector<size_t> inside;
    std::vector<int> qubits;
    for (size_t j = 0; j < m.qubits().size(); j++) {
        int l = local_index(support, m.qubits()[j]);
        if (l >= 0) {
            inside.push_back(j);
            qubits.push_back(l);
        }
    }
    std::vector<PauliString> gens;
    std::vector<double> lambdas;
    for (size_t g = 0; g < m.size(); g++) {
        const PauliString &p = m.generators()[g];
        PauliString local(inside.size());
        size_t kept = 0;
        for (size_t k = 0; k < inside.size(); k++) {
            local.set(k, p.get(inside[k]));
            if (p.get(inside[k]) != 'I') kept++;
        }
        if (kept != p.weight()) {
            if (drop_outside) continue;
            throw ConfigError(std::string(what) + " acts outside the layer support");
        }
        gens.push_back(std::move(local));
        lambdas.push_back(m.lambdas()[g]);
    }
    if (gens.empty()) return std::nullopt;
    return NoiseModel(GeneratorSet(std::move(qubits), std::move(gens)), std::move(lambdas));
}

/// Orbit of q under conjugation by u, unsigned, for `period` steps.
std::vector<PauliString> orbit(const CliffordOp &u, const PauliString &q, int period) {
    std::vector<PauliString> out;
    PauliString cur = q.unsigned_part();
    for (int j = 0; j < period; j++) {
        out.push_back(cur);
        cur = u.conjugate(cur).unsigned_part();
    }
    return out;
}

std::vector<int> local_support_qubits(int n) {
    std::vector<int> q(n);
    for (int j = 0; j < n; j++) q[j] = j;
    return q;
}

double mean_of(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0 : s / v.size();
}

}  // namespace

LearningPlan plan_learning(const DynamicCircuit &c, std::string_view label, const Topology *topology) {
    const Layer &src = c.layers()[c.layer_index(label)];
    if (!src.is_pec_candidate()) throw ConfigError("layer '" + std::string(label) + "' is not a PEC layer");
    LearningPlan plan;
    const LayerSpec *configured = topology ? topology->find(label) : nullptr;
    if (topology && !configured) throw ConfigError("topology has no entry for layer '" + std::string(label) + "'");
    plan.spec = configured ? *configured : layer_spec_from_circuit(c, label);
    plan.spec.validate();
    const auto &sup = plan.spec.qubits;
    for (int q : layer_support(src)) {
        if (local_index(sup, q) < 0) throw ConfigError("layer '" + std::string(label) + "' acts outside its topology support");
    }
    {
        std::set<int> a(plan.spec.measured.begin(), plan.spec.measured.end()), b(src.qubits.begin(), src.qubits.end());
        if (src.kind == LayerKind::Measurement && a != b) {
            throw ConfigError("topology entry for '" + std::string(label) + "' measures different qubits");
        }
    }
    const int n = plan.num_qubits();

    // Local copy of the layer with feedforward replaced by delays.
    Layer layer = src;
    layer.support = local_support_qubits(n);
    for (auto &g : layer.gates) {
        for (int &q : g.qubits) q = local_index(sup, q);
    }
    std::map<int, int> clbit_map;
    for (size_t j = 0; j < layer.qubits.size(); j++) {
        layer.qubits[j] = local_index(sup, layer.qubits[j]);
        clbit_map[layer.clbits[j]] = static_cast<int>(j);
        layer.clbits[j] = static_cast<int>(j);
    }
    for (auto &r : layer.feedforward) {
        if (!clbit_map.contains(r.clbit)) {
            throw ConfigError("layer '" + std::string(label) + "' feedforward reads a bit it does not write");
        }
        r.clbit = clbit_map[r.clbit];
        r.target = local_index(sup, r.target);
        r.control = -1;
        r.op = "delay";
    }
    plan.layer = std::move(layer);
    plan.num_clbits = static_cast<int>(plan.layer.clbits.size());

    plan.bases = select_fidelity_set(plan.spec);
    plan.generators = select_generator_set(plan.spec);

    // Settings: every product of X/Y/Z on unmeasured qubits, Z on measured ones.
    auto measured = plan.spec.measured_positions();
    std::vector<size_t> free;
    for (int j = 0; j < n; j++) {
        if (std::find(measured.begin(), measured.end(), static_cast<size_t>(j)) == measured.end()) free.push_back(j);
    }
    size_t count = 1;
    for (size_t k = 0; k < free.size(); k++) count *= 3;
    for (size_t idx = 0; idx < count; idx++) {
        PauliString s(n);
        for (size_t j : measured) s.set(j, 'Z');
        size_t v = idx;
        for (size_t j : free) {
            s.set(j, "XYZ"[v % 3]);
            v /= 3;
        }
        plan.settings.push_back(std::move(s));
    }
    for (const auto &q : plan.bases.bases) {
        size_t found = plan.settings.size();
        for (size_t s = 0; s < plan.settings.size() && found == plan.settings.size(); s++) {
            bool ok = true;
            for (int j = 0; j < n; j++) ok = ok && (q.get(j) == 'I' || q.get(j) == plan.settings[s].get(j));
            if (ok) found = s;
        }
        if (found == plan.settings.size()) throw ConfigError("basis " + q.label() + " is not measurable on this layer");
        plan.setting_of.push_back(found);
    }

    CliffordOp u = CliffordOp::identity(n);
    if (plan.layer.kind == LayerKind::Unitary) {
        auto lc = layer_clifford(plan.layer, n);
        if (!lc) throw ConfigError("layer '" + std::string(label) + "' is not Clifford");
        u = *lc;
        CliffordOp power = u;
        plan.period = 1;
        auto diagonal = [&](const CliffordOp &c) {
            for (int q = 0; q < n; q++) {
                if (!c.x_image(q).same_pauli(PauliString::single(n, q, 'X'))) return false;
                if (!c.z_image(q).same_pauli(PauliString::single(n, q, 'Z'))) return false;
            }
            return true;
        };
        while (!diagonal(power)) {
            power = power.then(u);
            if (++plan.period > 48) throw ConfigError("layer '" + std::string(label) + "' has too long a period");
        }
        for (const auto &q : plan.bases.bases) plan.period_sign.push_back(power.conjugate(q).sign());
    } else {
        plan.period_sign.assign(plan.bases.size(), 1);
    }

    plan.M = Eigen::MatrixXd::Zero(plan.bases.size(), plan.generators.size());
    for (size_t i = 0; i < plan.bases.size(); i++) {
        for (const auto &p : orbit(u, plan.bases.bases[i], plan.period)) {
            for (size_t l = 0; l < plan.generators.size(); l++) {
                plan.M(i, l) += symplectic_product(p, plan.generators.generators[l]);
            }
        }
    }
    return plan;
}

NoiseBinding localize_binding(const NoiseBinding &binding, const LearningPlan &plan) {
    const auto &sup = plan.spec.qubits;
    NoiseBinding out;
    if (const NoiseModel *m = binding.layer_model(plan.spec.name)) {
        if (auto local = localize_model(*m, sup, false, "noise of layer '" + plan.spec.name + "'")) {
            out.layers.emplace(plan.spec.name, std::move(*local));
        }
    }
    for (const auto &[tag, m] : binding.delays) {
        if (auto local = localize_model(m, sup, true, tag)) out.delays.emplace(tag, std::move(*local));
    }
    if (auto it = binding.coherent.find(plan.spec.name); it != binding.coherent.end()) {
        std::vector<CoherentTerm> terms;
        for (const auto &t : it->second) {
            for (size_t q = 0; q < t.pauli.num_qubits(); q++) {
                if (t.pauli.get(q) != 'I' && local_index(sup, static_cast<int>(q)) < 0) {
                    throw ConfigError("coherent term on layer '" + plan.spec.name + "' acts outside its support");
                }
            }
            terms.push_back(CoherentTerm{restrict_to(t.pauli, sup), t.angle});
        }
        out.coherent.emplace(plan.spec.name, std::move(terms));
    }
    for (const auto &[q, r] : binding.readout) {
        if (int l = local_index(sup, q); l >= 0) out.readout[l] = r;
    }
    for (const auto &[q, p] : binding.init_flip) {
        if (int l = local_index(sup, q); l >= 0) out.init_flip[l] = p;
    }
    out.discriminator = binding.discriminator;
    return out;
}

LearningCircuit learning_circuit(const LearningPlan &plan, int depth, size_t setting, Rng &rng,
                                 const NoiseModel *mitigation) {
    if (setting >= plan.settings.size()) throw ConfigError("setting index out of range");
    const int n = plan.num_qubits();
    DynamicCircuit c(n, plan.num_clbits);
    append_basis_prep(c, plan.settings[setting]);
    std::vector<int> measured(plan.layer.qubits.begin(), plan.layer.qubits.end());
    std::vector<size_t> applications;
    for (int r = 0; r < depth * plan.period; r++) {
        applications.push_back(c.layers().size());
        c.append(plan.layer);
        if (plan.layer.kind == LayerKind::Measurement) c.append(Layer::dephase(measured));
    }
    append_basis_change(c, plan.settings[setting]);

    std::vector<int> mit_pos;
    if (mitigation) {
        for (int q : mitigation->qubits()) {
            int l = local_index(plan.spec.qubits, q);
            if (l < 0) throw ConfigError("mitigation model acts outside the layer support");
            mit_pos.push_back(l);
        }
    }
    LearningCircuit out;
    std::vector<LayerInsertion> ins;
    for (size_t idx : applications) {
        PauliString twirl(n);
        for (int q = 0; q < n; q++) twirl.set(q, "IXYZ"[rng.below(4)]);
        PauliString mit;
        if (mitigation) {
            auto [p, s] = mitigation->sample_inverse(rng);
            mit = embed(p, mit_pos, n);
            out.sign *= s;
        }
        ins.push_back(LayerInsertion{idx, std::move(twirl), std::move(mit)});
    }
    auto [circuit, record] = apply_insertions(c, ins);
    out.circuit = std::move(circuit);
    out.record = std::move(record);

    // Random X before the terminal readout symmetrizes assignment errors, so
    // they rescale every decay curve instead of adding an offset.
    std::vector<Gate> flips;
    for (int q = 0; q < n; q++) {
        if (rng.below(2)) {
            flips.push_back(Gate{"x", {q}, {}});
            out.readout_flips |= uint64_t{1} << q;
        }
    }
    if (!flips.empty()) out.circuit.append(Layer::unitary(std::move(flips)));
    return out;
}

DecaySamples sample_decays(const LearningPlan &plan, const NoiseBinding &local_binding, const LearningConfig &cfg,
                           const NoiseModel *mitigation, const std::vector<size_t> &instances) {
    cfg.validate();
    if (!instances.empty() && instances.size() != cfg.depths.size()) {
        throw ConfigError("per-depth instance counts must match the depth list");
    }
    const size_t nb = plan.bases.size();
    DecaySamples out;
    out.depths = cfg.depths;
    out.values.resize(cfg.depths.size());
    struct Task {
        size_t d, s, i;
    };
    std::vector<Task> tasks;
    for (size_t d = 0; d < cfg.depths.size(); d++) {
        size_t count = instances.empty() ? cfg.instances : instances[d];
        if (count == 0) throw ConfigError("every depth needs at least one instance");
        out.values[d].assign(nb, std::vector<double>(count, 0.0));
        for (size_t s = 0; s < plan.settings.size(); s++) {
            for (size_t i = 0; i < count; i++) tasks.push_back(Task{d, s, i});
        }
    }
    std::vector<std::vector<size_t>> bases_of(plan.settings.size());
    std::vector<uint64_t> masks(nb);
    for (size_t q = 0; q < nb; q++) {
        bases_of[plan.setting_of[q]].push_back(q);
        masks[q] = plan.bases.bases[q].x_mask() | plan.bases.bases[q].z_mask();
    }
    const double gamma = mitigation ? mitigation->gamma() : 1.0;

    parallel_for(tasks.size(), cfg.workers, [&](size_t t) {
        const Task &task = tasks[t];
        const int depth = cfg.depths[task.d];
        const uint64_t base = stream_seed(cfg.seed, task.d, task.s, task.i);
        Rng rng(base);
        LearningCircuit lc = learning_circuit(plan, depth, task.s, rng, mitigation);
        TrajectoryOptions opts;
        opts.workers = 1;
        ShotBatch batch = run_trajectories(lc.circuit, local_binding, cfg.shots, mix64(base ^ 0xD1B54A32D192ED03ULL), opts);
        const double scale = mitigation ? std::pow(gamma, depth * plan.period) * lc.sign : 1.0;
        for (size_t q : bases_of[task.s]) {
            long long sum = 0;
            for (const auto &shot : batch.shots) sum += parity_sign(shot.terminal ^ lc.readout_flips, masks[q]);
            double v = static_cast<double>(sum) / static_cast<double>(batch.size());
            if (plan.period_sign[q] < 0 && (depth & 1)) v = -v;
            out.values[task.d][q][task.i] = v * scale;
        }
    });
    return out;
}

std::vector<DecayData> summarize(const LearningPlan &plan, const DecaySamples &samples) {
    std::vector<DecayData> out;
    for (size_t q = 0; q < plan.bases.size(); q++) {
        DecayData d;
        d.basis = plan.bases.bases[q].label();
        for (size_t k = 0; k < samples.depths.size(); k++) {
            const auto &v = samples.values[k][q];
            double m = mean_of(v);
            double var = 0;
            for (double x : v) var += (x - m) * (x - m);
            double se = v.size() > 1 ? std::sqrt(var / (v.size() - 1) / v.size()) : 0.0;
            d.depths.push_back(samples.depths[k]);
            d.means.push_back(m);
            d.stderrs.push_back(se);
        }
        out.push_back(std::move(d));
    }
    return out;
}

NoiseModel solve_lambdas(const LearningPlan &plan, const std::vector<double> &fidelities, double *residual) {
    if (fidelities.size() != plan.bases.size()) throw ConfigError("one fidelity per basis is required");
    Eigen::VectorXd b(fidelities.size());
    for (size_t i = 0; i < fidelities.size(); i++) {
        if (!(fidelities[i] > 0) || !std::isfinite(fidelities[i])) {
            throw NumericalError("fidelity of basis " + plan.bases.bases[i].label() + " is not positive");
        }
        b[i] = -std::log(fidelities[i]) / 2;
    }
    NnlsResult r = nnls(plan.M, b);
    if (residual) *residual = r.residual;
    std::vector<double> lambdas(r.x.data(), r.x.data() + r.x.size());
    for (double &l : lambdas) l = std::max(l, 0.0);
    return NoiseModel(plan.generators, std::move(lambdas));
}

std::vector<double> exact_fidelities(const LearningPlan &plan, const NoiseBinding &local_binding) {
    const int n = plan.num_qubits();
    DynamicCircuit c(n, plan.num_clbits);
    c.append(plan.layer);
    if (plan.layer.kind == LayerKind::Measurement) {
        c.append(Layer::dephase(std::vector<int>(plan.layer.qubits.begin(), plan.layer.qubits.end())));
    }
    auto basis = ptm_basis(n);
    Eigen::MatrixXd r = twirl_averaged_ptm(c, 0, local_binding, basis);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(r.rows(), r.cols());
    for (int j = 0; j < plan.period; j++) power = r * power;
    std::vector<double> out;
    for (size_t q = 0; q < plan.bases.size(); q++) {
        size_t idx = std::find(basis.begin(), basis.end(), plan.bases.bases[q]) - basis.begin();
        out.push_back(plan.period_sign[q] * power(idx, idx));
    }
    return out;
}

LearnedModel learn_from_samples(const LearningPlan &plan, const DecaySamples &samples, const LearningConfig &cfg) {
    LearnedModel out;
    out.layer = plan.spec.name;
    out.bases = plan.bases;
    out.M = plan.M;
    out.seed = cfg.seed;
    out.decays = summarize(plan, samples);
    std::vector<double> f;
    for (const auto &d : out.decays) {
        out.fits.push_back(fit_decay(d));
        f.push_back(out.fits.back().f);
    }
    out.model = solve_lambdas(plan, f, &out.residual);

    const size_t K = plan.generators.size();
    out.lambda_stderr.assign(K, 0.0);
    if (cfg.bootstrap == 0) return out;
    std::vector<std::vector<double>> draws(cfg.bootstrap);
    parallel_for(cfg.bootstrap, cfg.workers, [&](size_t b) {
        Rng rng(stream_seed(cfg.seed, 0xB0075742ULL, b));
        std::vector<double> fb(plan.bases.size());
        std::vector<DecayData> resampled = out.decays;
        for (size_t d = 0; d < samples.depths.size(); d++) {
            for (size_t s = 0; s < plan.settings.size(); s++) {
                const size_t count = samples.values[d][0].size();
                std::vector<size_t> pick(count);
                for (auto &p : pick) p = rng.below(count);
                for (size_t q = 0; q < plan.bases.size(); q++) {
                    if (plan.setting_of[q] != s) continue;
                    double sum = 0, sumsq = 0;
                    for (size_t p : pick) {
                        sum += samples.values[d][q][p];
                        sumsq += samples.values[d][q][p] * samples.values[d][q][p];
                    }
                    const double m = sum / count;
                    resampled[q].means[d] = m;
                    if (count > 1) {
                        const double var = std::max(0.0, (sumsq - count * m * m) / (count - 1));
                        resampled[q].stderrs[d] = std::sqrt(var / count);
                    }
                }
            }
        }
        try {
            for (size_t q = 0; q < plan.bases.size(); q++) fb[q] = fit_decay(resampled[q]).f;
            NoiseModel m = solve_lambdas(plan, fb);
            draws[b] = m.lambdas();
        } catch (const NumericalError &) {
            draws[b].clear();
        }
    });
    std::vector<double> sum(K, 0.0), sumsq(K, 0.0);
    size_t used = 0;
    for (const auto &d : draws) {
        if (d.empty()) continue;
        used++;
        for (size_t l = 0; l < K; l++) {
            sum[l] += d[l];
            sumsq[l] += d[l] * d[l];
        }
    }
    if (used > 1) {
        for (size_t l = 0; l < K; l++) {
            double m = sum[l] / used;
            out.lambda_stderr[l] = std::sqrt(std::max(0.0, (sumsq[l] - used * m * m) / (used - 1)));
        }
    }
    return out;
}

LearnedModel learn_layer(const DynamicCircuit &c, std::string_view label, const NoiseBinding &truth,
                         const LearningConfig &cfg, const Topology *topology) {
    LearningPlan plan = plan_learning(c, label, topology);
    NoiseBinding local = localize_binding(truth, plan);
    DecaySamples samples = sample_decays(plan, local, cfg);
    return learn_from_samples(plan, samples, cfg);
}

json LearnedModel::report() const {
    json bases_j = json::array(), A = json::array(), f = json::array(), se = json::array(), A_se = json::array();
    for (size_t q = 0; q < fits.size(); q++) {
        bases_j.push_back(fits[q].basis);
        A.push_back(fits[q].A);
        f.push_back(fits[q].f);
        se.push_back(fits[q].f_stderr);
        A_se.push_back(fits[q].A_stderr);
    }
    json lambdas = json::object(), lambda_se = json::object(), gens = json::array();
    for (size_t l = 0; l < model.size(); l++) {
        const std::string g = model.generators()[l].label();
        gens.push_back(g);
        lambdas[g] = model.lambdas()[l];
        lambda_se[g] = l < lambda_stderr.size() ? lambda_stderr[l] : 0.0;
    }
    return {{"layer", layer},       {"qubits", model.qubits()}, {"bases", bases_j},       {"A", A},
            {"A_stderr", A_se},     {"f", f},                   {"stderr", se},           {"generators", gens},
            {"lambdas", lambdas},   {"lambda_stderr", lambda_se}, {"gamma", model.gamma()}, {"residual", residual},
            {"seed", seed}};
}

LearnedModel LearnedModel::from_report(const json &j) {
    LearnedModel out;
    try {
        out.layer = j.at("layer").get<std::string>();
        auto qubits = j.at("qubits").get<std::vector<int>>();
        auto gens = j.at("generators").get<std::vector<std::string>>();
        const json &lj = j.at("lambdas");
        std::vector<double> lambdas;
        for (const auto &g : gens) lambdas.push_back(lj.at(g).get<double>());
        out.model = NoiseModel(GeneratorSet::from_labels(qubits, gens), std::move(lambdas));
        if (j.contains("lambda_stderr")) {
            for (const auto &g : gens) out.lambda_stderr.push_back(j["lambda_stderr"].value(g, 0.0));
        }
        out.residual = j.value("residual", 0.0);
        out.seed = j.value("seed", uint64_t{0});
        if (j.contains("bases")) {
            auto bases = j["bases"].get<std::vector<std::string>>();
            auto A = j.value("A", std::vector<double>(bases.size(), 1.0));
            auto f = j.value("f", std::vector<double>(bases.size(), 1.0));
            auto se = j.value("stderr", std::vector<double>(bases.size(), 0.0));
            auto A_se = j.value("A_stderr", std::vector<double>(bases.size(), 0.0));
            if (A.size() != bases.size() || f.size() != bases.size() || se.size() != bases.size() ||
                A_se.size() != bases.size()) {
                throw ConfigError("learning report columns differ in length");
            }
            out.bases.qubits = qubits;
            for (size_t q = 0; q < bases.size(); q++) {
                out.bases.bases.push_back(PauliString::from_label(bases[q]));
                out.fits.push_back(FidelityEstimate{bases[q], A[q], f[q], A_se[q], se[q]});
            }
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("learning report schema violation: ") + e.what());
    }
    return out;
}

void write_decay_csv(std::ostream &out, const std::vector<DecayData> &decays) {
    out << "depth,basis,mean,stderr\n" << std::setprecision(17);
    for (const auto &d : decays) {
        for (size_t k = 0; k < d.depths.size(); k++) {
            out << d.depths[k] << ',' << d.basis << ',' << d.means[k] << ',' << d.stderrs[k] << '\n';
        }
    }
}

}  // namespace dynpec
