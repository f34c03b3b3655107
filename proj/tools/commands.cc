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

#include "commands.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dynpec/dense.h"
#include "dynpec/expectation.h"
#include "dynpec/families.h"
#include "dynpec/gates.h"
#include "dynpec/parallel.h"
#include "dynpec/passes.h"
#include "dynpec/pec.h"
#include "dynpec/ptm.h"

namespace dynpec::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string file_safe(std::string_view label) {
    std::string out(label);
    for (char &ch : out) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
    }
    return out;
}

void write_decays(const fs::path &path, const std::vector<DecayData> &decays) {
    std::ostringstream s;
    write_decay_csv(s, decays);
    write_text(path, s.str());
}

const Topology *topology_ptr(const std::optional<Topology> &t) { return t ? &*t : nullptr; }

std::string single_label(const Config &config, const DynamicCircuit &c) {
    if (config.has("layer")) return get_as<std::string>(config.at("layer"), "layer");
    auto labels = c.pec_labels();
    if (labels.size() != 1) throw ConfigError("config must name a 'layer' when the circuit has several PEC layers");
    return labels[0];
}

std::vector<FeedforwardRule> recovery_rules(const Config &config) {
    if (!config.has("recovery")) return {};
    const json &r = config.at("recovery");
    if (r.is_string()) {
        if (r.get<std::string>() == "tile") return tile_recovery();
        throw ConfigError("unknown recovery preset '" + r.get<std::string>() + "'");
    }
    if (!r.is_array()) throw ConfigError("'recovery' must be a preset name or a list of rules");
    std::vector<FeedforwardRule> out;
    try {
        for (const auto &rule : r) out.push_back(rule_from_json(rule));
    } catch (const json::exception &e) {
        throw ConfigError(std::string("recovery rule schema violation: ") + e.what());
    }
    return out;
}

/// Per-qubit measurement basis for an observable, with I read out in Z.
std::string setting_of(const PauliString &o) {
    std::string s = o.label();
    for (char &ch : s) ch = ch == 'I' ? 'Z' : ch;
    return s;
}

size_t positive_size(const Config &config, std::string_view key, size_t fallback) {
    if (!config.has(key)) return fallback;
    const auto v = get_as<int64_t>(config.at(key), key);
    if (v <= 0) throw ConfigError("'" + std::string(key) + "' must be positive");
    return static_cast<size_t>(v);
}

}  // namespace

json run_learn(const Config &config, const Options &options) {
    config.allow_only({"circuit", "noise", "topology", "layers", "learning", "exact", "seed"}, "learn");
    const uint64_t seed = config.seed(options);
    DynamicCircuit c = config.circuit();
    NoiseBinding truth = config.noise(c);
    auto topology = config.topology();
    LearningConfig cfg = config.learning(seed, options.workers);
    std::vector<std::string> labels =
        config.has("layers") ? get_as<std::vector<std::string>>(config.at("layers"), "layers") : c.pec_labels();
    if (labels.empty()) throw ConfigError("circuit has no PEC layers to learn");
    const bool exact = config.has("exact") && get_as<bool>(config.at("exact"), "exact");

    std::vector<LearningPlan> plans;
    for (const auto &label : labels) {
        plans.push_back(plan_learning(c, label, topology_ptr(topology)));
        if (exact && plans.back().num_qubits() > kPtmMaxQubits) {
            throw ConfigError("exact fidelities of layer " + label + " need at most " +
                              std::to_string(kPtmMaxQubits) + " qubits");
        }
    }

    json outputs = json::array();
    for (size_t i = 0; i < labels.size(); i++) {
        const LearningPlan &plan = plans[i];
        NoiseBinding local = localize_binding(truth, plan);
        LearnedModel learned = learn_from_samples(plan, sample_decays(plan, local, cfg), cfg);
        json report = learned.report();
        report["learning"] = cfg.to_json();
        if (exact) {
            NoiseModel m = solve_lambdas(plan, exact_fidelities(plan, local));
            json lambdas = json::object();
            for (size_t l = 0; l < m.size(); l++) lambdas[m.generators()[l].label()] = m.lambdas()[l];
            report["exact_lambdas"] = lambdas;
        }
        const std::string stem = file_safe(labels[i]);
        write_json(options.out / ("learn_" + stem + ".json"), report);
        write_decays(options.out / ("decay_" + stem + ".csv"), learned.decays);
        outputs.push_back({{"layer", labels[i]},
                           {"report", "learn_" + stem + ".json"},
                           {"decays", "decay_" + stem + ".csv"},
                           {"gamma", learned.model.gamma()},
                           {"residual", learned.residual}});
    }
    return {{"command", "learn"}, {"seed", seed}, {"layers", outputs}};
}

json run_validate(const Config &config, const Options &options) {
    config.allow_only({"circuit", "noise", "topology", "layer", "model", "learning", "max_circuits", "seed"}, "validate");
    const uint64_t seed = config.seed(options);
    DynamicCircuit c = config.circuit();
    NoiseBinding truth = config.noise(c);
    auto topology = config.topology();
    const std::string label = single_label(config, c);
    NoiseModel model = config.model(config.at("model"));
    ValidationConfig vc;
    vc.learning = config.learning(seed, options.workers);
    vc.max_circuits = config.has("max_circuits") ? get_as<size_t>(config.at("max_circuits"), "max_circuits") : 0;

    LearningPlan plan = plan_learning(c, label, topology_ptr(topology));
    ValidationResult r = validate_mitigation(c, label, truth, model, vc, topology_ptr(topology));

    const std::string stem = file_safe(label);
    write_decays(options.out / ("validate_" + stem + "_mitigated.csv"), r.mitigated);
    write_decays(options.out / ("validate_" + stem + "_unmitigated.csv"), r.unmitigated);
    const bool predictable = plan.period == 1 && model.qubits() == plan.spec.qubits;
    json bases = json::array();
    for (size_t q = 0; q < r.fit_mitigated.size(); q++) {
        json b = {{"basis", r.fit_mitigated[q].basis},
                  {"f_mitigated", r.fit_mitigated[q].f},
                  {"f_mitigated_stderr", r.fit_mitigated[q].f_stderr},
                  {"f_unmitigated", r.fit_unmitigated[q].f},
                  {"f_unmitigated_stderr", r.fit_unmitigated[q].f_stderr},
                  {"f_predicted", nullptr}};
        if (predictable) b["f_predicted"] = model.predict_fidelity(plan.bases.bases[q]);
        bases.push_back(b);
    }
    json summary = {{"command", "validate"},
                    {"seed", seed},
                    {"layer", label},
                    {"gamma", model.gamma()},
                    {"depths", vc.learning.depths},
                    {"instances", r.instances},
                    {"learning", vc.learning.to_json()},
                    {"bases", bases}};
    write_json(options.out / ("validate_" + stem + ".json"), summary);
    return summary;
}

json run_mitigate(const Config &config, const Options &options) {
    config.allow_only({"circuit", "noise", "models", "observables", "recovery", "arms", "instances", "shots",
                       "bootstrap", "post_select", "exact", "max_circuits", "seed"},
                      "mitigate");
    const uint64_t seed = config.seed(options);
    DynamicCircuit c = config.circuit();
    NoiseBinding truth = config.noise(c);
    const auto models = config.models();
    const auto recovery = recovery_rules(config);

    std::vector<PauliString> observables;
    for (const auto &label : get_as<std::vector<std::string>>(config.at("observables"), "observables")) {
        PauliString o = PauliString::from_label(label);
        if (o.num_qubits() != static_cast<size_t>(c.num_qubits())) {
            throw ConfigError("observable " + label + " does not match the circuit width");
        }
        observables.push_back(o);
    }
    if (observables.empty()) throw ConfigError("'observables' must not be empty");

    std::vector<Arm> arms;
    for (const auto &name : config.has("arms") ? get_as<std::vector<std::string>>(config.at("arms"), "arms")
                                               : std::vector<std::string>{"full", "unitary_only", "raw"}) {
        arms.push_back(arm_from_string(name));
    }
    if (arms.empty()) throw ConfigError("'arms' must not be empty");

    std::optional<PostSelection> selection;
    if (config.has("post_select")) {
        const json &ps = config.at("post_select");
        if (!ps.is_object() || !ps.contains("clbits") || !ps.contains("pattern")) {
            throw ConfigError("'post_select' needs 'clbits' and 'pattern'");
        }
        selection = PostSelection::parse(get_as<std::vector<int>>(ps["clbits"], "post_select.clbits"),
                                         get_as<std::string>(ps["pattern"], "post_select.pattern"));
        for (int b : selection->clbits) {
            if (b < 0 || b >= c.num_clbits()) throw ConfigError("post-selection clbit out of range");
        }
    }
    const bool exact = config.has("exact") ? get_as<bool>(config.at("exact"), "exact")
                                           : c.num_qubits() <= kDenseMaxQubits;
    if (exact && c.num_qubits() > kDenseMaxQubits) {
        throw ConfigError("exact estimates need at most " + std::to_string(kDenseMaxQubits) + " qubits");
    }

    MitigationPlan base;
    base.circuit = c;
    base.models = models;
    base.instances = positive_size(config, "instances", base.instances);
    base.shots = positive_size(config, "shots", base.shots);
    base.bootstrap = positive_size(config, "bootstrap", base.bootstrap);
    base.workers = options.workers;

    // Observables measured in the same per-qubit bases share one set of runs.
    std::vector<std::string> settings;
    std::vector<size_t> setting_index;
    for (const auto &o : observables) {
        auto s = setting_of(o);
        auto it = std::find(settings.begin(), settings.end(), s);
        setting_index.push_back(it - settings.begin());
        if (it == settings.end()) settings.push_back(s);
    }
    for (Arm arm : arms) {
        MitigationPlan p = base;
        p.arm = arm;
        p.validate();
    }
    const size_t max_circuits =
        config.has("max_circuits") ? get_as<size_t>(config.at("max_circuits"), "max_circuits") : 0;
    const size_t total = base.instances * arms.size() * settings.size();
    if (max_circuits && total > max_circuits) {
        throw BudgetError("mitigation needs " + std::to_string(total) + " circuits, cap is " +
                          std::to_string(max_circuits));
    }

    std::vector<json> results(observables.size());
    for (size_t i = 0; i < observables.size(); i++) {
        results[i] = {{"observable", observables[i].label()}, {"arms", json::object()}, {"accept_rate", 1.0}};
        if (exact) results[i]["ideal"] = ideal_expectation(c, observables[i], recovery);
    }
    for (Arm arm : arms) {
        MitigationPlan plan = base;
        plan.arm = arm;
        const double gamma = plan.gamma_total();
        for (size_t s = 0; s < settings.size(); s++) {
            plan.circuit = c;
            if (settings[s].find_first_of("XY") != std::string::npos) {
                append_basis_change(plan.circuit, PauliString::from_label(settings[s]));
            }
            plan.seed = stream_seed(seed, s);
            auto samples = run_mitigation(plan, truth);
            for (size_t i = 0; i < observables.size(); i++) {
                if (setting_index[i] != s) continue;
                const uint64_t est_seed = stream_seed(seed, s, i);
                Estimate e = estimate_observable(samples, observables[i], recovery, gamma, plan.bootstrap, est_seed);
                json entry = e.to_json();
                if (exact) {
                    MitigationPlan exact_plan = plan;
                    exact_plan.circuit = c;
                    entry["exact"] = exact_mitigated_expectation(exact_plan, truth, observables[i], recovery);
                }
                results[i]["arms"][std::string(to_string(arm))] = entry;
                if (arm == Arm::Full) results[i]["gamma_total"] = gamma;
                if (selection && arm == Arm::Full) {
                    auto [kept, rate] = post_select(samples, *selection, c.num_clbits());
                    Estimate ps = estimate_observable(kept, observables[i], recovery, gamma, plan.bootstrap, est_seed);
                    ps.accept_rate = rate;
                    ps.diagnostic = true;
                    results[i]["accept_rate"] = rate;
                    results[i]["post_selected"] = ps.to_json();
                }
            }
        }
    }
    for (auto &r : results) {
        if (!r.contains("gamma_total")) r["gamma_total"] = nullptr;
    }
    json summary = {{"command", "mitigate"},
                    {"seed", seed},
                    {"instances", base.instances},
                    {"shots", base.shots},
                    {"bootstrap", base.bootstrap},
                    {"results", results}};
    write_json(options.out / "mitigate.json", summary);
    return summary;
}

json run_ptm(const Config &config, const Options &options) {
    config.allow_only({"circuit", "noise", "twirl_layer", "ancillas", "ideal", "seed"}, "ptm");
    const uint64_t seed = config.seed(options);
    DynamicCircuit c = config.circuit();
    if (c.num_qubits() > kPtmMaxQubits) {
        throw ConfigError("transfer matrices are limited to " + std::to_string(kPtmMaxQubits) + " qubits");
    }
    NoiseBinding binding = config.noise(c);
    std::vector<int> ancillas =
        config.has("ancillas") ? get_as<std::vector<int>>(config.at("ancillas"), "ancillas") : std::vector<int>{};
    for (int a : ancillas) {
        if (a < 0 || a >= c.num_qubits()) throw ConfigError("ancilla index out of range");
    }
    const auto basis = ptm_basis(c.num_qubits(), ancillas);
    Eigen::MatrixXd r;
    std::string mode = "untwirled";
    if (config.has("twirl_layer")) {
        const auto label = get_as<std::string>(config.at("twirl_layer"), "twirl_layer");
        r = twirl_averaged_ptm(c, c.layer_index(label), binding, basis);
        mode = "twirled:" + label;
    } else {
        DenseOptions opts;
        opts.ideal = config.has("ideal") && get_as<bool>(config.at("ideal"), "ideal");
        if (opts.ideal) mode = "ideal";
        r = ptm_of(c, binding, basis, opts);
    }
    if (!r.allFinite()) throw NumericalError("transfer matrix has non-finite entries");
    std::ostringstream csv;
    write_ptm_csv(csv, r, basis);
    write_text(options.out / "ptm.csv", csv.str());

    double off = 0;
    json diagonal = json::object();
    for (Eigen::Index a = 0; a < r.rows(); a++) {
        for (Eigen::Index b = 0; b < r.cols(); b++) {
            if (a != b) off = std::max(off, std::abs(r(a, b)));
        }
        diagonal[basis[a].label()] = r(a, a);
    }
    json summary = {{"command", "ptm"},   {"seed", seed},          {"mode", mode},
                    {"file", "ptm.csv"},  {"max_off_diagonal", off}, {"diagonal", diagonal}};
    write_json(options.out / "ptm.json", summary);
    return summary;
}

json run_decompose(const Config &config, const Options &options) {
    config.allow_only({"circuit", "layer", "verify", "seed"}, "decompose");
    const uint64_t seed = config.seed(options);
    DynamicCircuit c = config.circuit();
    size_t index = c.layers().size();
    if (config.has("layer")) {
        const json &l = config.at("layer");
        index = l.is_string() ? c.layer_index(l.get<std::string>()) : get_as<size_t>(l, "layer");
    } else {
        for (size_t i = 0; i < c.layers().size() && index == c.layers().size(); i++) {
            for (const auto &rule : c.layers()[i].feedforward) {
                if (rule.is_two_qubit() && c.layers()[i].kind == LayerKind::Measurement) index = i;
            }
        }
        if (index == c.layers().size()) throw ConfigError("circuit has no classically controlled CNOT");
    }
    DynamicCircuit out = decompose_cc_cnot(c, index);

    int cnots = 0, conditionals = 0;
    bool clifford = true;
    for (const auto &layer : out.layers()) {
        for (const auto &g : layer.gates) cnots += g.name == "cx";
        for (const auto &r : layer.feedforward) {
            conditionals++;
            auto cl = gate_clifford(r.op);
            clifford = clifford && cl.has_value() && cl->is_valid();
        }
    }
    json summary = {{"command", "decompose"}, {"seed", seed},           {"layer", index},
                    {"cnots", cnots},         {"conditional_ops", conditionals}, {"conditionals_clifford", clifford},
                    {"circuit", "decomposed.json"}, {"max_ptm_difference", nullptr}};
    const bool verify = !config.has("verify") || get_as<bool>(config.at("verify"), "verify");
    if (verify && c.num_qubits() <= kPtmMaxQubits) {
        auto basis = ptm_basis(c.num_qubits());
        DenseOptions ideal;
        ideal.ideal = true;
        summary["max_ptm_difference"] =
            (ptm_of(c, NoiseBinding{}, basis, ideal) - ptm_of(out, NoiseBinding{}, basis, ideal)).cwiseAbs().maxCoeff();
    }
    write_text(options.out / "decomposed.json", out.serialize() + "\n");
    write_json(options.out / "decompose.json", summary);
    return summary;
}

}  // namespace dynpec::cli
