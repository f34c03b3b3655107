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

#include "dynpec/families.h"

#include <algorithm>
#include <cmath>

#include "dynpec/error.h"

namespace dynpec {

DynamicCircuit feedforward_circuit(double alpha) {
    if (!(alpha >= 0 && alpha <= 1)) throw ConfigError("alpha must lie in [0, 1]");
    DynamicCircuit c(2, 1);
    if (alpha == 0.5) {
        c.append(Layer::unitary({Gate{"h", {0}, {}}}));
    } else if (alpha < 1) {
        c.append(Layer::unitary({Gate{"ry", {0}, {2 * std::acos(std::sqrt(alpha))}}}));
    }
    c.append(Layer::unitary({Gate{"cx", {0, 1}, {}}}, "cx"));
    c.append(Layer::measurement({1}, {0}, {FeedforwardRule{0, 1, "x", 0}}, "meas"));
    c.set_metadata({{"family", "feedforward"}, {"alpha", alpha}});
    return c;
}

DynamicCircuit tile_circuit() {
    DynamicCircuit c(7, 2);
    auto cx = [](int a, int b) { return Gate{"cx", {a, b}, {}}; };
    std::vector<Gate> prep;
    for (int q : {0, 2, 3, 4, 6}) prep.push_back(Gate{"h", {q}, {}});
    c.append(Layer::unitary(prep));
    c.append(Layer::unitary({cx(0, 1), cx(4, 5)}, "cx1"));
    c.append(Layer::unitary({cx(2, 1), cx(6, 5)}, "cx2"));
    c.append(Layer::unitary({cx(3, 1)}, "cx3"));
    Layer m1 = Layer::measurement({1}, {0}, {}, "meas1");
    m1.support = {1, 3};
    c.append(m1);
    c.append(Layer::unitary({cx(3, 5)}, "cx4"));
    Layer m2 = Layer::measurement({5}, {1}, {}, "meas2");
    m2.support = {0, 5, 6};
    c.append(m2);
    c.set_metadata({{"family", "tile"}});
    return c;
}

std::vector<FeedforwardRule> tile_recovery() { return {FeedforwardRule{0, 1, "x", 0}, FeedforwardRule{1, 1, "x", 6}}; }

std::vector<PauliString> tile_stabilizers() {
    return {PauliString::from_label("ZIZZIII"), PauliString::from_label("IIIZZIZ"),
            PauliString::from_label("XIIXXII"), PauliString::from_label("IIXXIIX")};
}

DynamicCircuit cc_cnot_reference(int a, int c, int t) {
    int n = std::max({a, c, t}) + 1;
    DynamicCircuit out(n, 1);
    out.append(Layer::measurement({a}, {0}, {FeedforwardRule{0, 1, "cx", t, c}}));
    return out;
}

namespace {

NoiseModel random_model(Rng &rng, std::vector<int> support, double max_lambda) {
    std::vector<PauliString> gens;
    std::vector<double> lambdas;
    for (const auto &p : all_paulis(support.size())) {
        if (p.is_identity() || rng.uniform() < 0.5) continue;
        gens.push_back(p);
        lambdas.push_back(max_lambda * rng.uniform());
    }
    return NoiseModel(GeneratorSet(std::move(support), std::move(gens)), std::move(lambdas));
}

}  // namespace

std::pair<DynamicCircuit, NoiseBinding> random_dynamic_circuit(Rng &rng, const RandomCircuitOptions &options) {
    const int n = options.num_qubits;
    if (n < 2 || n > 5) throw ConfigError("random circuits use 2 to 5 qubits");
    static const char *kOneQubit[] = {"h", "s", "sdg", "x", "y", "z", "sx", "sxdg", "i"};
    static const char *kPauliFf[] = {"x", "y", "z"};
    static const char *kCliffordFf[] = {"x", "y", "z", "h", "s", "sx", "tdg_x_t"};
    const int max_clbits = 2;

    DynamicCircuit c(n, max_clbits);
    NoiseBinding binding;
    int written = 0;
    int label = 0;
    auto pick_ff = [&] {
        if (options.clifford_feedforward) return std::string(kCliffordFf[rng.below(std::size(kCliffordFf))]);
        return std::string(kPauliFf[rng.below(std::size(kPauliFf))]);
    };

    for (int l = 0; l < options.num_layers; l++) {
        double u = rng.uniform();
        if (u < 0.45 || l == 0) {
            std::vector<int> free;
            for (int q = 0; q < n; q++) free.push_back(q);
            std::vector<Gate> gates;
            while (!free.empty()) {
                if (free.size() >= 2 && rng.uniform() < 0.4) {
                    int i = rng.below(free.size());
                    int a = free[i];
                    free.erase(free.begin() + i);
                    int j = rng.below(free.size());
                    int b = free[j];
                    free.erase(free.begin() + j);
                    gates.push_back(Gate{rng.uniform() < 0.7 ? "cx" : "cz", {a, b}, {}});
                } else {
                    int q = free.back();
                    free.pop_back();
                    gates.push_back(Gate{kOneQubit[rng.below(std::size(kOneQubit))], {q}, {}});
                }
            }
            std::string name;
            if (rng.uniform() < 0.6) name = "L" + std::to_string(label++);
            Layer layer = Layer::unitary(std::move(gates), name);
            if (!name.empty()) binding.layers[name] = random_model(rng, layer_support(layer), 0.08);
            c.append(std::move(layer));
        } else if (u < 0.75 && written < max_clbits) {
            int q = rng.below(n);
            int b = written++;
            std::vector<FeedforwardRule> ff;
            int rules = rng.below(3);
            for (int k = 0; k < rules; k++) {
                int t = rng.below(n);
                if (t == q || std::any_of(ff.begin(), ff.end(), [&](const auto &r) { return r.target == t; })) continue;
                ff.push_back(FeedforwardRule{b, static_cast<int>(rng.below(2)), pick_ff(), t});
            }
            std::string name;
            if (rng.uniform() < 0.6) name = "L" + std::to_string(label++);
            Layer layer = Layer::measurement({q}, {b}, std::move(ff), name);
            if (!name.empty()) binding.layers[name] = random_model(rng, layer_support(layer), 0.08);
            c.append(std::move(layer));
            if (rng.uniform() < 0.3) c.append(Layer::dephase({q}));
        } else if (u < 0.85 && written > 0) {
            int t = rng.below(n);
            c.append(Layer::conditional({FeedforwardRule{static_cast<int>(rng.below(written)),
                                                         static_cast<int>(rng.below(2)), pick_ff(), t}}));
        } else {
            c.append(Layer::delay("idle"));
        }
    }
    std::vector<int> all;
    for (int q = 0; q < n; q++) all.push_back(q);
    binding.delays["idle"] = random_model(rng, all, 0.05);
    binding.delays["ff_latency"] = random_model(rng, {static_cast<int>(rng.below(n))}, 0.05);
    for (int q = 0; q < n; q++) {
        binding.readout[q] = ReadoutError{0.05 * rng.uniform(), 0.05 * rng.uniform()};
        if (rng.uniform() < 0.3) binding.init_flip[q] = 0.05 * rng.uniform();
    }
    binding.discriminator = 0.05 * rng.uniform();
    c.validate();
    return {std::move(c), std::move(binding)};
}

}  // namespace dynpec
