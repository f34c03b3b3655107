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

#include <benchmark/benchmark.h>

#include <cmath>

#include "dynpec/decay_fit.h"
#include "dynpec/dense.h"
#include "dynpec/families.h"
#include "dynpec/learning.h"
#include "dynpec/nnls.h"
#include "dynpec/parallel.h"
#include "dynpec/trajectory.h"

using namespace dynpec;

namespace {

NoiseBinding tile_noise() {
    auto c = tile_circuit();
    NoiseBinding b;
    for (const auto &label : c.pec_labels()) {
        auto support = layer_support(c.layers()[c.layer_index(label)]);
        std::vector<PauliString> gens;
        std::vector<double> lambdas;
        for (size_t j = 0; j < support.size(); j++) {
            gens.push_back(PauliString::single(support.size(), j, 'X'));
            lambdas.push_back(0.01);
        }
        b.layers.emplace(label, NoiseModel(GeneratorSet(support, gens), lambdas));
    }
    return b;
}

void BM_TrajectoryTile(benchmark::State &state) {
    auto c = tile_circuit();
    auto b = tile_noise();
    TrajectoryOptions opts;
    opts.force_tableau = state.range(0) != 0;
    uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trajectories(c, b, 1000, seed++, opts));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TrajectoryTile)->Arg(0)->Arg(1)->ArgName("tableau");

void BM_DenseTile(benchmark::State &state) {
    auto c = tile_circuit();
    auto b = tile_noise();
    for (auto _ : state) benchmark::DoNotOptimize(run_dense(c, b));
}
BENCHMARK(BM_DenseTile)->Unit(benchmark::kMillisecond);

void BM_Nnls(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(1);
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; i++) {
        b[i] = rng.uniform() - 0.2;
        for (int j = 0; j < n; j++) A(i, j) = rng.below(2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(nnls(A, b));
}
BENCHMARK(BM_Nnls)->Arg(7)->Arg(31)->Arg(63);

void BM_DecayFit(benchmark::State &state) {
    DecayData d;
    d.basis = "Z";
    for (int k : {0, 1, 2, 4, 8, 16}) {
        d.depths.push_back(k);
        d.means.push_back(0.97 * std::pow(0.985, k) + 1e-3 * ((k % 3) - 1));
        d.stderrs.push_back(2e-3);
    }
    for (auto _ : state) benchmark::DoNotOptimize(fit_decay(d));
}
BENCHMARK(BM_DecayFit);

void BM_LearnPair(benchmark::State &state) {
    DynamicCircuit c(2, 1);
    Layer m = Layer::measurement({1}, {0}, {}, "meas");
    m.support = {0, 1};
    c.append(m);
    NoiseBinding truth;
    truth.layers.emplace("meas", NoiseModel(GeneratorSet::from_labels({0, 1}, {"XI", "IX", "ZX"}), {0.01, 0.02, 0.005}));
    LearningConfig cfg;
    cfg.instances = 32;
    cfg.shots = 64;
    cfg.bootstrap = 20;
    for (auto _ : state) benchmark::DoNotOptimize(learn_layer(c, "meas", truth, cfg));
}
BENCHMARK(BM_LearnPair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
