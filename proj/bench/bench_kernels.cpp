// Copyright 2026 The qnnmi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Serial vs OpenMP batched measurement kernel, one full-batch shift-rule
// epoch worth of work: (2P + 1) unitaries times N samples.
#include "qnnmi/circuit.hpp"
#include "qnnmi/kernels.hpp"
#include "qnnmi/random.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace qnnmi;

struct Workload {
    std::vector<Matrix> unitaries;
    kernels::SampleBatch batch;
};

Workload make_workload(std::size_t samples) {
    Rng rng(1, Rng::kTest);
    const auto c = build_brickwall({4, 4, 0});
    std::vector<double> theta(20);
    for (auto &t : theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    std::vector<StateVector> states;
    for (std::size_t i = 0; i < samples; ++i) {
        states.push_back(StateVector::basis(4, rng.below(16)));
    }
    return {kernels::shifted_unitaries(c, theta, std::numbers::pi / 2), kernels::SampleBatch(states)};
}

void run(benchmark::State &state, kernels::Backend backend) {
    const auto w = make_workload(static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(w.unitaries.size() * w.batch.size());
    for (auto _ : state) {
        if (backend == kernels::Backend::Serial) {
            kernels::excited_probs_serial(w.unitaries, w.batch, 0, out);
        } else {
            kernels::excited_probs_omp(w.unitaries, w.batch, 0, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * out.size()));
    state.counters["threads"] = kernels::max_threads();
}

void BM_ExcitedProbsSerial(benchmark::State &state) { run(state, kernels::Backend::Serial); }
void BM_ExcitedProbsOpenMP(benchmark::State &state) { run(state, kernels::Backend::OpenMP); }

BENCHMARK(BM_ExcitedProbsSerial)->Arg(80)->Arg(546)->Arg(614);
BENCHMARK(BM_ExcitedProbsOpenMP)->Arg(80)->Arg(546)->Arg(614);

}  // namespace

BENCHMARK_MAIN();
