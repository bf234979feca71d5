// Copyright 2026 The dualsim Authors
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

#include <random>

#include <benchmark/benchmark.h>

#include "dualsim/kernels.hpp"
#include "dualsim/runner.hpp"

namespace {

using dualsim::Complex;
using dualsim::Matrix;
namespace kernels = dualsim::kernels;

Matrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) m(r, c) = Complex(normal(gen), normal(gen));
  }
  return m;
}

// S ⊗ O ⊗ 2^k environment atoms, the decoherence layout.
std::vector<std::size_t> env_dims(std::int64_t atoms) {
  std::vector<std::size_t> dims{2, 3};
  for (std::int64_t k = 0; k < atoms; ++k) dims.push_back(2);
  return dims;
}

Eigen::Index total(const std::vector<std::size_t>& dims) {
  Eigen::Index n = 1;
  for (auto d : dims) n *= static_cast<Eigen::Index>(d);
  return n;
}

template <bool Parallel>
void BM_PartialTrace(benchmark::State& state) {
  const auto dims = env_dims(state.range(0));
  const Matrix rho = random_matrix(total(dims), 1);
  std::vector<bool> keep_vec(dims.size(), false);
  keep_vec[1] = true;
  std::unique_ptr<bool[]> keep(new bool[dims.size()]);
  for (std::size_t k = 0; k < dims.size(); ++k) keep[k] = keep_vec[k];
  const std::span<const bool> mask(keep.get(), dims.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(kernels::partial_trace(rho, dims, mask));
    } else {
      benchmark::DoNotOptimize(kernels::reference::partial_trace(rho, dims, mask));
    }
  }
}
BENCHMARK(BM_PartialTrace<false>)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PartialTrace<true>)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

template <bool Parallel>
void BM_Conjugate(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Matrix u = random_matrix(n, 2);
  const Matrix rho = random_matrix(n, 3);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(kernels::conjugate(u, rho));
    } else {
      benchmark::DoNotOptimize(kernels::reference::conjugate(u, rho));
    }
  }
}
BENCHMARK(BM_Conjugate<false>)->RangeMultiplier(2)->Range(48, 384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Conjugate<true>)->RangeMultiplier(2)->Range(48, 384)->Unit(benchmark::kMicrosecond);

template <bool Parallel>
void BM_ConjugateDiagonal(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Matrix rho = random_matrix(n, 4);
  Eigen::VectorXd e = Eigen::VectorXd::LinSpaced(n, -2.0, 2.0);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(kernels::conjugate_diagonal(e, 0.7, rho));
    } else {
      benchmark::DoNotOptimize(kernels::reference::conjugate_diagonal(e, 0.7, rho));
    }
  }
}
BENCHMARK(BM_ConjugateDiagonal<false>)->RangeMultiplier(4)->Range(96, 1536)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConjugateDiagonal<true>)->RangeMultiplier(4)->Range(96, 1536)->Unit(benchmark::kMicrosecond);

template <bool Parallel>
void BM_Embed(benchmark::State& state) {
  const auto dims = env_dims(state.range(0));
  const kernels::Placement p{dims, {0, 1}};
  const Matrix local = random_matrix(6, 5);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(kernels::embed(p, local));
    } else {
      benchmark::DoNotOptimize(kernels::reference::embed(p, local));
    }
  }
}
BENCHMARK(BM_Embed<false>)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Embed<true>)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

// Whole ensemble, event loop on one thread vs all threads.
void BM_UndoEnsemble(benchmark::State& state) {
  const auto sc = dualsim::parse_scenario(
      "experiment: undo\nseed: 1\nevents: 2000\nsystem:\n  amplitudes: [0.6, 0.8]\n");
  const dualsim::RunOptions opts{.parallel = state.range(0) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(dualsim::run(sc, opts));
}
BENCHMARK(BM_UndoEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
