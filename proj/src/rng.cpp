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

#include "dualsim/rng.hpp"

#include "dualsim/errors.hpp"

namespace dualsim {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, Stream stream, std::uint64_t substream) {
  std::uint64_t k = mix64(seed + kGamma);
  k = mix64(k ^ (static_cast<std::uint64_t>(stream) * kGamma));
  key_ = mix64(k + (substream + 1) * kGamma);
}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::size_t sample_index(std::span<const double> probabilities, double u) {
  if (probabilities.empty()) throw InvalidArgument("sample_index: empty distribution");
  double total = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw InvalidArgument("sample_index: negative probability");
    total += p;
  }
  if (!(total > 0.0)) throw InvalidArgument("sample_index: probabilities sum to zero");

  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) continue;
    last_positive = k;
    cumulative += probabilities[k];
    if (target < cumulative) return k;
  }
  return last_positive;
}

}  // namespace dualsim
