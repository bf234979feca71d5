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

#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace dualsim {

/// Stream tags that keep independent uses of one scenario seed apart.
enum class Stream : std::uint64_t {
  kEvents = 1,
  kCouplings = 2,
  kBaseline = 3,
  kTiming = 4,
  kTest = 99,
};

/// Counter-based generator: output k of stream (seed, stream, substream) is
/// a fixed function of those four numbers, so any event can be regenerated
/// on any thread without replaying the others.
///
/// The mixing function is the SplitMix64 finalizer.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

/// Inverse-CDF draw from a discrete distribution given a uniform u in [0, 1).
/// Indices with zero probability are never returned.
std::size_t sample_index(std::span<const double> probabilities, double u);

}  // namespace dualsim
