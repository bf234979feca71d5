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

#include <cstddef>

namespace dualsim {

/// Every numerical threshold used by operations and tests lives here.
struct Tolerances {
  /// Hermiticity, trace, normalization and algebraic identities.
  double algebraic = 1e-12;
  /// Forward/backward evolution and closed-form comparisons.
  double round_trip = 1e-10;
  /// Multi-stage round trips (measure, decohere, undo both).
  double full_round_trip = 1e-9;
  /// Weight of the ready pointer state O_0 that still counts as "ready"
  /// (init) or "emptied" (measurement complete).
  double ready_state = 1e-9;
  /// Input amplitude vectors further than this from unit norm are
  /// renormalized with a warning.
  double amplitude_norm = 1e-9;
  /// Default trace-distance threshold for observer-side distinguishability.
  double distinguishability = 1e-9;
  /// Eigenvalues of a density matrix may dip this far below zero.
  double positivity = 1e-12;
  /// Transition probabilities below this count as forbidden jumps.
  double transition = 1e-12;
};

inline constexpr Tolerances kTol{};

/// Default cap on the total dimension of a composite layout.
inline constexpr std::size_t kDefaultMaxDim = 4096;

}  // namespace dualsim
