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
#include <string>
#include <string_view>
#include <vector>

#include "dualsim/tolerances.hpp"

namespace dualsim {

struct Subsystem {
  std::string label;
  std::size_t dim = 0;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered registry of labeled subsystems forming a composite Hilbert space.
///
/// Flat basis indices are row-major over the listed order: the first
/// subsystem is the most significant digit. Basis index 0 of every
/// subsystem is its ready/ground state.
class CompositeLayout {
 public:
  CompositeLayout() = default;

  /// Throws InvalidArgument on empty or duplicate labels, dimension 0, or an
  /// empty subsystem list; DimensionCapExceeded when the product of
  /// dimensions exceeds max_total_dim.
  explicit CompositeLayout(std::vector<Subsystem> subsystems,
                           std::size_t max_total_dim = kDefaultMaxDim);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  bool empty() const { return subsystems_.empty(); }

  bool contains(std::string_view label) const;
  /// Position of the subsystem in the listed order; throws on unknown label.
  std::size_t position(std::string_view label) const;
  std::size_t dim_of(std::string_view label) const;
  /// Flat-index stride of the subsystem at `position`.
  std::size_t stride(std::size_t position) const { return strides_.at(position); }
  std::vector<std::size_t> dims() const;

  /// Basis digit of subsystem `position` inside flat index `flat`.
  std::size_t digit(std::size_t flat, std::size_t position) const {
    return (flat / strides_[position]) % subsystems_[position].dim;
  }
  /// Flat index of the product basis state with the given digits.
  std::size_t flat_index(const std::vector<std::size_t>& digits) const;

  /// Layout of `*this ⊗ other`.
  CompositeLayout concat(const CompositeLayout& other,
                         std::size_t max_total_dim = kDefaultMaxDim) const;

  std::string describe() const;

  bool operator==(const CompositeLayout& other) const {
    return subsystems_ == other.subsystems_;
  }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t total_dim_ = 0;
};

}  // namespace dualsim
