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

#include "dualsim/layout.hpp"

#include <set>
#include <sstream>

#include "dualsim/errors.hpp"

namespace dualsim {

CompositeLayout::CompositeLayout(std::vector<Subsystem> subsystems,
                                 std::size_t max_total_dim)
    : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) {
    throw InvalidArgument("composite layout needs at least one subsystem");
  }
  std::set<std::string, std::less<>> seen;
  std::size_t total = 1;
  for (const auto& part : subsystems_) {
    if (part.label.empty()) throw InvalidArgument("subsystem label must not be empty");
    if (!seen.insert(part.label).second) {
      throw InvalidArgument("duplicate subsystem label '" + part.label + "'");
    }
    if (part.dim == 0) {
      throw InvalidArgument("subsystem '" + part.label + "' has dimension 0");
    }
    if (total > max_total_dim / part.dim) {
      throw DimensionCapExceeded("composite dimension exceeds cap " +
                                 std::to_string(max_total_dim));
    }
    total *= part.dim;
  }
  total_dim_ = total;

  strides_.assign(subsystems_.size(), 1);
  for (std::size_t k = subsystems_.size(); k-- > 1;) {
    strides_[k - 1] = strides_[k] * subsystems_[k].dim;
  }
}

bool CompositeLayout::contains(std::string_view label) const {
  for (const auto& part : subsystems_) {
    if (part.label == label) return true;
  }
  return false;
}

std::size_t CompositeLayout::position(std::string_view label) const {
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (subsystems_[k].label == label) return k;
  }
  throw InvalidArgument("unknown subsystem label '" + std::string(label) + "' in layout " +
                        describe());
}

std::size_t CompositeLayout::dim_of(std::string_view label) const {
  return subsystems_[position(label)].dim;
}

std::vector<std::size_t> CompositeLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(subsystems_.size());
  for (const auto& part : subsystems_) out.push_back(part.dim);
  return out;
}

std::size_t CompositeLayout::flat_index(const std::vector<std::size_t>& digits) const {
  if (digits.size() != subsystems_.size()) {
    throw InvalidArgument("expected " + std::to_string(subsystems_.size()) +
                          " basis digits, got " + std::to_string(digits.size()));
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] >= subsystems_[k].dim) {
      throw InvalidArgument("basis index " + std::to_string(digits[k]) +
                            " out of range for subsystem '" + subsystems_[k].label + "'");
    }
    flat += digits[k] * strides_[k];
  }
  return flat;
}

CompositeLayout CompositeLayout::concat(const CompositeLayout& other,
                                        std::size_t max_total_dim) const {
  auto parts = subsystems_;
  parts.insert(parts.end(), other.subsystems_.begin(), other.subsystems_.end());
  return CompositeLayout(std::move(parts), max_total_dim);
}

std::string CompositeLayout::describe() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (k) out << ", ";
    out << subsystems_[k].label << ':' << subsystems_[k].dim;
  }
  out << ']';
  return out.str();
}

}  // namespace dualsim
