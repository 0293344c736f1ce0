// Copyright 2026 The testcover Authors
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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace testcover {

/// An exhaustive search would exceed its configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran past its deadline.
class TimeoutError : public ResourceLimitError {
 public:
  using ResourceLimitError::ResourceLimitError;
};

/// A structural property that the algorithms rely on did not hold. Always an
/// upstream bug, never a property of the input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Budgets shared by every exhaustive search.
struct SolverConfig {
  /// Largest test count accepted by the exact minimum search.
  std::size_t cap_m = 24;
  /// Largest number of subcollections a bounded enumeration may visit.
  std::uint64_t max_enumeration = 100'000'000;
  /// Threads used by the subset searches. Results never depend on it.
  std::size_t workers = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

}  // namespace testcover
