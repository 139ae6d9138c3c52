// Copyright 2026 The tpfpu Authors
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

#ifndef TPFP_TESTS_PROPERTIES_HPP
#define TPFP_TESTS_PROPERTIES_HPP

// Randomized algebraic properties of the arithmetic and SIMD layers.

#include <cstdint>
#include <string>
#include <vector>

namespace properties {

struct Outcome {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
};

using Property = Outcome (*)(std::uint64_t cases, std::uint64_t seed);

Outcome rounding_monotonicity(std::uint64_t cases, std::uint64_t seed);
Outcome directed_bracketing(std::uint64_t cases, std::uint64_t seed);
Outcome commutativity(std::uint64_t cases, std::uint64_t seed);
Outcome nan_canonicalization(std::uint64_t cases, std::uint64_t seed);
Outcome boxing_round_trip(std::uint64_t cases, std::uint64_t seed);
Outcome lane_isolation(std::uint64_t cases, std::uint64_t seed);
Outcome vector_scalar_equivalence(std::uint64_t cases, std::uint64_t seed);

struct Entry {
  const char* name;
  Property run;
};
const std::vector<Entry>& all();

}  // namespace properties

#endif  // TPFP_TESTS_PROPERTIES_HPP
