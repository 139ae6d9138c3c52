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

#ifndef TPFP_HARNESS_HPP
#define TPFP_HARNESS_HPP

// Mixed-precision dot-product case study: stream generation, exact
// reference, accuracy metrics and report formatting.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpfp/exact.hpp"
#include "tpfp/fpumodel.hpp"

namespace tpfp {

/// FP16 normals with unbiased exponent in [exp_min, exp_max), mantissa uniform.
struct StreamDistribution {
  int exp_min = -4;
  int exp_max = 4;
  bool random_signs = false;
};

struct StreamPair {
  std::vector<std::uint16_t> a;
  std::vector<std::uint16_t> b;
};

StreamPair gen_streams(std::size_t n, std::uint64_t seed, const StreamDistribution& dist = {});

/// Exact sum of the exact FP16 products.
ExactReal exact_dot(std::span<const std::uint16_t> a, std::span<const std::uint16_t> b);

/// |got - exact| / |exact| rounded to double. `exact` must be finite and nonzero.
double rel_error(const ExactReal& exact, const ExactReal& got);

/// round(-log2(rel)); rel > 0.
int bits_correct_from_rel(double rel);

/// Bits correct of `got`; nullopt when `got` equals `exact`.
std::optional<int> bits_correct(const ExactReal& exact, const ExactReal& got);

/// Significant bits needed to hold `x` exactly (0 for zero).
unsigned precision_bits(const ExactReal& x);

enum class Variant { a, b, c, d, e };
inline constexpr std::array<Variant, 5> kAllVariants = {Variant::a, Variant::b, Variant::c,
                                                        Variant::d, Variant::e};

char to_char(Variant v);
std::string_view describe(Variant v);
/// Loop body; one iteration consumes `pairs_per_iteration` element pairs.
std::string variant_program(Variant v);
unsigned pairs_per_iteration(Variant v);
const FormatDesc& result_format(Variant v);

struct VariantResult {
  Variant variant = Variant::a;
  std::uint64_t result_bits = 0;
  ExactReal value;
  double rel_error = 0.0;
  std::optional<int> bits_correct;
  double rel_error_vs_fp16_exact = 0.0;
  long instructions = 0;
  double instr_per_pair = 0.0;
  long cycles = 0;
  EnergyReport energy;
  StatusFlags flags;
};

struct CaseStudyReport {
  std::string config;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  StreamDistribution dist;
  ExactReal exact;
  unsigned exact_precision_bits = 0;
  std::uint64_t fp16_exact_bits = 0;
  double fp16_rel_error = 0.0;
  std::optional<int> fp16_bits_correct;
  std::vector<VariantResult> variants;
};

/// Runs one variant on the given streams. n must be even.
VariantResult run_variant(const FpuConfig& cfg, Variant v, const StreamPair& s,
                          const ExactReal& exact, const ExactReal& fp16_exact);

/// Runs all variants on the same streams. Throws UsageError for odd or zero n.
CaseStudyReport run_case_study(const FpuConfig& cfg, std::size_t n, std::uint64_t seed,
                               const StreamDistribution& dist = {});

std::string case_study_text(const CaseStudyReport& r);
std::string case_study_json(const CaseStudyReport& r);

std::string efficiency_text(const FpuConfig& cfg, double freq_hz,
                            const std::vector<EfficiencyRow>& rows);
std::string efficiency_json(const FpuConfig& cfg, double freq_hz,
                            const std::vector<EfficiencyRow>& rows);

}  // namespace tpfp

#endif  // TPFP_HARNESS_HPP
