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

#ifndef TPFP_ARITH_HPP
#define TPFP_ARITH_HPP

// Scalar arithmetic on encoded values. Every operation forms an exact
// intermediate and rounds it once. NaN results are always the canonical
// quiet NaN of the destination format.

#include <optional>
#include <span>
#include <string_view>

#include "tpfp/bits.hpp"
#include "tpfp/exact.hpp"
#include "tpfp/formats.hpp"

namespace tpfp {

/// Rounds a finite exact value into `fmt`. Tininess is detected after
/// rounding; UF is raised only for tiny and inexact results.
FpResult round(const FormatDesc& fmt, const ExactReal& x, RoundingMode rm);

/// Rounds `x` where the true value lies strictly between x and the next
/// value one unit of x's last significand bit further from zero when
/// `sticky` is set. Used by quotient and root paths.
FpResult round_sticky(const FormatDesc& fmt, const ExactReal& x, bool sticky, RoundingMode rm);

FpResult add(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b);
FpResult sub(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b);
FpResult mul(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b);

/// a*b + c, single rounding.
FpResult fma(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
             const BitsValue& c);
/// a*b - c
FpResult fmsub(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
               const BitsValue& c);
/// -(a*b) - c
FpResult fnmadd(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
                const BitsValue& c);
/// -(a*b) + c
FpResult fnmsub(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
                const BitsValue& c);

/// Expanding FMA: a, b in src, c and the result in dst. Throws
/// UnsupportedOperation when dst is narrower than src.
FpResult fma_multi(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                   const BitsValue& a, const BitsValue& b, const BitsValue& c);
/// Expanding multiply: exact src product rounded once into dst.
FpResult mul_multi(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                   const BitsValue& a, const BitsValue& b);

/// Iterations the radix-8 divider needs for a correctly rounded result.
int divider_iterations(const FormatDesc& fmt);

/// Division. With `iterations`, the quotient significand is truncated to
/// 3*iterations bits before rounding; NX then reports inexactness against
/// the exact quotient. Throws UsageError for 0 or too many iterations.
FpResult div(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
             std::optional<int> iterations = std::nullopt);
FpResult sqrt(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a);

enum class CmpOp { eq, lt, le };
/// Result is a 1-bit value. Any NaN gives 0; eq signals only on sNaN.
FpResult compare(const FormatDesc& fmt, CmpOp op, const BitsValue& a, const BitsValue& b);

enum class MinMaxOp { min, max };
FpResult minmax(const FormatDesc& fmt, MinMaxOp op, const BitsValue& a, const BitsValue& b);

enum class SignOp { sgnj, sgnjn, sgnjx };
BitsValue sign_inject(const FormatDesc& fmt, SignOp op, const BitsValue& a, const BitsValue& b);

FpResult cvt_fp_fp(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                   const BitsValue& a);
/// Saturating FP to integer conversion; the result has `int_width` bits in
/// two's complement.
FpResult cvt_fp_int(const FormatDesc& fmt, unsigned int_width, bool is_signed, RoundingMode rm,
                    const BitsValue& a);
FpResult cvt_int_fp(unsigned int_width, bool is_signed, const FormatDesc& fmt, RoundingMode rm,
                    const BitsValue& a);

/// Same-format operations that can be applied lane-wise.
enum class ArithOp {
  add, sub, mul, div, sqrt, min, max, sgnj, sgnjn, sgnjx,
  feq, flt, fle, fmadd, fmsub, fnmadd, fnmsub,
};

int arity(ArithOp op);
std::string_view to_string(ArithOp op);
/// Comparisons produce 0/1 rather than an FP value.
bool is_comparison(ArithOp op);

/// Dispatches a same-format operation. Comparison results are zero-extended
/// to the format width so they can occupy a vector lane.
FpResult evaluate(ArithOp op, const FormatDesc& fmt, RoundingMode rm,
                  std::span<const BitsValue> operands);

}  // namespace tpfp

#endif  // TPFP_ARITH_HPP
