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

#ifndef TPFP_EXACT_HPP
#define TPFP_EXACT_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "tpfp/bits.hpp"
#include "tpfp/formats.hpp"

namespace tpfp {

/// The five static RISC-V rounding modes.
enum class RoundingMode { rne, rtz, rdn, rup, rmm };

inline constexpr RoundingMode kAllRoundingModes[] = {RoundingMode::rne, RoundingMode::rtz,
                                                     RoundingMode::rdn, RoundingMode::rup,
                                                     RoundingMode::rmm};

std::string_view to_string(RoundingMode rm);
/// Accepts rne/rtz/rdn/rup/rmm (case-insensitive). Throws ParseError.
RoundingMode parse_rounding_mode(std::string_view text);

/// IEEE accrued exception flags.
struct StatusFlags {
  bool nv = false;
  bool dz = false;
  bool of = false;
  bool uf = false;
  bool nx = false;

  StatusFlags& operator|=(const StatusFlags& o) {
    nv |= o.nv;
    dz |= o.dz;
    of |= o.of;
    uf |= o.uf;
    nx |= o.nx;
    return *this;
  }
  friend StatusFlags operator|(StatusFlags a, const StatusFlags& b) { return a |= b; }
  friend bool operator==(const StatusFlags&, const StatusFlags&) = default;

  bool any() const { return nv || dz || of || uf || nx; }
  /// RISC-V fflags layout: NV=4 DZ=3 OF=2 UF=1 NX=0.
  std::uint8_t to_bits() const;
  static StatusFlags from_bits(std::uint8_t bits);
  /// Five characters in NV DZ OF UF NX order, e.g. "--OUX"; "-----" when clear.
  std::string to_string() const;
};

/// Result bits plus the flags raised while producing them.
struct FpResult {
  BitsValue value;
  StatusFlags flags;
};

/// Exact value `(-1)^negative * significand * 2^exponent`, or inf/NaN.
/// A zero significand is the zero representation; its sign is kept.
class ExactReal {
 public:
  enum class Kind { finite, inf, nan };

  ExactReal() = default;
  static ExactReal finite(bool negative, BigInt significand, long exponent);
  static ExactReal zero(bool negative = false) { return finite(negative, 0, 0); }
  static ExactReal inf(bool negative) {
    ExactReal r;
    r.kind_ = Kind::inf;
    r.negative_ = negative;
    return r;
  }
  static ExactReal nan() {
    ExactReal r;
    r.kind_ = Kind::nan;
    return r;
  }
  static ExactReal from_integer(const BigInt& v);
  /// Exact value of a decoded pattern (NaN classes map to nan()).
  static ExactReal from_decoded(const FormatDesc& fmt, const DecodedFp& d);
  static ExactReal from_bits(const FormatDesc& fmt, const BitsValue& v) {
    return from_decoded(fmt, decode(fmt, v));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  bool is_zero() const noexcept { return kind_ == Kind::finite && significand_.is_zero(); }
  bool negative() const noexcept { return negative_; }
  long exponent() const noexcept { return exponent_; }
  const BigInt& significand() const noexcept { return significand_; }

  ExactReal operator-() const {
    ExactReal r = *this;
    r.negative_ = !r.negative_;
    return r;
  }

  /// Exact product of finite values; sign is the xor of operand signs.
  friend ExactReal exact_mul(const ExactReal& a, const ExactReal& b);
  /// Exact sum of finite values. An exact zero sum of opposite-signed
  /// operands is +0, or -0 when `round_down` is set.
  friend ExactReal exact_add(const ExactReal& a, const ExactReal& b, bool round_down);

  /// Finite comparison: -1, 0, +1 (zeros compare equal).
  friend int compare(const ExactReal& a, const ExactReal& b);

  /// Nearest double (round-to-nearest-even through the FP64 rounding path).
  double to_double() const;

 private:
  Kind kind_ = Kind::finite;
  bool negative_ = false;
  long exponent_ = 0;
  BigInt significand_ = 0;
};

}  // namespace tpfp

#endif  // TPFP_EXACT_HPP
