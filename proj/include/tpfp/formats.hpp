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

#ifndef TPFP_FORMATS_HPP
#define TPFP_FORMATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "tpfp/bits.hpp"

namespace tpfp {

/// A binary interchange format with a sign bit, `exp_bits` of biased
/// exponent and `man_bits` of trailing significand.
class FormatDesc {
 public:
  /// Throws UsageError unless exp_bits >= 2 and man_bits >= 2.
  FormatDesc(std::string name, int exp_bits, int man_bits);

  const std::string& name() const noexcept { return name_; }
  int exp_bits() const noexcept { return exp_bits_; }
  int man_bits() const noexcept { return man_bits_; }
  unsigned width() const noexcept { return static_cast<unsigned>(1 + exp_bits_ + man_bits_); }
  long bias() const noexcept { return (1L << (exp_bits_ - 1)) - 1; }
  long emin() const noexcept { return 1 - bias(); }
  long emax() const noexcept { return bias(); }
  /// Significand precision including the hidden bit.
  int precision() const noexcept { return man_bits_ + 1; }

  /// Same geometry. Names are labels only.
  friend bool operator==(const FormatDesc& a, const FormatDesc& b) {
    return a.exp_bits_ == b.exp_bits_ && a.man_bits_ == b.man_bits_;
  }

 private:
  std::string name_;
  int exp_bits_;
  int man_bits_;
};

const FormatDesc& fp64();
const FormatDesc& fp32();
const FormatDesc& fp16();
const FormatDesc& fp16alt();
const FormatDesc& fp8();

/// The five built-in formats, widest first.
std::span<const FormatDesc> builtin_formats();

/// Looks up a built-in by name ("fp16alt") or by mnemonic suffix ("ah").
/// Throws LookupError.
const FormatDesc& builtin_format(std::string_view name_or_suffix);

/// Mnemonic suffix of a built-in format: d, s, h, ah, b.
std::string_view mnemonic_suffix(const FormatDesc& fmt);

enum class FpClass {
  neg_inf,
  neg_normal,
  neg_subnormal,
  neg_zero,
  pos_zero,
  pos_subnormal,
  pos_normal,
  pos_inf,
  signaling_nan,
  quiet_nan,
};

std::string_view to_string(FpClass c);

inline bool is_nan(FpClass c) { return c == FpClass::signaling_nan || c == FpClass::quiet_nan; }
inline bool is_inf(FpClass c) { return c == FpClass::neg_inf || c == FpClass::pos_inf; }
inline bool is_zero(FpClass c) { return c == FpClass::neg_zero || c == FpClass::pos_zero; }

/// Finite values are `significand * 2^(exponent - man_bits)`. Normals carry
/// the hidden bit; subnormals use exponent == emin. For inf/NaN the
/// significand holds the raw trailing field and exponent is emax + 1.
struct DecodedFp {
  FpClass cls = FpClass::pos_zero;
  bool negative = false;
  long exponent = 0;
  BigInt significand = 0;
};

DecodedFp decode(const FormatDesc& fmt, const BitsValue& v);
BitsValue encode(const FormatDesc& fmt, const DecodedFp& d);
BitsValue canonical_nan(const FormatDesc& fmt);

/// One-hot mask in RISC-V fclass order (bit 0 = -inf ... bit 9 = quiet NaN).
std::uint16_t classify_bits(const FormatDesc& fmt, const BitsValue& v);

/// Largest finite magnitude, as a bit pattern with sign 0.
BitsValue max_finite(const FormatDesc& fmt, bool negative = false);
BitsValue infinity(const FormatDesc& fmt, bool negative = false);
BitsValue zero(const FormatDesc& fmt, bool negative = false);

inline bool sign_bit(const FormatDesc& fmt, const BitsValue& v) { return v.bit(fmt.width() - 1); }

}  // namespace tpfp

#endif  // TPFP_FORMATS_HPP
