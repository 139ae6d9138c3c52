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

#include "tpfp/formats.hpp"

#include <array>

#include "tpfp/errors.hpp"

namespace tpfp {

FormatDesc::FormatDesc(std::string name, int exp_bits, int man_bits)
    : name_(std::move(name)), exp_bits_(exp_bits), man_bits_(man_bits) {
  if (exp_bits_ < 2 || man_bits_ < 2) {
    throw UsageError("format '" + name_ + "' needs at least 2 exponent and 2 mantissa bits");
  }
  if (exp_bits_ > 30) throw UsageError("format '" + name_ + "': exponent field too wide");
}

namespace {

struct Builtin {
  FormatDesc fmt;
  std::string_view suffix;
};

const std::array<Builtin, 5>& builtins() {
  static const std::array<Builtin, 5> table = {{
      {FormatDesc("fp64", 11, 52), "d"},
      {FormatDesc("fp32", 8, 23), "s"},
      {FormatDesc("fp16", 5, 10), "h"},
      {FormatDesc("fp16alt", 8, 7), "ah"},
      {FormatDesc("fp8", 5, 2), "b"},
  }};
  return table;
}

const std::array<FormatDesc, 5>& builtin_array() {
  static const std::array<FormatDesc, 5> table = {builtins()[0].fmt, builtins()[1].fmt,
                                                  builtins()[2].fmt, builtins()[3].fmt,
                                                  builtins()[4].fmt};
  return table;
}

}  // namespace

const FormatDesc& fp64() { return builtin_array()[0]; }
const FormatDesc& fp32() { return builtin_array()[1]; }
const FormatDesc& fp16() { return builtin_array()[2]; }
const FormatDesc& fp16alt() { return builtin_array()[3]; }
const FormatDesc& fp8() { return builtin_array()[4]; }

std::span<const FormatDesc> builtin_formats() { return builtin_array(); }

const FormatDesc& builtin_format(std::string_view key) {
  const auto& arr = builtin_array();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (arr[i].name() == key || builtins()[i].suffix == key) return arr[i];
  }
  throw LookupError("unknown format '" + std::string(key) + "'");
}

std::string_view mnemonic_suffix(const FormatDesc& fmt) {
  for (const auto& b : builtins()) {
    if (b.fmt == fmt) return b.suffix;
  }
  throw LookupError("format '" + fmt.name() + "' has no built-in mnemonic suffix");
}

std::string_view to_string(FpClass c) {
  switch (c) {
    case FpClass::neg_inf: return "neg_inf";
    case FpClass::neg_normal: return "neg_normal";
    case FpClass::neg_subnormal: return "neg_subnormal";
    case FpClass::neg_zero: return "neg_zero";
    case FpClass::pos_zero: return "pos_zero";
    case FpClass::pos_subnormal: return "pos_subnormal";
    case FpClass::pos_normal: return "pos_normal";
    case FpClass::pos_inf: return "pos_inf";
    case FpClass::signaling_nan: return "signaling_nan";
    case FpClass::quiet_nan: return "quiet_nan";
  }
  return "?";
}

DecodedFp decode(const FormatDesc& fmt, const BitsValue& v) {
  if (v.width() != fmt.width()) {
    throw UsageError("decode: " + std::to_string(v.width()) + "-bit value for " + fmt.name());
  }
  const unsigned m = static_cast<unsigned>(fmt.man_bits());
  DecodedFp d;
  d.negative = v.bit(fmt.width() - 1);
  const long exp_field = static_cast<long>((v.bits() >> m) & ((1UL << fmt.exp_bits()) - 1));
  d.significand = v.bits() & low_mask(m);
  const long all_ones = (1L << fmt.exp_bits()) - 1;
  if (exp_field == all_ones) {
    d.exponent = fmt.emax() + 1;
    if (d.significand.is_zero()) {
      d.cls = d.negative ? FpClass::neg_inf : FpClass::pos_inf;
    } else {
      d.cls = boost::multiprecision::bit_test(d.significand, m - 1) ? FpClass::quiet_nan
                                                                    : FpClass::signaling_nan;
    }
  } else if (exp_field == 0) {
    d.exponent = fmt.emin();
    if (d.significand.is_zero()) {
      d.cls = d.negative ? FpClass::neg_zero : FpClass::pos_zero;
    } else {
      d.cls = d.negative ? FpClass::neg_subnormal : FpClass::pos_subnormal;
    }
  } else {
    d.exponent = exp_field - fmt.bias();
    boost::multiprecision::bit_set(d.significand, m);
    d.cls = d.negative ? FpClass::neg_normal : FpClass::pos_normal;
  }
  return d;
}

BitsValue canonical_nan(const FormatDesc& fmt) {
  const unsigned m = static_cast<unsigned>(fmt.man_bits());
  BigInt bits = low_mask(static_cast<unsigned>(fmt.exp_bits())) << m;
  boost::multiprecision::bit_set(bits, m - 1);
  return BitsValue(std::move(bits), fmt.width());
}

namespace {

BitsValue assemble(const FormatDesc& fmt, bool negative, const BigInt& exp_field,
                   const BigInt& trailing) {
  BigInt bits = (exp_field << fmt.man_bits()) | trailing;
  if (negative) boost::multiprecision::bit_set(bits, fmt.width() - 1);
  return BitsValue(std::move(bits), fmt.width());
}

}  // namespace

BitsValue encode(const FormatDesc& fmt, const DecodedFp& d) {
  const unsigned m = static_cast<unsigned>(fmt.man_bits());
  if (is_nan(d.cls)) return canonical_nan(fmt);
  if (is_inf(d.cls)) return infinity(fmt, d.cls == FpClass::neg_inf);
  if (d.significand.is_zero()) return zero(fmt, d.negative);
  const long top = msb_index(d.significand);
  if (top > static_cast<long>(m)) throw UsageError("encode: significand wider than format");
  if (top == static_cast<long>(m)) {
    if (d.exponent < fmt.emin() || d.exponent > fmt.emax()) {
      throw UsageError("encode: exponent out of range for " + fmt.name());
    }
    return assemble(fmt, d.negative, BigInt(d.exponent + fmt.bias()), d.significand & low_mask(m));
  }
  if (d.exponent != fmt.emin()) throw UsageError("encode: unnormalized significand");
  return assemble(fmt, d.negative, BigInt(0), d.significand);
}

std::uint16_t classify_bits(const FormatDesc& fmt, const BitsValue& v) {
  return static_cast<std::uint16_t>(1U << static_cast<unsigned>(decode(fmt, v).cls));
}

BitsValue max_finite(const FormatDesc& fmt, bool negative) {
  const unsigned e = static_cast<unsigned>(fmt.exp_bits());
  return assemble(fmt, negative, low_mask(e) - 1, low_mask(static_cast<unsigned>(fmt.man_bits())));
}

BitsValue infinity(const FormatDesc& fmt, bool negative) {
  return assemble(fmt, negative, low_mask(static_cast<unsigned>(fmt.exp_bits())), BigInt(0));
}

BitsValue zero(const FormatDesc& fmt, bool negative) {
  return assemble(fmt, negative, BigInt(0), BigInt(0));
}

}  // namespace tpfp
