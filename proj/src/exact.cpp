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

#include "tpfp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "tpfp/arith.hpp"
#include "tpfp/errors.hpp"

namespace tpfp {

std::string_view to_string(RoundingMode rm) {
  switch (rm) {
    case RoundingMode::rne: return "rne";
    case RoundingMode::rtz: return "rtz";
    case RoundingMode::rdn: return "rdn";
    case RoundingMode::rup: return "rup";
    case RoundingMode::rmm: return "rmm";
  }
  return "?";
}

RoundingMode parse_rounding_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (RoundingMode rm : kAllRoundingModes) {
    if (to_string(rm) == lower) return rm;
  }
  throw ParseError("unknown rounding mode '" + std::string(text) + "'", 0);
}

std::uint8_t StatusFlags::to_bits() const {
  return static_cast<std::uint8_t>((nv << 4) | (dz << 3) | (of << 2) | (uf << 1) | (nx << 0));
}

StatusFlags StatusFlags::from_bits(std::uint8_t bits) {
  StatusFlags f;
  f.nv = bits & 0x10;
  f.dz = bits & 0x08;
  f.of = bits & 0x04;
  f.uf = bits & 0x02;
  f.nx = bits & 0x01;
  return f;
}

std::string StatusFlags::to_string() const {
  std::string s = "-----";
  if (nv) s[0] = 'V';
  if (dz) s[1] = 'Z';
  if (of) s[2] = 'O';
  if (uf) s[3] = 'U';
  if (nx) s[4] = 'X';
  return s;
}

ExactReal ExactReal::finite(bool negative, BigInt significand, long exponent) {
  ExactReal r;
  r.negative_ = negative;
  r.significand_ = std::move(significand);
  r.exponent_ = r.significand_.is_zero() ? 0 : exponent;
  return r;
}

ExactReal ExactReal::from_integer(const BigInt& v) {
  return v < 0 ? finite(true, -v, 0) : finite(false, v, 0);
}

ExactReal ExactReal::from_decoded(const FormatDesc& fmt, const DecodedFp& d) {
  if (is_nan(d.cls)) return nan();
  if (is_inf(d.cls)) return inf(d.negative);
  return finite(d.negative, d.significand, d.exponent - fmt.man_bits());
}

ExactReal exact_mul(const ExactReal& a, const ExactReal& b) {
  return ExactReal::finite(a.negative_ != b.negative_, a.significand_ * b.significand_,
                           a.exponent_ + b.exponent_);
}

ExactReal exact_add(const ExactReal& a, const ExactReal& b, bool round_down) {
  if (a.is_zero() && b.is_zero()) {
    return ExactReal::zero(a.negative_ == b.negative_ ? a.negative_ : round_down);
  }
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const long e = std::min(a.exponent_, b.exponent_);
  BigInt sa = a.significand_ << (a.exponent_ - e);
  BigInt sb = b.significand_ << (b.exponent_ - e);
  if (a.negative_ == b.negative_) return ExactReal::finite(a.negative_, sa + sb, e);
  if (sa == sb) return ExactReal::zero(round_down);
  if (sa > sb) return ExactReal::finite(a.negative_, sa - sb, e);
  return ExactReal::finite(b.negative_, sb - sa, e);
}

int compare(const ExactReal& a, const ExactReal& b) {
  auto rank = [](const ExactReal& x) {
    if (x.kind_ == ExactReal::Kind::inf) return x.negative_ ? -2 : 2;
    if (x.is_zero()) return 0;
    return x.negative_ ? -1 : 1;
  };
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0 || ra == 2 || ra == -2) return 0;
  // same sign, both finite nonzero
  const long ta = a.exponent_ + msb_index(a.significand_);
  const long tb = b.exponent_ + msb_index(b.significand_);
  int mag;
  if (ta != tb) {
    mag = ta < tb ? -1 : 1;
  } else {
    const long e = std::min(a.exponent_, b.exponent_);
    const BigInt sa = a.significand_ << (a.exponent_ - e);
    const BigInt sb = b.significand_ << (b.exponent_ - e);
    mag = sa < sb ? -1 : (sa > sb ? 1 : 0);
  }
  return ra > 0 ? mag : -mag;
}

double ExactReal::to_double() const {
  BitsValue bits;
  if (kind_ == Kind::nan) {
    bits = canonical_nan(fp64());
  } else if (kind_ == Kind::inf) {
    bits = infinity(fp64(), negative_);
  } else {
    bits = round(fp64(), *this, RoundingMode::rne).value;
  }
  return std::bit_cast<double>(bits.to_u64());
}

}  // namespace tpfp
