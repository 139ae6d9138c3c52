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

#include "tpfp/bits.hpp"

#include <cctype>

#include "tpfp/errors.hpp"

namespace tpfp {

BitsValue::BitsValue(BigInt bits, unsigned width) : bits_(std::move(bits)), width_(width) {
  if (width_ == 0) throw UsageError("bit pattern width must be positive");
  if (bits_ < 0 || msb_index(bits_) >= static_cast<long>(width_)) {
    throw UsageError("bit pattern does not fit in " + std::to_string(width_) + " bits");
  }
}

BitsValue BitsValue::from_u64(std::uint64_t bits, unsigned width) {
  if (width < 64 && (bits >> width) != 0) {
    throw UsageError("bit pattern does not fit in " + std::to_string(width) + " bits");
  }
  BitsValue v;
  v.bits_ = bits;
  v.width_ = width;
  if (width == 0) throw UsageError("bit pattern width must be positive");
  return v;
}

std::uint64_t BitsValue::to_u64() const {
  if (width_ > 64) throw UsageError("bit pattern wider than 64 bits");
  return bits_.convert_to<std::uint64_t>();
}

std::string BitsValue::hex() const {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  const unsigned digits = (width_ + 3) / 4;
  std::string out(digits, '0');
  BigInt rest = bits_;
  for (unsigned i = 0; i < digits; ++i) {
    out[digits - 1 - i] = kDigits[static_cast<unsigned>(rest & 0xF)];
    rest >>= 4;
  }
  return "0x" + out;
}

BitsValue parse_bits(const std::string& text, unsigned width) {
  std::string t;
  for (char c : text) {
    if (c != '_' && c != '\'') t.push_back(c);
  }
  if (t.empty()) throw ParseError("empty numeric literal", 0);
  bool negative = false;
  if (t[0] == '-') {
    negative = true;
    t.erase(0, 1);
  }
  BigInt value = 0;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    for (std::size_t i = 2; i < t.size(); ++i) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t[i])));
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else {
        throw ParseError("bad hex literal '" + text + "'", 0);
      }
      value = value * 16 + d;
    }
  } else {
    for (char c : t) {
      if (c < '0' || c > '9') throw ParseError("bad numeric literal '" + text + "'", 0);
      value = value * 10 + (c - '0');
    }
  }
  if (negative) {
    // two's complement in the requested width
    if (value > (BigInt(1) << (width - 1))) throw UsageError("literal out of range: " + text);
    value = ((BigInt(1) << width) - value) & low_mask(width);
  }
  return BitsValue(value, width);
}

}  // namespace tpfp
