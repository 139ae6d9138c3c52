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

#ifndef TPFP_BITS_HPP
#define TPFP_BITS_HPP

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tpfp {

/// Unbounded integer used for significands and wide bit patterns.
using BigInt = boost::multiprecision::cpp_int;

/// Position of the most significant set bit; -1 for zero.
inline long msb_index(const BigInt& v) {
  return v.is_zero() ? -1L : static_cast<long>(boost::multiprecision::msb(v));
}

inline BigInt low_mask(unsigned width) { return (BigInt(1) << width) - 1; }

/// A raw bit pattern of a declared width. Equality is bitwise and includes
/// the width.
class BitsValue {
 public:
  BitsValue() = default;
  BitsValue(BigInt bits, unsigned width);

  static BitsValue from_u64(std::uint64_t bits, unsigned width);
  static BitsValue ones(unsigned width) { return BitsValue(low_mask(width), width); }

  const BigInt& bits() const noexcept { return bits_; }
  unsigned width() const noexcept { return width_; }

  /// Throws UsageError when the width exceeds 64.
  std::uint64_t to_u64() const;
  bool bit(unsigned i) const { return boost::multiprecision::bit_test(bits_, i); }

  /// "0x" followed by ceil(width/4) hex digits.
  std::string hex() const;

  friend bool operator==(const BitsValue& a, const BitsValue& b) {
    return a.width_ == b.width_ && a.bits_ == b.bits_;
  }

 private:
  BigInt bits_ = 0;
  unsigned width_ = 0;
};

/// Parses "0x..." hex or plain decimal into a value of the given width.
BitsValue parse_bits(const std::string& text, unsigned width);

}  // namespace tpfp

#endif  // TPFP_BITS_HPP
