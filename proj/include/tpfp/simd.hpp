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

#ifndef TPFP_SIMD_HPP
#define TPFP_SIMD_HPP

// Register-level view: FLEN-wide registers, NaN-boxed scalars and packed
// vectors with element 0 in the least significant lane.

#include <cstdint>
#include <optional>
#include <span>

#include "tpfp/arith.hpp"
#include "tpfp/bits.hpp"
#include "tpfp/exact.hpp"
#include "tpfp/formats.hpp"

namespace tpfp {

/// A floating-point register of `flen` bits (8..64).
class FpRegister {
 public:
  FpRegister() = default;
  /// Throws UsageError when flen is outside 8..64 or bits do not fit.
  FpRegister(std::uint64_t bits, unsigned flen);

  std::uint64_t bits() const noexcept { return bits_; }
  unsigned flen() const noexcept { return flen_; }

  /// Lane `i` of width `width`; lanes count from the least significant end.
  std::uint64_t lane(unsigned width, unsigned i) const;
  void set_lane(unsigned width, unsigned i, std::uint64_t value);

  BitsValue element(const FormatDesc& fmt, unsigned i) const {
    return BitsValue::from_u64(lane(fmt.width(), i), fmt.width());
  }
  void set_element(const FormatDesc& fmt, unsigned i, const BitsValue& v) {
    set_lane(fmt.width(), i, v.to_u64());
  }

  friend bool operator==(const FpRegister&, const FpRegister&) = default;

 private:
  std::uint64_t bits_ = 0;
  unsigned flen_ = 64;
};

struct VecResult {
  FpRegister value;
  StatusFlags flags;
};

/// Places `v` in the low bits and sets every higher bit.
FpRegister write_scalar(unsigned flen, const FormatDesc& fmt, const BitsValue& v);

/// Low fmt.width bits. With `check_boxing`, an improperly boxed value reads
/// as the canonical NaN.
BitsValue read_scalar(const FormatDesc& fmt, const FpRegister& r, bool check_boxing);

/// True when the high bits above fmt.width are all ones.
bool is_boxed(const FormatDesc& fmt, const FpRegister& r);

/// Number of elements of `fmt` in a FLEN register. Throws
/// UnsupportedOperation unless at least two elements fit.
unsigned vector_length(const FormatDesc& fmt, unsigned flen);

/// Lane-wise application of a same-format operation. `regs` holds one
/// register per operand of `op`; flags are ORed over all lanes.
VecResult vec_map(ArithOp op, const FormatDesc& fmt, RoundingMode rm,
                  std::span<const FpRegister> regs);
VecResult vec_map2(ArithOp op, const FormatDesc& fmt, RoundingMode rm, const FpRegister& ra,
                   const FpRegister& rb);
VecResult vec_map3(ArithOp op, const FormatDesc& fmt, RoundingMode rm, const FpRegister& ra,
                   const FpRegister& rb, const FpRegister& rc);

/// Vector-scalar form: element 0 of `rb` is replicated to every lane. For
/// three-operand ops `rc` supplies the third vector operand.
VecResult vec_scalar(ArithOp op, const FormatDesc& fmt, RoundingMode rm, const FpRegister& ra,
                     const FpRegister& rb, const std::optional<FpRegister>& rc = std::nullopt);

enum class Half { low, high };

/// Half-vector conversion. Widening converts elements
/// [half*n_dst, half*n_dst + n_dst) of the source into all n_dst
/// destination elements. Narrowing converts all n_src source elements into
/// destination elements [half*n_src, half*n_src + n_src) and sets the other
/// destination bits to one. Equal widths convert element-wise and ignore
/// `half`. The narrower format must form a vector; the wider one may fill
/// the register as a single element. Flags cover converted lanes only.
VecResult vec_cvt_half(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                       const FpRegister& r, Half half);

/// Lane-wise FP to integer conversion with integers as wide as the format.
VecResult vec_cvt_to_int(const FormatDesc& fmt, bool is_signed, RoundingMode rm,
                         const FpRegister& r);
/// Lane-wise integer to FP conversion with integers as wide as the format.
VecResult vec_cvt_from_int(const FormatDesc& fmt, bool is_signed, RoundingMode rm,
                           const FpRegister& r);

/// Converts two scalars into elements 2*pair and 2*pair+1 of `dest`; the
/// remaining bits of `dest` are preserved.
VecResult cast_and_pack(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                        const BitsValue& a, const BitsValue& b, const FpRegister& dest,
                        unsigned pair = 0);

/// Lane permutation. Selector s < n picks ra[s]; n <= s < 2n picks rb[s-n].
/// One selector per destination element.
FpRegister shuffle(const FormatDesc& fmt, const FpRegister& ra, const FpRegister& rb,
                   std::span<const unsigned> selectors);

}  // namespace tpfp

#endif  // TPFP_SIMD_HPP
