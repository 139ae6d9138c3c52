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

#include "tpfp/simd.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "tpfp/errors.hpp"

namespace tpfp {

namespace {

std::uint64_t mask64(unsigned width) { return width >= 64 ? ~0ULL : (1ULL << width) - 1; }

void require_fits(const FormatDesc& fmt, unsigned flen) {
  if (fmt.width() > flen) {
    throw UnsupportedOperation(fmt.name() + " is wider than FLEN=" + std::to_string(flen));
  }
}

void require_same_flen(const FpRegister& a, const FpRegister& b) {
  if (a.flen() != b.flen()) throw UsageError("register FLEN mismatch");
}

}  // namespace

FpRegister::FpRegister(std::uint64_t bits, unsigned flen) : bits_(bits), flen_(flen) {
  if (flen < 8 || flen > 64) throw UsageError("FLEN must be within 8..64");
  if ((bits & ~mask64(flen)) != 0) throw UsageError("register bits exceed FLEN");
}

std::uint64_t FpRegister::lane(unsigned width, unsigned i) const {
  if (width == 0 || (i + 1) * width > flen_) throw UsageError("lane out of range");
  return (bits_ >> (i * width)) & mask64(width);
}

void FpRegister::set_lane(unsigned width, unsigned i, std::uint64_t value) {
  if (width == 0 || (i + 1) * width > flen_) throw UsageError("lane out of range");
  if ((value & ~mask64(width)) != 0) throw UsageError("lane value exceeds lane width");
  const std::uint64_t m = mask64(width) << (i * width);
  bits_ = (bits_ & ~m) | (value << (i * width));
}

FpRegister write_scalar(unsigned flen, const FormatDesc& fmt, const BitsValue& v) {
  require_fits(fmt, flen);
  if (v.width() != fmt.width()) throw UsageError("scalar width does not match format");
  const std::uint64_t high = mask64(flen) & ~mask64(fmt.width());
  return FpRegister(high | v.to_u64(), flen);
}

bool is_boxed(const FormatDesc& fmt, const FpRegister& r) {
  require_fits(fmt, r.flen());
  const std::uint64_t high = mask64(r.flen()) & ~mask64(fmt.width());
  return (r.bits() & high) == high;
}

BitsValue read_scalar(const FormatDesc& fmt, const FpRegister& r, bool check_boxing) {
  if (check_boxing && !is_boxed(fmt, r)) return canonical_nan(fmt);
  require_fits(fmt, r.flen());
  return BitsValue::from_u64(r.bits() & mask64(fmt.width()), fmt.width());
}

unsigned vector_length(const FormatDesc& fmt, unsigned flen) {
  const unsigned n = flen / fmt.width();
  if (n < 2) {
    throw UnsupportedOperation("no SIMD vectors of " + fmt.name() + " at FLEN=" +
                               std::to_string(flen));
  }
  return n;
}

VecResult vec_map(ArithOp op, const FormatDesc& fmt, RoundingMode rm,
                  std::span<const FpRegister> regs) {
  const int n_ops = arity(op);
  if (static_cast<int>(regs.size()) != n_ops) throw UsageError("operand count mismatch");
  const unsigned flen = regs[0].flen();
  for (const auto& r : regs) require_same_flen(r, regs[0]);
  const unsigned n = vector_length(fmt, flen);
  VecResult out{FpRegister(0, flen), {}};
  std::array<BitsValue, 3> lane_ops;
  for (unsigned i = 0; i < n; ++i) {
    for (int k = 0; k < n_ops; ++k) lane_ops[k] = regs[k].element(fmt, i);
    const FpResult r = evaluate(op, fmt, rm, std::span<const BitsValue>(lane_ops.data(), n_ops));
    out.value.set_element(fmt, i, r.value);
    out.flags |= r.flags;
  }
  return out;
}

VecResult vec_map2(ArithOp op, const FormatDesc& fmt, RoundingMode rm, const FpRegister& ra,
                   const FpRegister& rb) {
  const std::array<FpRegister, 2> regs{ra, rb};
  return vec_map(op, fmt, rm, regs);
}

VecResult vec_map3(ArithOp op, const FormatDesc& fmt, RoundingMode rm, const FpRegister& ra,
                   const FpRegister& rb, const FpRegister& rc) {
  const std::array<FpRegister, 3> regs{ra, rb, rc};
  return vec_map(op, fmt, rm, regs);
}

VecResult vec_scalar(ArithOp op, const FormatDesc& fmt, RoundingMode rm, const FpRegister& ra,
                     const FpRegister& rb, const std::optional<FpRegister>& rc) {
  const unsigned n = vector_length(fmt, ra.flen());
  require_same_flen(ra, rb);
  FpRegister rep(0, rb.flen());
  const BitsValue s = rb.element(fmt, 0);
  for (unsigned i = 0; i < n; ++i) rep.set_element(fmt, i, s);
  if (arity(op) == 3) {
    if (!rc) throw UsageError("three-operand vector-scalar op needs a third register");
    return vec_map3(op, fmt, rm, ra, rep, *rc);
  }
  if (arity(op) == 1) throw UsageError("vector-scalar form needs a binary or ternary op");
  return vec_map2(op, fmt, rm, ra, rep);
}

VecResult vec_cvt_half(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                       const FpRegister& r, Half half) {
  const unsigned flen = r.flen();
  require_fits(src, flen);
  require_fits(dst, flen);
  const unsigned narrow = std::min(src.width(), dst.width());
  if (flen / narrow < 2) {
    throw UnsupportedOperation("vector conversion " + src.name() + "->" + dst.name() +
                               " has no vector operand at FLEN=" + std::to_string(flen));
  }
  const unsigned n_src = flen / src.width();
  const unsigned n_dst = flen / dst.width();
  const unsigned h = half == Half::high ? 1 : 0;
  VecResult out{FpRegister(0, flen), {}};
  if (src.width() == dst.width()) {
    for (unsigned i = 0; i < n_src; ++i) {
      const FpResult c = cvt_fp_fp(src, dst, rm, r.element(src, i));
      out.value.set_element(dst, i, c.value);
      out.flags |= c.flags;
    }
  } else if (dst.width() > src.width()) {
    for (unsigned i = 0; i < n_dst; ++i) {
      const FpResult c = cvt_fp_fp(src, dst, rm, r.element(src, h * n_dst + i));
      out.value.set_element(dst, i, c.value);
      out.flags |= c.flags;
    }
  } else {
    out.value = FpRegister(mask64(flen), flen);
    for (unsigned i = 0; i < n_src; ++i) {
      const FpResult c = cvt_fp_fp(src, dst, rm, r.element(src, i));
      out.value.set_element(dst, h * n_src + i, c.value);
      out.flags |= c.flags;
    }
  }
  return out;
}

VecResult vec_cvt_to_int(const FormatDesc& fmt, bool is_signed, RoundingMode rm,
                         const FpRegister& r) {
  const unsigned n = vector_length(fmt, r.flen());
  VecResult out{FpRegister(0, r.flen()), {}};
  for (unsigned i = 0; i < n; ++i) {
    const FpResult c = cvt_fp_int(fmt, fmt.width(), is_signed, rm, r.element(fmt, i));
    out.value.set_lane(fmt.width(), i, c.value.to_u64());
    out.flags |= c.flags;
  }
  return out;
}

VecResult vec_cvt_from_int(const FormatDesc& fmt, bool is_signed, RoundingMode rm,
                           const FpRegister& r) {
  const unsigned n = vector_length(fmt, r.flen());
  VecResult out{FpRegister(0, r.flen()), {}};
  for (unsigned i = 0; i < n; ++i) {
    const BitsValue in = BitsValue::from_u64(r.lane(fmt.width(), i), fmt.width());
    const FpResult c = cvt_int_fp(fmt.width(), is_signed, fmt, rm, in);
    out.value.set_element(fmt, i, c.value);
    out.flags |= c.flags;
  }
  return out;
}

VecResult cast_and_pack(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                        const BitsValue& a, const BitsValue& b, const FpRegister& dest,
                        unsigned pair) {
  require_fits(src, dest.flen());
  if ((2 * pair + 2) * dst.width() > dest.flen()) {
    throw UnsupportedOperation("cast-and-pack pair " + std::to_string(pair) + " of " +
                               dst.name() + " does not fit FLEN=" +
                               std::to_string(dest.flen()));
  }
  const FpResult ca = cvt_fp_fp(src, dst, rm, a);
  const FpResult cb = cvt_fp_fp(src, dst, rm, b);
  VecResult out{dest, ca.flags | cb.flags};
  out.value.set_element(dst, 2 * pair, ca.value);
  out.value.set_element(dst, 2 * pair + 1, cb.value);
  return out;
}

FpRegister shuffle(const FormatDesc& fmt, const FpRegister& ra, const FpRegister& rb,
                   std::span<const unsigned> selectors) {
  require_same_flen(ra, rb);
  const unsigned n = vector_length(fmt, ra.flen());
  if (selectors.size() != n) throw UsageError("one selector per element required");
  FpRegister out(0, ra.flen());
  for (unsigned i = 0; i < n; ++i) {
    const unsigned s = selectors[i];
    if (s >= 2 * n) throw UsageError("selector out of range");
    out.set_lane(fmt.width(), i, s < n ? ra.lane(fmt.width(), s) : rb.lane(fmt.width(), s - n));
  }
  return out;
}

}  // namespace tpfp
