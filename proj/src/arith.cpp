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

#include "tpfp/arith.hpp"

#include <algorithm>
#include <array>

#include "tpfp/errors.hpp"

namespace tpfp {

namespace mp = boost::multiprecision;

namespace {

bool round_increment(RoundingMode rm, bool negative, bool lsb_odd, bool round_bit, bool rest) {
  switch (rm) {
    case RoundingMode::rne: return round_bit && (rest || lsb_odd);
    case RoundingMode::rmm: return round_bit;
    case RoundingMode::rtz: return false;
    case RoundingMode::rup: return !negative && (round_bit || rest);
    case RoundingMode::rdn: return negative && (round_bit || rest);
  }
  return false;
}

struct RoundOutcome {
  FpResult result;
  bool tiny = false;
};

FpResult overflow_result(const FormatDesc& fmt, bool negative, RoundingMode rm) {
  bool to_inf = true;
  switch (rm) {
    case RoundingMode::rne:
    case RoundingMode::rmm: to_inf = true; break;
    case RoundingMode::rtz: to_inf = false; break;
    case RoundingMode::rup: to_inf = !negative; break;
    case RoundingMode::rdn: to_inf = negative; break;
  }
  StatusFlags f;
  f.of = true;
  f.nx = true;
  return {to_inf ? infinity(fmt, negative) : max_finite(fmt, negative), f};
}

// Core rounding of (-1)^negative * (sig + sticky_epsilon) * 2^exp.
RoundOutcome round_core(const FormatDesc& fmt, bool negative, const BigInt& sig, long exp,
                        bool sticky, RoundingMode rm) {
  RoundOutcome out;
  if (sig.is_zero()) {
    if (sticky) throw UsageError("round: sticky bit without significand");
    out.result.value = zero(fmt, negative);
    return out;
  }
  const long m = fmt.man_bits();
  const long top = exp + msb_index(sig);
  const long quantum = std::max(top, fmt.emin()) - m;
  const long shift = quantum - exp;

  BigInt kept;
  bool round_bit = false;
  bool rest = sticky;
  if (shift <= 0) {
    if (sticky) throw UsageError("round: sticky bit above the rounding position");
    kept = sig << -shift;
  } else {
    kept = sig >> shift;
    round_bit = mp::bit_test(sig, static_cast<unsigned>(shift - 1));
    if (!rest && shift > 1) {
      const long low = static_cast<long>(mp::lsb(sig));
      rest = low < shift - 1;
    }
  }
  const bool inexact = round_bit || rest;
  long q = quantum;
  if (round_increment(rm, negative, mp::bit_test(kept, 0), round_bit, rest)) {
    ++kept;
    if (msb_index(kept) > m) {
      kept >>= 1;
      ++q;
    }
  }

  // Tininess after rounding: only a value in the binade just below 2^emin
  // can round up to the smallest normal with an unbounded exponent.
  if (top < fmt.emin()) {
    out.tiny = true;
    if (top == fmt.emin() - 1) {
      const long ushift = (top - m) - exp;
      if (ushift > 0) {
        const BigInt ukept = sig >> ushift;
        const bool urb = mp::bit_test(sig, static_cast<unsigned>(ushift - 1));
        bool urest = sticky;
        if (!urest && ushift > 1) urest = static_cast<long>(mp::lsb(sig)) < ushift - 1;
        if (round_increment(rm, negative, mp::bit_test(ukept, 0), urb, urest) &&
            msb_index(ukept + 1) > m) {
          out.tiny = false;
        }
      }
    }
  }

  if (kept.is_zero()) {
    out.result.value = zero(fmt, negative);
  } else {
    const long top_bit = msb_index(kept);
    const long final_exp = q + top_bit;
    if (final_exp > fmt.emax()) {
      out.result = overflow_result(fmt, negative, rm);
      return out;
    }
    BigInt bits;
    if (top_bit == m) {
      bits = (BigInt(final_exp + fmt.bias()) << m) | (kept & low_mask(static_cast<unsigned>(m)));
    } else {
      bits = kept;  // subnormal: exponent field zero
    }
    if (negative) mp::bit_set(bits, fmt.width() - 1);
    out.result.value = BitsValue(std::move(bits), fmt.width());
  }
  out.result.flags.nx = inexact;
  out.result.flags.uf = inexact && out.tiny;
  return out;
}

RoundOutcome round_exact(const FormatDesc& fmt, const ExactReal& x, bool sticky, RoundingMode rm) {
  if (!x.is_finite()) throw UsageError("round: value is not finite");
  return round_core(fmt, x.negative(), x.significand(), x.exponent(), sticky, rm);
}

FpResult invalid(const FormatDesc& fmt) {
  StatusFlags f;
  f.nv = true;
  return {canonical_nan(fmt), f};
}

FpResult nan_result(const FormatDesc& fmt, bool signaling) {
  StatusFlags f;
  f.nv = signaling;
  return {canonical_nan(fmt), f};
}

ExactReal exact_of(const FormatDesc& fmt, const DecodedFp& d) {
  return ExactReal::from_decoded(fmt, d);
}

void require_width(const FormatDesc& fmt, const BitsValue& v, const char* what) {
  if (v.width() != fmt.width()) {
    throw UsageError(std::string(what) + ": operand width " + std::to_string(v.width()) +
                     " does not match " + fmt.name());
  }
}

// a*b + c with optional sign flips, decoded operands in possibly different
// formats, one rounding into dst.
FpResult fma_core(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                  const BitsValue& a, const BitsValue& b, const BitsValue& c, bool negate_product,
                  bool negate_addend) {
  require_width(src, a, "fma");
  require_width(src, b, "fma");
  require_width(dst, c, "fma");
  const DecodedFp da = decode(src, a);
  const DecodedFp db = decode(src, b);
  const DecodedFp dc = decode(dst, c);
  const bool any_snan = da.cls == FpClass::signaling_nan || db.cls == FpClass::signaling_nan ||
                        dc.cls == FpClass::signaling_nan;
  const bool inf_times_zero =
      (is_inf(da.cls) && is_zero(db.cls)) || (is_zero(da.cls) && is_inf(db.cls));
  if (is_nan(da.cls) || is_nan(db.cls) || is_nan(dc.cls)) {
    return nan_result(dst, any_snan || inf_times_zero);
  }
  if (inf_times_zero) return invalid(dst);

  const bool product_negative = (da.negative != db.negative) != negate_product;
  const bool addend_negative = dc.negative != negate_addend;
  const bool product_inf = is_inf(da.cls) || is_inf(db.cls);
  if (product_inf || is_inf(dc.cls)) {
    if (product_inf && is_inf(dc.cls) && product_negative != addend_negative) return invalid(dst);
    return {infinity(dst, product_inf ? product_negative : addend_negative), {}};
  }
  ExactReal prod = exact_mul(exact_of(src, da), exact_of(src, db));
  if (negate_product) prod = -prod;
  ExactReal addend = exact_of(dst, dc);
  if (negate_addend) addend = -addend;
  const ExactReal sum = exact_add(prod, addend, rm == RoundingMode::rdn);
  return round_exact(dst, sum, false, rm).result;
}

FpResult add_core(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
                  bool negate_b) {
  require_width(fmt, a, "add");
  require_width(fmt, b, "add");
  const DecodedFp da = decode(fmt, a);
  const DecodedFp db = decode(fmt, b);
  if (is_nan(da.cls) || is_nan(db.cls)) {
    return nan_result(fmt,
                      da.cls == FpClass::signaling_nan || db.cls == FpClass::signaling_nan);
  }
  const bool b_negative = db.negative != negate_b;
  if (is_inf(da.cls) || is_inf(db.cls)) {
    if (is_inf(da.cls) && is_inf(db.cls) && da.negative != b_negative) return invalid(fmt);
    return {infinity(fmt, is_inf(da.cls) ? da.negative : b_negative), {}};
  }
  ExactReal eb = exact_of(fmt, db);
  if (negate_b) eb = -eb;
  const ExactReal sum = exact_add(exact_of(fmt, da), eb, rm == RoundingMode::rdn);
  return round_exact(fmt, sum, false, rm).result;
}

FpResult mul_core(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                  const BitsValue& a, const BitsValue& b) {
  require_width(src, a, "mul");
  require_width(src, b, "mul");
  const DecodedFp da = decode(src, a);
  const DecodedFp db = decode(src, b);
  if (is_nan(da.cls) || is_nan(db.cls)) {
    return nan_result(dst,
                      da.cls == FpClass::signaling_nan || db.cls == FpClass::signaling_nan);
  }
  const bool negative = da.negative != db.negative;
  if (is_inf(da.cls) || is_inf(db.cls)) {
    if (is_zero(da.cls) || is_zero(db.cls)) return invalid(dst);
    return {infinity(dst, negative), {}};
  }
  return round_exact(dst, exact_mul(exact_of(src, da), exact_of(src, db)), false, rm).result;
}

// Sign-magnitude ordering key of a non-NaN pattern; zeros collapse to 0.
BigInt order_key(const FormatDesc& fmt, const BitsValue& v) {
  BigInt mag = v.bits() & low_mask(fmt.width() - 1);
  return sign_bit(fmt, v) ? BigInt(-mag) : mag;
}

}  // namespace

FpResult round(const FormatDesc& fmt, const ExactReal& x, RoundingMode rm) {
  return round_exact(fmt, x, false, rm).result;
}

FpResult round_sticky(const FormatDesc& fmt, const ExactReal& x, bool sticky, RoundingMode rm) {
  return round_exact(fmt, x, sticky, rm).result;
}

FpResult add(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b) {
  return add_core(fmt, rm, a, b, false);
}

FpResult sub(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b) {
  return add_core(fmt, rm, a, b, true);
}

FpResult mul(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b) {
  return mul_core(fmt, fmt, rm, a, b);
}

FpResult fma(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
             const BitsValue& c) {
  return fma_core(fmt, fmt, rm, a, b, c, false, false);
}

FpResult fmsub(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
               const BitsValue& c) {
  return fma_core(fmt, fmt, rm, a, b, c, false, true);
}

FpResult fnmadd(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
                const BitsValue& c) {
  return fma_core(fmt, fmt, rm, a, b, c, true, true);
}

FpResult fnmsub(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
                const BitsValue& c) {
  return fma_core(fmt, fmt, rm, a, b, c, true, false);
}

FpResult fma_multi(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                   const BitsValue& a, const BitsValue& b, const BitsValue& c) {
  if (dst.width() < src.width()) {
    throw UnsupportedOperation("expanding FMA from " + src.name() + " to narrower " + dst.name());
  }
  return fma_core(src, dst, rm, a, b, c, false, false);
}

FpResult mul_multi(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                   const BitsValue& a, const BitsValue& b) {
  if (dst.width() < src.width()) {
    throw UnsupportedOperation("expanding multiply from " + src.name() + " to narrower " +
                               dst.name());
  }
  return mul_core(src, dst, rm, a, b);
}

int divider_iterations(const FormatDesc& fmt) { return (fmt.precision() + 2) / 3; }

FpResult div(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a, const BitsValue& b,
             std::optional<int> iterations) {
  require_width(fmt, a, "div");
  require_width(fmt, b, "div");
  if (iterations) {
    if (*iterations <= 0) throw UsageError("div: iteration override must be positive");
    if (*iterations > divider_iterations(fmt)) {
      throw UsageError("div: iteration override exceeds the " +
                       std::to_string(divider_iterations(fmt)) + " iterations of " + fmt.name());
    }
  }
  const DecodedFp da = decode(fmt, a);
  const DecodedFp db = decode(fmt, b);
  if (is_nan(da.cls) || is_nan(db.cls)) {
    return nan_result(fmt,
                      da.cls == FpClass::signaling_nan || db.cls == FpClass::signaling_nan);
  }
  const bool negative = da.negative != db.negative;
  if ((is_inf(da.cls) && is_inf(db.cls)) || (is_zero(da.cls) && is_zero(db.cls))) {
    return invalid(fmt);
  }
  if (is_inf(da.cls)) return {infinity(fmt, negative), {}};
  if (is_inf(db.cls) || is_zero(da.cls)) return {zero(fmt, negative), {}};
  if (is_zero(db.cls)) {
    StatusFlags f;
    f.dz = true;
    return {infinity(fmt, negative), f};
  }

  const ExactReal ea = exact_of(fmt, da);
  const ExactReal eb = exact_of(fmt, db);
  // Enough quotient bits for the significand, a round bit and a sticky.
  const long want = fmt.precision() + 3;
  const long shift =
      std::max(0L, want + msb_index(eb.significand()) - msb_index(ea.significand()));
  BigInt quotient;
  BigInt remainder;
  mp::divide_qr(BigInt(ea.significand() << shift), eb.significand(), quotient, remainder);
  const long exp = ea.exponent() - eb.exponent() - shift;

  if (!iterations) {
    return round_exact(fmt, ExactReal::finite(negative, std::move(quotient), exp),
                       !remainder.is_zero(), rm)
        .result;
  }
  const long keep_bits = 3L * *iterations;
  const long drop = msb_index(quotient) + 1 - keep_bits;
  BigInt truncated = quotient;
  bool dropped = !remainder.is_zero();
  if (drop > 0) {
    truncated = (quotient >> drop) << drop;
    dropped = dropped || truncated != quotient;
  }
  RoundOutcome out =
      round_exact(fmt, ExactReal::finite(negative, std::move(truncated), exp), false, rm);
  if (dropped) {
    out.result.flags.nx = true;
    out.result.flags.uf = out.result.flags.uf || out.tiny;
  }
  return out.result;
}

FpResult sqrt(const FormatDesc& fmt, RoundingMode rm, const BitsValue& a) {
  require_width(fmt, a, "sqrt");
  const DecodedFp da = decode(fmt, a);
  if (is_nan(da.cls)) return nan_result(fmt, da.cls == FpClass::signaling_nan);
  if (is_zero(da.cls)) return {a, {}};
  if (da.negative) return invalid(fmt);
  if (is_inf(da.cls)) return {a, {}};

  const ExactReal ea = exact_of(fmt, da);
  BigInt sig = ea.significand();
  long exp = ea.exponent();
  if (exp & 1) {
    sig <<= 1;
    --exp;
  }
  // root needs precision + 3 bits: radicand needs twice that
  const long want = 2 * (fmt.precision() + 3);
  long extra = want - (msb_index(sig) + 1);
  if (extra < 0) extra = 0;
  if (extra & 1) ++extra;
  sig <<= extra;
  exp -= extra;
  BigInt rem;
  BigInt root = mp::sqrt(sig, rem);
  return round_exact(fmt, ExactReal::finite(false, std::move(root), exp / 2), !rem.is_zero(), rm)
      .result;
}

FpResult compare(const FormatDesc& fmt, CmpOp op, const BitsValue& a, const BitsValue& b) {
  require_width(fmt, a, "compare");
  require_width(fmt, b, "compare");
  const FpClass ca = decode(fmt, a).cls;
  const FpClass cb = decode(fmt, b).cls;
  FpResult r{BitsValue::from_u64(0, 1), {}};
  if (is_nan(ca) || is_nan(cb)) {
    const bool snan = ca == FpClass::signaling_nan || cb == FpClass::signaling_nan;
    r.flags.nv = op == CmpOp::eq ? snan : true;
    return r;
  }
  const BigInt ka = order_key(fmt, a);
  const BigInt kb = order_key(fmt, b);
  bool truth = false;
  switch (op) {
    case CmpOp::eq: truth = ka == kb; break;
    case CmpOp::lt: truth = ka < kb; break;
    case CmpOp::le: truth = ka <= kb; break;
  }
  r.value = BitsValue::from_u64(truth ? 1 : 0, 1);
  return r;
}

FpResult minmax(const FormatDesc& fmt, MinMaxOp op, const BitsValue& a, const BitsValue& b) {
  require_width(fmt, a, "minmax");
  require_width(fmt, b, "minmax");
  const FpClass ca = decode(fmt, a).cls;
  const FpClass cb = decode(fmt, b).cls;
  StatusFlags f;
  f.nv = ca == FpClass::signaling_nan || cb == FpClass::signaling_nan;
  if (is_nan(ca) && is_nan(cb)) return {canonical_nan(fmt), f};
  if (is_nan(ca)) return {b, f};
  if (is_nan(cb)) return {a, f};
  if (is_zero(ca) && is_zero(cb)) {
    const bool pick_a = (op == MinMaxOp::min) == sign_bit(fmt, a);
    return {pick_a ? a : b, f};
  }
  const BigInt ka = order_key(fmt, a);
  const BigInt kb = order_key(fmt, b);
  const bool a_smaller = ka < kb;
  return {(op == MinMaxOp::min) == a_smaller ? a : b, f};
}

BitsValue sign_inject(const FormatDesc& fmt, SignOp op, const BitsValue& a, const BitsValue& b) {
  require_width(fmt, a, "sgnj");
  require_width(fmt, b, "sgnj");
  const unsigned top = fmt.width() - 1;
  bool sign = sign_bit(fmt, b);
  if (op == SignOp::sgnjn) sign = !sign;
  if (op == SignOp::sgnjx) sign = sign != sign_bit(fmt, a);
  BigInt bits = a.bits();
  if (sign) {
    mp::bit_set(bits, top);
  } else {
    mp::bit_unset(bits, top);
  }
  return BitsValue(std::move(bits), fmt.width());
}

FpResult cvt_fp_fp(const FormatDesc& src, const FormatDesc& dst, RoundingMode rm,
                   const BitsValue& a) {
  require_width(src, a, "cvt");
  const DecodedFp da = decode(src, a);
  if (is_nan(da.cls)) return nan_result(dst, da.cls == FpClass::signaling_nan);
  if (is_inf(da.cls)) return {infinity(dst, da.negative), {}};
  return round_exact(dst, exact_of(src, da), false, rm).result;
}

FpResult cvt_fp_int(const FormatDesc& fmt, unsigned int_width, bool is_signed, RoundingMode rm,
                    const BitsValue& a) {
  require_width(fmt, a, "cvt_fp_int");
  if (int_width < 2 || int_width > 64) throw UsageError("cvt_fp_int: unsupported integer width");
  const BigInt max_v = is_signed ? (BigInt(1) << (int_width - 1)) - 1 : low_mask(int_width);
  const BigInt min_v = is_signed ? BigInt(-(BigInt(1) << (int_width - 1))) : BigInt(0);
  auto to_bits = [&](const BigInt& v) {
    return BitsValue(v < 0 ? BigInt((BigInt(1) << int_width) + v) : v, int_width);
  };
  StatusFlags invalid_flags;
  invalid_flags.nv = true;

  const DecodedFp da = decode(fmt, a);
  if (is_nan(da.cls)) return {to_bits(max_v), invalid_flags};
  if (is_inf(da.cls)) return {to_bits(da.negative ? min_v : max_v), invalid_flags};

  const ExactReal x = exact_of(fmt, da);
  if (x.is_zero()) return {to_bits(0), {}};
  const long top = x.exponent() + msb_index(x.significand());
  if (top > static_cast<long>(int_width) + 1) {
    return {to_bits(x.negative() ? min_v : max_v), invalid_flags};
  }
  BigInt mag;
  bool inexact = false;
  if (x.exponent() >= 0) {
    mag = x.significand() << x.exponent();
  } else {
    const long shift = -x.exponent();
    const BigInt& sig = x.significand();
    mag = sig >> shift;
    const bool round_bit = mp::bit_test(sig, static_cast<unsigned>(shift - 1));
    const bool rest = shift > 1 && static_cast<long>(mp::lsb(sig)) < shift - 1;
    inexact = round_bit || rest;
    if (round_increment(rm, x.negative(), mp::bit_test(mag, 0), round_bit, rest)) ++mag;
  }
  const BigInt value = x.negative() ? BigInt(-mag) : mag;
  if (value > max_v) return {to_bits(max_v), invalid_flags};
  if (value < min_v) return {to_bits(min_v), invalid_flags};
  StatusFlags f;
  f.nx = inexact;
  return {to_bits(value), f};
}

FpResult cvt_int_fp(unsigned int_width, bool is_signed, const FormatDesc& fmt, RoundingMode rm,
                    const BitsValue& a) {
  if (a.width() != int_width) throw UsageError("cvt_int_fp: operand width mismatch");
  BigInt v = a.bits();
  if (is_signed && a.bit(int_width - 1)) v -= BigInt(1) << int_width;
  return round_exact(fmt, ExactReal::from_integer(v), false, rm).result;
}

int arity(ArithOp op) {
  switch (op) {
    case ArithOp::sqrt: return 1;
    case ArithOp::fmadd:
    case ArithOp::fmsub:
    case ArithOp::fnmadd:
    case ArithOp::fnmsub: return 3;
    default: return 2;
  }
}

std::string_view to_string(ArithOp op) {
  static constexpr std::array<std::string_view, 17> kNames = {
      "add", "sub", "mul", "div", "sqrt", "min", "max", "sgnj", "sgnjn",
      "sgnjx", "eq", "lt", "le", "madd", "msub", "nmadd", "nmsub"};
  return kNames[static_cast<std::size_t>(op)];
}

bool is_comparison(ArithOp op) {
  return op == ArithOp::feq || op == ArithOp::flt || op == ArithOp::fle;
}

FpResult evaluate(ArithOp op, const FormatDesc& fmt, RoundingMode rm,
                  std::span<const BitsValue> x) {
  if (static_cast<int>(x.size()) != arity(op)) {
    throw UsageError("evaluate: " + std::string(to_string(op)) + " takes " +
                     std::to_string(arity(op)) + " operands");
  }
  auto widen = [&](FpResult r) {
    r.value = BitsValue(r.value.bits(), fmt.width());
    return r;
  };
  switch (op) {
    case ArithOp::add: return add(fmt, rm, x[0], x[1]);
    case ArithOp::sub: return sub(fmt, rm, x[0], x[1]);
    case ArithOp::mul: return mul(fmt, rm, x[0], x[1]);
    case ArithOp::div: return div(fmt, rm, x[0], x[1]);
    case ArithOp::sqrt: return sqrt(fmt, rm, x[0]);
    case ArithOp::min: return minmax(fmt, MinMaxOp::min, x[0], x[1]);
    case ArithOp::max: return minmax(fmt, MinMaxOp::max, x[0], x[1]);
    case ArithOp::sgnj: return {sign_inject(fmt, SignOp::sgnj, x[0], x[1]), {}};
    case ArithOp::sgnjn: return {sign_inject(fmt, SignOp::sgnjn, x[0], x[1]), {}};
    case ArithOp::sgnjx: return {sign_inject(fmt, SignOp::sgnjx, x[0], x[1]), {}};
    case ArithOp::feq: return widen(compare(fmt, CmpOp::eq, x[0], x[1]));
    case ArithOp::flt: return widen(compare(fmt, CmpOp::lt, x[0], x[1]));
    case ArithOp::fle: return widen(compare(fmt, CmpOp::le, x[0], x[1]));
    case ArithOp::fmadd: return fma(fmt, rm, x[0], x[1], x[2]);
    case ArithOp::fmsub: return fmsub(fmt, rm, x[0], x[1], x[2]);
    case ArithOp::fnmadd: return fnmadd(fmt, rm, x[0], x[1], x[2]);
    case ArithOp::fnmsub: return fnmsub(fmt, rm, x[0], x[1], x[2]);
  }
  throw UsageError("evaluate: unknown operation");
}

}  // namespace tpfp
