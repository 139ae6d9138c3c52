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

#include "properties.hpp"

#include <array>
#include <functional>
#include <random>
#include <sstream>

#include "tpfp/arith.hpp"
#include "tpfp/simd.hpp"

namespace properties {

using namespace tpfp;

namespace {

class Checker {
 public:
  Checker(const char* name, std::uint64_t seed) : rng(seed) { out.name = name; }

  void check(bool ok, const std::function<std::string()>& what) {
    ++out.cases;
    if (ok) return;
    if (out.failures++ == 0) out.first_failure = what();
  }

  std::mt19937_64 rng;
  Outcome out;
};

std::string hex(const BitsValue& v) { return v.hex(); }

const FormatDesc& any_format(std::mt19937_64& rng) {
  const auto fs = builtin_formats();
  return fs[rng() % fs.size()];
}

/// Formats that form a vector in a 64-bit register.
const FormatDesc& vector_format(std::mt19937_64& rng) {
  static const std::array<const FormatDesc*, 4> fs = {&fp32(), &fp16(), &fp16alt(), &fp8()};
  return *fs[rng() % fs.size()];
}

RoundingMode any_rm(std::mt19937_64& rng) { return kAllRoundingModes[rng() % std::size(kAllRoundingModes)]; }

BigInt random_bigint(std::mt19937_64& rng, unsigned bits) {
  BigInt v = 0;
  for (unsigned got = 0; got < bits; got += 64) v = (v << 64) | BigInt(rng());
  return v & ((BigInt(1) << bits) - 1);
}

/// Random finite value spanning the subnormal range up to just past overflow.
ExactReal random_real(const FormatDesc& f, std::mt19937_64& rng) {
  const unsigned len = 1 + static_cast<unsigned>(rng() % (f.man_bits() + 16));
  BigInt sig = random_bigint(rng, len) | (BigInt(1) << (len - 1));
  const long lo = f.emin() - static_cast<long>(f.man_bits()) - 3 - static_cast<long>(len);
  const long hi = f.emax() + 2 - static_cast<long>(len);
  const long exp = lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  return ExactReal::finite(rng() & 1, sig, exp);
}

/// Total order over finite values and infinities: -1, 0, +1.
int order(const ExactReal& a, const ExactReal& b) {
  auto rank = [](const ExactReal& x) { return x.is_finite() ? 0 : (x.negative() ? -1 : 1); };
  const int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra != 0) return 0;
  return compare(a, b);
}

ExactReal value_of(const FormatDesc& f, const BitsValue& v) { return ExactReal::from_bits(f, v); }

bool is_nan_bits(const FormatDesc& f, const BitsValue& v) {
  return decode(f, v).cls == FpClass::quiet_nan || decode(f, v).cls == FpClass::signaling_nan;
}

std::uint64_t random_bits(const FormatDesc& f, std::mt19937_64& rng) {
  const unsigned w = f.width();
  return w >= 64 ? rng() : rng() & ((1ULL << w) - 1);
}

/// Operand mixing raw patterns with values near one shared exponent.
std::uint64_t operand(const FormatDesc& f, std::mt19937_64& rng, std::uint64_t anchor) {
  switch (rng() % 4) {
    case 0:
      return random_bits(f, rng);
    case 1: {
      const std::uint64_t man_mask = (1ULL << f.man_bits()) - 1;
      return (anchor & ~man_mask) | (rng() & man_mask);
    }
    default: {
      const std::uint64_t flip = 1ULL << (rng() % f.width());
      return anchor ^ (rng() & 1 ? flip : 0);
    }
  }
}

constexpr std::array<ArithOp, 9> kLaneOps = {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div,
                                            ArithOp::sqrt, ArithOp::min, ArithOp::fmadd, ArithOp::fnmsub,
                                            ArithOp::fle};

}  // namespace

Outcome rounding_monotonicity(std::uint64_t cases, std::uint64_t seed) {
  Checker c("rounding monotonicity", seed);
  while (c.out.cases < cases) {
    const FormatDesc& f = any_format(c.rng);
    ExactReal x = random_real(f, c.rng);
    ExactReal y;
    if (c.rng() & 1) {
      y = random_real(f, c.rng);
    } else {
      // A nearby value: perturb below the format's precision.
      const long shift = static_cast<long>(c.rng() % (f.precision() + 8));
      const ExactReal d = ExactReal::finite(c.rng() & 1, random_bigint(c.rng, 8) + 1,
                                            x.exponent() + static_cast<long>(boost::multiprecision::msb(x.significand())) - shift - 8);
      y = exact_add(x, d, false);
    }
    if (compare(x, y) > 0) std::swap(x, y);
    for (RoundingMode rm : kAllRoundingModes) {
      const BitsValue rx = round(f, x, rm).value;
      const BitsValue ry = round(f, y, rm).value;
      c.check(order(value_of(f, rx), value_of(f, ry)) <= 0, [&] {
        return f.name() + " " + std::string(to_string(rm)) + ": round(x)=" + hex(rx) + " > round(y)=" + hex(ry) +
               " with x <= y (x=" + std::to_string(x.to_double()) + ", y=" + std::to_string(y.to_double()) + ")";
      });
    }
  }
  return c.out;
}

Outcome directed_bracketing(std::uint64_t cases, std::uint64_t seed) {
  Checker c("directed-mode bracketing", seed);
  while (c.out.cases < cases) {
    const FormatDesc& f = any_format(c.rng);
    const ExactReal x = random_real(f, c.rng);
    const FpResult dn = round(f, x, RoundingMode::rdn);
    const FpResult up = round(f, x, RoundingMode::rup);
    const FpResult tz = round(f, x, RoundingMode::rtz);
    const FpResult ne = round(f, x, RoundingMode::rne);
    const FpResult mm = round(f, x, RoundingMode::rmm);
    const ExactReal vd = value_of(f, dn.value), vu = value_of(f, up.value), vt = value_of(f, tz.value);
    bool ok = order(vd, x) <= 0 && order(x, vu) <= 0;
    if (!dn.flags.nx) {
      ok = ok && order(vd, vu) == 0 && !up.flags.nx && order(vd, x) == 0;
    } else {
      auto either = [&](const BitsValue& v) { return v == dn.value || v == up.value; };
      ok = ok && either(tz.value) && either(ne.value) && either(mm.value);
      // Truncation never increases magnitude.
      const ExactReal ax = x.negative() ? -x : x;
      const ExactReal at = vt.negative() ? -vt : vt;
      ok = ok && order(at, ax) <= 0;
    }
    c.check(ok, [&] {
      return f.name() + ": x=" + std::to_string(x.to_double()) + " rdn=" + hex(dn.value) + " rup=" + hex(up.value) +
             " rtz=" + hex(tz.value) + " rne=" + hex(ne.value) + " rmm=" + hex(mm.value);
    });
  }
  return c.out;
}

Outcome commutativity(std::uint64_t cases, std::uint64_t seed) {
  Checker c("commutativity", seed);
  while (c.out.cases < cases) {
    const FormatDesc& f = any_format(c.rng);
    const RoundingMode rm = any_rm(c.rng);
    const std::uint64_t anchor = random_bits(f, c.rng);
    const BitsValue a = BitsValue::from_u64(operand(f, c.rng, anchor), f.width());
    const BitsValue b = BitsValue::from_u64(operand(f, c.rng, anchor), f.width());
    const BitsValue z = BitsValue::from_u64(operand(f, c.rng, anchor), f.width());
    auto same = [](const FpResult& p, const FpResult& q) { return p.value == q.value && p.flags == q.flags; };
    auto tag = [&](const char* op) {
      return [&, op] { return f.name() + " " + op + " " + std::string(to_string(rm)) + " " + hex(a) + " " + hex(b) + " " + hex(z); };
    };
    c.check(same(add(f, rm, a, b), add(f, rm, b, a)), tag("add"));
    c.check(same(mul(f, rm, a, b), mul(f, rm, b, a)), tag("mul"));
    c.check(same(fma(f, rm, a, b, z), fma(f, rm, b, a, z)), tag("fma"));
    c.check(same(minmax(f, MinMaxOp::min, a, b), minmax(f, MinMaxOp::min, b, a)), tag("min"));
    c.check(same(minmax(f, MinMaxOp::max, a, b), minmax(f, MinMaxOp::max, b, a)), tag("max"));
    c.check(same(compare(f, CmpOp::eq, a, b), compare(f, CmpOp::eq, b, a)), tag("feq"));
  }
  return c.out;
}

Outcome nan_canonicalization(std::uint64_t cases, std::uint64_t seed) {
  Checker c("NaN canonicalization", seed);
  constexpr std::array<ArithOp, 12> ops = {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div,
                                           ArithOp::sqrt, ArithOp::min, ArithOp::max, ArithOp::fmadd,
                                           ArithOp::fmsub, ArithOp::fnmadd, ArithOp::fnmsub, ArithOp::mul};
  while (c.out.cases < cases) {
    const FormatDesc& f = any_format(c.rng);
    const RoundingMode rm = any_rm(c.rng);
    std::array<BitsValue, 3> x;
    for (auto& v : x) {
      std::uint64_t bits = random_bits(f, c.rng);
      const unsigned kind = c.rng() % 4;
      if (kind == 0) bits |= ((1ULL << f.exp_bits()) - 1) << f.man_bits();          // NaN or inf
      if (kind == 1) bits &= ~(((1ULL << f.exp_bits()) - 1) << f.man_bits());       // zero or subnormal
      v = BitsValue::from_u64(bits, f.width());
    }
    const unsigned pick = c.rng() % (ops.size() + 2);
    FpResult r;
    const FormatDesc* rf = &f;
    std::string what;
    if (pick < ops.size()) {
      r = evaluate(ops[pick], f, rm, std::span<const BitsValue>(x.data(), arity(ops[pick])));
      what = std::string(to_string(ops[pick]));
    } else if (pick == ops.size()) {
      rf = &any_format(c.rng);
      r = cvt_fp_fp(f, *rf, rm, x[0]);
      what = "cvt";
    } else {
      const FormatDesc& wide = f.width() <= 16 ? fp32() : fp64();
      rf = &wide;
      r = fma_multi(f, wide, rm, x[0], x[1], BitsValue::from_u64(random_bits(wide, c.rng), wide.width()));
      what = "fma_multi";
    }
    if (!is_nan_bits(*rf, r.value)) continue;
    c.check(r.value == canonical_nan(*rf), [&] {
      return f.name() + " " + what + " " + hex(x[0]) + " " + hex(x[1]) + " " + hex(x[2]) + " -> " + hex(r.value);
    });
  }
  return c.out;
}

Outcome boxing_round_trip(std::uint64_t cases, std::uint64_t seed) {
  Checker c("boxing round-trip", seed);
  constexpr std::array<unsigned, 4> flens = {8, 16, 32, 64};
  while (c.out.cases < cases) {
    const FormatDesc& f = any_format(c.rng);
    unsigned flen = flens[c.rng() % flens.size()];
    if (flen < f.width()) flen = 64;
    const BitsValue v = BitsValue::from_u64(random_bits(f, c.rng), f.width());
    const FpRegister r = write_scalar(flen, f, v);
    bool ok = is_boxed(f, r) && read_scalar(f, r, true) == v && read_scalar(f, r, false) == v;
    if (flen > f.width()) {
      const unsigned bit = f.width() + static_cast<unsigned>(c.rng() % (flen - f.width()));
      const FpRegister broken(r.bits() ^ (1ULL << bit), flen);
      ok = ok && !is_boxed(f, broken) && read_scalar(f, broken, true) == canonical_nan(f) &&
           read_scalar(f, broken, false) == v;
    }
    c.check(ok, [&] { return f.name() + " flen=" + std::to_string(flen) + " " + hex(v); });
  }
  return c.out;
}

Outcome lane_isolation(std::uint64_t cases, std::uint64_t seed) {
  Checker c("lane isolation", seed);
  while (c.out.cases < cases) {
    const FormatDesc& f = vector_format(c.rng);
    const unsigned n = vector_length(f, 64);
    const ArithOp op = kLaneOps[c.rng() % kLaneOps.size()];
    const RoundingMode rm = any_rm(c.rng);
    std::array<FpRegister, 3> regs = {FpRegister(c.rng(), 64), FpRegister(c.rng(), 64), FpRegister(c.rng(), 64)};
    const std::span<const FpRegister> ops(regs.data(), arity(op));
    const VecResult before = vec_map(op, f, rm, ops);
    const unsigned lane = c.rng() % n;
    const unsigned which = c.rng() % arity(op);
    regs[which].set_element(f, lane, BitsValue::from_u64(random_bits(f, c.rng), f.width()));
    const VecResult after = vec_map(op, f, rm, ops);
    bool ok = true;
    for (unsigned i = 0; i < n; ++i) {
      if (i != lane) ok = ok && before.value.element(f, i) == after.value.element(f, i);
    }
    c.check(ok, [&] { return f.name() + " " + std::string(to_string(op)) + " lane " + std::to_string(lane); });
  }
  return c.out;
}

Outcome vector_scalar_equivalence(std::uint64_t cases, std::uint64_t seed) {
  Checker c("vector/scalar lane equivalence", seed);
  while (c.out.cases < cases) {
    const FormatDesc& f = vector_format(c.rng);
    const unsigned n = vector_length(f, 64);
    const ArithOp op = kLaneOps[c.rng() % kLaneOps.size()];
    const RoundingMode rm = any_rm(c.rng);
    const int k = arity(op);
    std::array<FpRegister, 3> regs = {FpRegister(c.rng(), 64), FpRegister(c.rng(), 64), FpRegister(c.rng(), 64)};
    const bool replicate = k >= 2 && (c.rng() & 1);
    const VecResult v = replicate ? vec_scalar(op, f, rm, regs[0], regs[1], k == 3 ? std::optional(regs[2]) : std::nullopt)
                                  : vec_map(op, f, rm, std::span<const FpRegister>(regs.data(), k));
    StatusFlags flags;
    bool ok = true;
    for (unsigned i = 0; i < n; ++i) {
      std::array<BitsValue, 3> x;
      for (int j = 0; j < k; ++j) x[j] = regs[j].element(f, (replicate && j == 1) ? 0 : i);
      const FpResult s = evaluate(op, f, rm, std::span<const BitsValue>(x.data(), k));
      flags |= s.flags;
      ok = ok && v.value.element(f, i) == s.value;
    }
    ok = ok && flags == v.flags;
    c.check(ok, [&] {
      return f.name() + " " + std::string(to_string(op)) + (replicate ? ".r" : "") + " " +
             std::to_string(regs[0].bits()) + " " + std::to_string(regs[1].bits());
    });
  }
  return c.out;
}

const std::vector<Entry>& all() {
  static const std::vector<Entry> entries = {
      {"rounding_monotonicity", &rounding_monotonicity},
      {"directed_bracketing", &directed_bracketing},
      {"commutativity", &commutativity},
      {"nan_canonicalization", &nan_canonicalization},
      {"boxing_round_trip", &boxing_round_trip},
      {"lane_isolation", &lane_isolation},
      {"vector_scalar_equivalence", &vector_scalar_equivalence},
  };
  return entries;
}

}  // namespace properties
