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

#include <gtest/gtest.h>

#include <sstream>

#include "gen.hpp"
#include "oracle.hpp"
#include "tpfp/arith.hpp"
#include "tpfp/errors.hpp"

namespace tpfp {
namespace {

BitsValue b8(std::uint64_t v) { return BitsValue::from_u64(v, 8); }
BitsValue b16(std::uint64_t v) { return BitsValue::from_u64(v, 16); }
BitsValue b32(std::uint64_t v) { return BitsValue::from_u64(v, 32); }

StatusFlags flags_of(const char* s) {
  StatusFlags f;
  f.nv = s[0] != '-';
  f.dz = s[1] != '-';
  f.of = s[2] != '-';
  f.uf = s[3] != '-';
  f.nx = s[4] != '-';
  return f;
}

oracle::Rm to_oracle(RoundingMode rm) { return static_cast<oracle::Rm>(static_cast<int>(rm)); }

TEST(Round, RepresentableValueIsExact) {
  const auto r = round(fp8(), ExactReal::from_integer(1), RoundingMode::rne);
  EXPECT_EQ(r.value, b8(0x3C));
  EXPECT_FALSE(r.flags.any());
}

TEST(Round, Fp16MidpointAboveMaxOverflows) {
  const auto r = round(fp16(), ExactReal::from_integer(65520), RoundingMode::rne);
  EXPECT_EQ(r.value, b16(0x7C00));
  EXPECT_EQ(r.flags, flags_of("--O-X"));
}

TEST(Round, Fp8TinyRoundsUpToSmallestSubnormal) {
  const auto r = round(fp8(), ExactReal::finite(false, 1, -17), RoundingMode::rup);
  EXPECT_EQ(r.value, b8(0x01));
  EXPECT_EQ(r.flags, flags_of("---UX"));
}

TEST(Fma, SimpleSum) {
  const auto r = fma(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x3C00), b16(0x3C00));
  EXPECT_EQ(r.value, b16(0x4000));
  EXPECT_FALSE(r.flags.any());
}

TEST(Fma, InfTimesZeroIsInvalid) {
  const auto r = fma(fp32(), RoundingMode::rne, b32(0x7F800000), b32(0), b32(0x3F800000));
  EXPECT_EQ(r.value, b32(0x7FC00000));
  EXPECT_EQ(r.flags, flags_of("V----"));
}

TEST(Fma, InfTimesZeroPlusQuietNanStillInvalid) {
  const auto r = fma(fp32(), RoundingMode::rne, b32(0x7F800000), b32(0), b32(0x7FC00000));
  EXPECT_EQ(r.value, b32(0x7FC00000));
  EXPECT_TRUE(r.flags.nv);
}

// Witness found by the oracle sweep: 0.15625^2 + 1.25*2^-10. The exact sum
// 0.025634765625 lies above the 0x26/0x27 midpoint; the rounded product
// 0.0234375 pulls the two-step result down to 0x26.
TEST(Fma, SingleRoundingWitness) {
  const auto fused = fma(fp8(), RoundingMode::rne, b8(0x31), b8(0x31), b8(0x15));
  const auto split = add(fp8(), RoundingMode::rne,
                         mul(fp8(), RoundingMode::rne, b8(0x31), b8(0x31)).value, b8(0x15));
  EXPECT_EQ(fused.value, b8(0x27));
  EXPECT_EQ(fused.flags, flags_of("----X"));
  EXPECT_EQ(split.value, b8(0x26));
}

TEST(FmaMulti, ExpandingProductOfOnes) {
  const auto r = fma_multi(fp16(), fp32(), RoundingMode::rne, b16(0x3C00), b16(0x3C00), b32(0));
  EXPECT_EQ(r.value, b32(0x3F800000));
  EXPECT_FALSE(r.flags.any());
}

TEST(FmaMulti, ShrinkingIsUnsupported) {
  EXPECT_THROW(fma_multi(fp32(), fp16(), RoundingMode::rne, b32(0), b32(0), b16(0)),
               UnsupportedOperation);
}

TEST(Add, Basics) {
  EXPECT_EQ(add(fp8(), RoundingMode::rne, b8(0x3C), b8(0x3C)).value, b8(0x40));
  const auto r = add(fp16(), RoundingMode::rne, b16(0x7C00), b16(0xFC00));
  EXPECT_EQ(r.value, b16(0x7E00));
  EXPECT_EQ(r.flags, flags_of("V----"));
}

TEST(Add, ExactCancellationSign) {
  EXPECT_EQ(add(fp16(), RoundingMode::rne, b16(0x3C00), b16(0xBC00)).value, b16(0x0000));
  EXPECT_EQ(add(fp16(), RoundingMode::rdn, b16(0x3C00), b16(0xBC00)).value, b16(0x8000));
  EXPECT_EQ(add(fp16(), RoundingMode::rne, b16(0x8000), b16(0x8000)).value, b16(0x8000));
}

TEST(Div, Basics) {
  EXPECT_EQ(div(fp32(), RoundingMode::rne, b32(0x3F800000), b32(0x40000000)).value,
            b32(0x3F000000));
  const auto r = div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0));
  EXPECT_EQ(r.value, b16(0x7C00));
  EXPECT_EQ(r.flags, flags_of("-Z---"));
  EXPECT_EQ(div(fp16(), RoundingMode::rne, b16(0), b16(0)).flags, flags_of("V----"));
}

TEST(Div, IterationOverrideValidation) {
  EXPECT_THROW(div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x4200), 0), UsageError);
  EXPECT_THROW(div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x4200), 5), UsageError);
  EXPECT_NO_THROW(div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x4200), 4));
}

TEST(Div, ReducedIterationsTruncateQuotient) {
  // 1/3 in FP16: one iteration keeps 3 quotient bits (0b101 * 2^-4 = 0.3125)
  const auto r = div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x4200), 1);
  EXPECT_EQ(r.value, b16(0x3500));
  EXPECT_TRUE(r.flags.nx);
  const auto full = div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x4200));
  EXPECT_EQ(full.value, b16(0x3555));
  // exact quotients stay exact under truncation
  const auto exact = div(fp16(), RoundingMode::rne, b16(0x3C00), b16(0x4000), 1);
  EXPECT_EQ(exact.value, b16(0x3800));
  EXPECT_FALSE(exact.flags.any());
}

TEST(Sqrt, Basics) {
  EXPECT_EQ(sqrt(fp16(), RoundingMode::rne, b16(0x4400)).value, b16(0x4000));
  const auto r = sqrt(fp32(), RoundingMode::rne, b32(0xBF800000));
  EXPECT_EQ(r.value, b32(0x7FC00000));
  EXPECT_EQ(r.flags, flags_of("V----"));
  EXPECT_EQ(sqrt(fp32(), RoundingMode::rne, b32(0x80000000)).value, b32(0x80000000));
}

TEST(Compare, SignedZerosEqual) {
  const auto r = compare(fp16(), CmpOp::eq, b16(0x8000), b16(0x0000));
  EXPECT_EQ(r.value.to_u64(), 1U);
  EXPECT_FALSE(r.flags.any());
}

TEST(Compare, QuietNanOrderedComparisonSignals) {
  const auto r = compare(fp32(), CmpOp::lt, b32(0x7FC00000), b32(0x3F800000));
  EXPECT_EQ(r.value.to_u64(), 0U);
  EXPECT_EQ(r.flags, flags_of("V----"));
  EXPECT_FALSE(compare(fp32(), CmpOp::eq, b32(0x7FC00000), b32(0x3F800000)).flags.nv);
  EXPECT_TRUE(compare(fp32(), CmpOp::eq, b32(0x7F800001), b32(0x3F800000)).flags.nv);
}

TEST(MinMax, RiscVNanAndZeroRules) {
  const auto r = minmax(fp16(), MinMaxOp::min, b16(0x3C00), b16(0x7E00));
  EXPECT_EQ(r.value, b16(0x3C00));
  EXPECT_FALSE(r.flags.any());
  EXPECT_EQ(minmax(fp16(), MinMaxOp::max, b16(0x8000), b16(0x0000)).value, b16(0x0000));
  EXPECT_EQ(minmax(fp16(), MinMaxOp::min, b16(0x0000), b16(0x8000)).value, b16(0x8000));
  const auto both = minmax(fp16(), MinMaxOp::max, b16(0x7D00), b16(0x7E00));
  EXPECT_EQ(both.value, b16(0x7E00));
  EXPECT_TRUE(both.flags.nv);
}

TEST(SignInject, BitSplices) {
  EXPECT_EQ(sign_inject(fp16(), SignOp::sgnj, b16(0x3C00), b16(0xC000)), b16(0xBC00));
  EXPECT_EQ(sign_inject(fp32(), SignOp::sgnjx, b32(0xBF800000), b32(0xBF800000)),
            b32(0x3F800000));
  EXPECT_EQ(sign_inject(fp8(), SignOp::sgnjn, b8(0x7E), b8(0x00)), b8(0xFE));
}

TEST(Convert, FpToFp) {
  EXPECT_EQ(cvt_fp_fp(fp16(), fp8(), RoundingMode::rne, b16(0x3C00)).value, b8(0x3C));
  const auto r = cvt_fp_fp(fp32(), fp16(), RoundingMode::rne, b32(0x477FF000));  // 65520
  EXPECT_EQ(r.value, b16(0x7C00));
  EXPECT_EQ(r.flags, flags_of("--O-X"));
  const auto s = cvt_fp_fp(fp32(), fp16(), RoundingMode::rne, b32(0x7F800001));
  EXPECT_EQ(s.value, b16(0x7E00));
  EXPECT_TRUE(s.flags.nv);
}

TEST(Convert, FpToInt) {
  const auto r = cvt_fp_int(fp32(), 32, true, RoundingMode::rtz, b32(0xBFC00000));  // -1.5
  EXPECT_EQ(r.value, BitsValue::from_u64(0xFFFFFFFF, 32));
  EXPECT_EQ(r.flags, flags_of("----X"));
  const auto n = cvt_fp_int(fp16(), 32, true, RoundingMode::rne, b16(0x7E00));
  EXPECT_EQ(n.value, BitsValue::from_u64(0x7FFFFFFF, 32));
  EXPECT_EQ(n.flags, flags_of("V----"));
  const auto u = cvt_fp_int(fp32(), 32, false, RoundingMode::rne, b32(0xBF800000));  // -1.0
  EXPECT_EQ(u.value, BitsValue::from_u64(0, 32));
  EXPECT_EQ(u.flags, flags_of("V----"));
}

TEST(Convert, IntToFp) {
  EXPECT_EQ(cvt_int_fp(32, true, fp32(), RoundingMode::rne, b32(1)).value, b32(0x3F800000));
  EXPECT_EQ(cvt_int_fp(32, true, fp8(), RoundingMode::rne, b32(57344)).value, b8(0x7B));
  // 60000 lies below the midpoint 61440 between max normal and 2^16
  const auto r = cvt_int_fp(32, true, fp8(), RoundingMode::rne, b32(60000));
  EXPECT_EQ(r.value, b8(0x7B));
  EXPECT_EQ(r.flags, flags_of("----X"));
}

TEST(Fp8Exhaustive, BinaryOpsAllModesMatchOracle) {
  for (RoundingMode rm : kAllRoundingModes) {
    for (std::uint64_t a = 0; a < 256; ++a) {
      for (std::uint64_t b = 0; b < 256; ++b) {
        const auto ra = add(fp8(), rm, b8(a), b8(b));
        const auto oa = oracle::add(oracle::kFp8, to_oracle(rm), a, b);
        ASSERT_EQ(ra.value.to_u64(), oa.bits) << "add " << a << " " << b;
        ASSERT_EQ(ra.flags.to_bits(), oa.flags.bits()) << "add " << a << " " << b;
        const auto rm_ = mul(fp8(), rm, b8(a), b8(b));
        const auto om = oracle::mul(oracle::kFp8, to_oracle(rm), a, b);
        ASSERT_EQ(rm_.value.to_u64(), om.bits) << "mul " << a << " " << b;
        ASSERT_EQ(rm_.flags.to_bits(), om.flags.bits()) << "mul " << a << " " << b;
        const auto rd = div(fp8(), rm, b8(a), b8(b));
        const auto od = oracle::div(oracle::kFp8, to_oracle(rm), a, b);
        ASSERT_EQ(rd.value.to_u64(), od.bits) << "div " << a << " " << b;
        ASSERT_EQ(rd.flags.to_bits(), od.flags.bits()) << "div " << a << " " << b;
      }
    }
  }
}

}  // namespace
}  // namespace tpfp

namespace tpfp {
namespace {

struct NamedFmt {
  const FormatDesc& fmt;
  oracle::Fmt ofmt;
};

class Differential : public ::testing::TestWithParam<int> {
 protected:
  NamedFmt fmt() const {
    switch (GetParam()) {
      case 0: return {fp16(), oracle::kFp16};
      case 1: return {fp32(), oracle::kFp32};
      case 2: return {fp64(), oracle::kFp64};
      case 3: return {fp16alt(), oracle::kFp16alt};
      default: return {fp8(), oracle::kFp8};
    }
  }
};

#define EXPECT_SAME(impl, ref, what)                                                 \
  do {                                                                               \
    const auto& _i = (impl);                                                         \
    const auto& _r = (ref);                                                          \
    ASSERT_EQ(_i.value.to_u64(), _r.bits) << what;                                   \
    ASSERT_EQ(+_i.flags.to_bits(), +_r.flags.bits()) << what;                        \
  } while (0)

TEST_P(Differential, SampledOpsMatchOracle) {
  const auto [f, of] = fmt();
  testgen::OperandGen gen(of, 1234 + GetParam());
  const unsigned w = f.width();
  auto bv = [w](std::uint64_t v) { return BitsValue::from_u64(v, w); };
  for (int i = 0; i < 4000; ++i) {
    std::uint64_t x[3];
    gen.draw(x, 3);
    const RoundingMode rm = kAllRoundingModes[gen.rng()() % 5];
    const auto orm = to_oracle(rm);
    std::ostringstream what;
    what << std::hex << "rm=" << static_cast<int>(rm) << " a=" << x[0] << " b=" << x[1]
         << " c=" << x[2];
    EXPECT_SAME(add(f, rm, bv(x[0]), bv(x[1])), oracle::add(of, orm, x[0], x[1]), "add " << what.str());
    EXPECT_SAME(sub(f, rm, bv(x[0]), bv(x[1])), oracle::sub(of, orm, x[0], x[1]), "sub " << what.str());
    EXPECT_SAME(mul(f, rm, bv(x[0]), bv(x[1])), oracle::mul(of, orm, x[0], x[1]), "mul " << what.str());
    EXPECT_SAME(div(f, rm, bv(x[0]), bv(x[1])), oracle::div(of, orm, x[0], x[1]), "div " << what.str());
    EXPECT_SAME(sqrt(f, rm, bv(x[0])), oracle::sqrt(of, orm, x[0]), "sqrt " << what.str());
    EXPECT_SAME(fma(f, rm, bv(x[0]), bv(x[1]), bv(x[2])), oracle::fma(of, orm, x[0], x[1], x[2]),
                "fma " << what.str());
    EXPECT_SAME(fnmsub(f, rm, bv(x[0]), bv(x[1]), bv(x[2])),
                oracle::fma(of, of, orm, x[0], x[1], x[2], true, false), "fnmsub " << what.str());
    EXPECT_SAME(cvt_fp_int(f, 32, true, rm, bv(x[0])), oracle::cvt_fi(of, 32, true, orm, x[0]),
                "cvt.w " << what.str());
    EXPECT_SAME(cvt_fp_int(f, 64, false, rm, bv(x[0])), oracle::cvt_fi(of, 64, false, orm, x[0]),
                "cvt.lu " << what.str());
    EXPECT_SAME(cvt_int_fp(64, true, f, rm, BitsValue::from_u64(x[1], 64)),
                oracle::cvt_if(64, true, of, orm, x[1]), "cvt.from.l " << what.str());
    EXPECT_SAME(cvt_fp_fp(f, fp16(), rm, bv(x[0])), oracle::cvt_ff(of, oracle::kFp16, orm, x[0]),
                "cvt.h " << what.str());
    EXPECT_SAME(cvt_fp_fp(f, fp64(), rm, bv(x[0])), oracle::cvt_ff(of, oracle::kFp64, orm, x[0]),
                "cvt.d " << what.str());
    EXPECT_SAME(compare(f, CmpOp::le, bv(x[0]), bv(x[1])),
                oracle::compare(of, oracle::Cmp::le, x[0], x[1]), "le " << what.str());
    EXPECT_SAME(minmax(f, MinMaxOp::max, bv(x[0]), bv(x[1])),
                oracle::minmax(of, true, x[0], x[1]), "max " << what.str());
  }
}

INSTANTIATE_TEST_SUITE_P(Formats, Differential, ::testing::Values(0, 1, 2, 3, 4));

}  // namespace
}  // namespace tpfp
