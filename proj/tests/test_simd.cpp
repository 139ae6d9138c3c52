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

#include <array>

#include "tpfp/errors.hpp"
#include "tpfp/simd.hpp"

namespace tpfp {
namespace {

constexpr RoundingMode kRne = RoundingMode::rne;

FpRegister pack16(std::initializer_list<std::uint64_t> lanes, unsigned flen = 64) {
  FpRegister r(0, flen);
  unsigned i = 0;
  for (auto v : lanes) r.set_lane(16, i++, v);
  return r;
}

TEST(Boxing, WriteScalarOneExtends) {
  EXPECT_EQ(write_scalar(32, fp16(), BitsValue::from_u64(0x3C00, 16)).bits(), 0xFFFF3C00u);
  EXPECT_EQ(write_scalar(32, fp32(), BitsValue::from_u64(0x12345678, 32)).bits(), 0x12345678u);
  EXPECT_EQ(write_scalar(64, fp8(), BitsValue::from_u64(0x3C, 8)).bits(), 0xFFFFFFFFFFFFFF3CULL);
  EXPECT_THROW(write_scalar(32, fp64(), BitsValue::from_u64(0, 64)), UnsupportedOperation);
}

TEST(Boxing, ReadScalarHonoursCheckFlag) {
  EXPECT_EQ(read_scalar(fp16(), FpRegister(0xFFFF3C00, 32), true).to_u64(), 0x3C00u);
  EXPECT_EQ(read_scalar(fp16(), FpRegister(0x00003C00, 32), true).to_u64(), 0x7E00u);
  EXPECT_EQ(read_scalar(fp16(), FpRegister(0x00003C00, 32), false).to_u64(), 0x3C00u);
}

TEST(VecMap, LaneWiseAdd) {
  const auto a = pack16({0x3C00, 0x4000, 0x4200, 0x4400});  // 1 2 3 4
  const auto b = pack16({0x3C00, 0x3C00, 0x3C00, 0x3C00});
  const auto r = vec_map2(ArithOp::add, fp16(), kRne, a, b);
  EXPECT_EQ(r.value, pack16({0x4000, 0x4200, 0x4400, 0x4500}));
  EXPECT_FALSE(r.flags.any());
  EXPECT_EQ(vector_length(fp16(), 64), 4u);
}

TEST(VecMap, NanStaysInItsLane) {
  const auto a = pack16({0x3C00, 0x7C00, 0x3C00, 0x3C00});
  const auto b = pack16({0x3C00, 0xFC00, 0x3C00, 0x3C00});
  const auto r = vec_map2(ArithOp::add, fp16(), kRne, a, b);
  EXPECT_EQ(r.value, pack16({0x4000, 0x7E00, 0x4000, 0x4000}));
  EXPECT_TRUE(r.flags.nv);
}

TEST(VecMap, ComparisonGivesZeroOrOnePerLane) {
  const auto a = pack16({0x3C00, 0x4000}, 32);
  const auto b = pack16({0x4000, 0x4000}, 32);
  EXPECT_EQ(vec_map2(ArithOp::flt, fp16(), kRne, a, b).value.bits(), 0x00000001u);
  EXPECT_EQ(vec_map2(ArithOp::fle, fp16(), kRne, a, b).value.bits(), 0x00010001u);
}

TEST(VecMap, RejectsNonVectorFormat) {
  EXPECT_THROW(vec_map2(ArithOp::add, fp32(), kRne, FpRegister(0, 32), FpRegister(0, 32)),
               UnsupportedOperation);
  EXPECT_THROW(vec_map2(ArithOp::add, fp64(), kRne, FpRegister(0, 64), FpRegister(0, 64)),
               UnsupportedOperation);
}

TEST(VecScalar, ReplicatesElementZero) {
  const auto a = pack16({0x3C00, 0x4000, 0x4200, 0x4400});
  // Upper lanes of the scalar register hold junk; only element 0 matters.
  const auto s = pack16({0x4000, 0x1234, 0xFFFF, 0x0000});
  const auto r = vec_scalar(ArithOp::mul, fp16(), kRne, a, s);
  EXPECT_EQ(r.value, pack16({0x4000, 0x4400, 0x4600, 0x4800}));
}

TEST(VecScalar, FusedMultiplyAccumulate) {
  const auto a = pack16({0x3C00, 0x4000});
  const auto s = pack16({0x4000});
  const auto c = pack16({0x3C00, 0x3C00, 0x3C00, 0x3C00});
  const auto r = vec_scalar(ArithOp::fmadd, fp16(), kRne, a, s, c);
  EXPECT_EQ(r.value.lane(16, 0), 0x4200u);  // 1*2+1
  EXPECT_EQ(r.value.lane(16, 1), 0x4500u);  // 2*2+1
  EXPECT_EQ(r.value.lane(16, 2), 0x3C00u);  // 0*2+1
}

TEST(CvtHalf, NarrowingWritesSelectedHalfAndFillsOnes) {
  const auto r = pack16({0x3C00, 0x4000}, 32);  // 1.0, 2.0
  auto lo = vec_cvt_half(fp16(), fp8(), kRne, r, Half::low);
  EXPECT_EQ(lo.value.bits(), 0xFFFF403Cu);
  auto hi = vec_cvt_half(fp16(), fp8(), kRne, r, Half::high);
  EXPECT_EQ(hi.value.bits(), 0x403CFFFFu);
}

TEST(CvtHalf, WideningSelectsSourceHalf) {
  const FpRegister r(0x0A083C40, 32);  // FP8 elements 2.0, 1.0, 2^-13, 1.5 * 2^-13
  auto lo = vec_cvt_half(fp8(), fp16(), kRne, r, Half::low);
  EXPECT_EQ(lo.value.bits(), 0x3C004000u);
  auto hi = vec_cvt_half(fp8(), fp16(), kRne, r, Half::high);
  EXPECT_EQ(hi.value.lane(16, 0), 0x0800u);  // 2^-13
  EXPECT_EQ(hi.value.lane(16, 1), 0x0A00u);  // 1.5 * 2^-13
}

TEST(CvtHalf, VectorToScalarOnNarrowRegister) {
  const auto r = pack16({0x3C00, 0x4000}, 32);
  EXPECT_EQ(vec_cvt_half(fp16(), fp32(), kRne, r, Half::low).value.bits(), 0x3F800000u);
  EXPECT_EQ(vec_cvt_half(fp16(), fp32(), kRne, r, Half::high).value.bits(), 0x40000000u);
}

TEST(CvtHalf, FlagsOnlyFromConvertedLanes) {
  // High FP8 elements are signaling NaNs; the low half conversion ignores them.
  const FpRegister r(0x7D7D3C40, 32);
  EXPECT_FALSE(vec_cvt_half(fp8(), fp16(), kRne, r, Half::low).flags.any());
  EXPECT_TRUE(vec_cvt_half(fp8(), fp16(), kRne, r, Half::high).flags.nv);
}

TEST(CvtHalf, NarrowThenWidenIsIdentityOnExactValues) {
  const auto r = pack16({0x3C00, 0xC000}, 32);
  const auto n = vec_cvt_half(fp16(), fp8(), kRne, r, Half::low);
  const auto w = vec_cvt_half(fp8(), fp16(), kRne, n.value, Half::low);
  EXPECT_EQ(w.value, r);
}

TEST(CastAndPack, PacksTwoScalarsIntoLowPair) {
  const auto r = cast_and_pack(fp32(), fp16(), kRne, BitsValue::from_u64(0x3F800000, 32),
                               BitsValue::from_u64(0x40000000, 32), FpRegister(0, 32));
  EXPECT_EQ(r.value.bits(), 0x40003C00u);
}

TEST(CastAndPack, PreservesOtherLanes) {
  const FpRegister dest(0x1111222233334444ULL, 64);
  const auto r = cast_and_pack(fp32(), fp16(), kRne, BitsValue::from_u64(0x3F800000, 32),
                               BitsValue::from_u64(0x40000000, 32), dest, 1);
  EXPECT_EQ(r.value.bits(), 0x40003C0033334444ULL);
  EXPECT_THROW(cast_and_pack(fp32(), fp16(), kRne, BitsValue::from_u64(0, 32),
                             BitsValue::from_u64(0, 32), dest, 2),
               UnsupportedOperation);
}

TEST(CastAndPack, TwoDoublesIntoFp32Pair) {
  const auto r = cast_and_pack(fp64(), fp32(), kRne, BitsValue::from_u64(0x3FF0000000000000ULL, 64),
                               BitsValue::from_u64(0x4000000000000000ULL, 64), FpRegister(0, 64));
  EXPECT_EQ(r.value.bits(), 0x400000003F800000ULL);
}

TEST(Shuffle, PermutesLanes) {
  const FpRegister a(0x40003C00, 32);
  const FpRegister b(0x44004200, 32);
  const std::array<unsigned, 2> id{0, 1}, swap{1, 0}, merge{0, 3};
  EXPECT_EQ(shuffle(fp16(), a, b, id), a);
  EXPECT_EQ(shuffle(fp16(), a, b, swap).bits(), 0x3C004000u);
  EXPECT_EQ(shuffle(fp16(), a, b, merge).bits(), 0x44003C00u);
}

TEST(IntCasts, VectorRoundTripOfSmallIntegers) {
  const auto r = pack16({0x3C00, 0xC000}, 32);  // 1.0, -2.0
  const auto i = vec_cvt_to_int(fp16(), true, kRne, r);
  EXPECT_EQ(i.value.bits(), 0xFFFE0001u);
  EXPECT_EQ(vec_cvt_from_int(fp16(), true, kRne, i.value).value, r);
}

}  // namespace
}  // namespace tpfp
