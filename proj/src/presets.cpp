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

#include <cmath>

#include "tpfp/errors.hpp"
#include "tpfp/fpumodel.hpp"

namespace tpfp {

namespace {

// Energy tables carry three kinds of entries, listed in energy_notes:
// measured values, values derived from measured relative savings, and
// assumed values filling instructions that were never characterized.

double q(double pj) { return std::round(pj * 1e4) / 1e4; }

struct EnergyBuilder {
  std::map<std::string, double>& table;
  void set(const std::string& key, double pj) { table[key] = q(pj); }
};

const char* const kFmts[] = {"d", "s", "h", "ah", "b"};

unsigned width_of(const std::string& sfx) {
  if (sfx == "d") return 64;
  if (sfx == "s") return 32;
  if (sfx == "b") return 8;
  return 16;
}

/// Per-format values for {d, s, h, ah, b} from an FP64 anchor and the
/// relative savings against the next larger format (FP32 vs FP64, FP16 vs
/// FP32, FP16alt vs FP32, FP8 vs FP16).
std::map<std::string, double> savings_chain(double d, double s_save, double h_save,
                                            double ah_save, double b_save) {
  const double s = d * (1 - s_save);
  const double h = s * (1 - h_save);
  return {{"d", d}, {"s", s}, {"h", h}, {"ah", s * (1 - ah_save)}, {"b", h * (1 - b_save)}};
}

/// Vector values for {s, h, ah, b} from an FP32 anchor.
std::map<std::string, double> vector_chain(double s, double h_save, double ah_save,
                                           double b_save) {
  const double h = s * (1 - h_save);
  return {{"s", s}, {"h", h}, {"ah", s * (1 - ah_save)}, {"b", h * (1 - b_save)}};
}

void fill_ariane_energy(FpuConfig& cfg) {
  EnergyBuilder e{cfg.energy_pj};
  // Scalar FMA family.
  const std::map<std::string, double> fma = {
      {"d", 26.7}, {"s", 9.44}, {"h", 4.96}, {"ah", 4.36}, {"b", 2.54}};
  for (const auto& [f, v] : fma) {
    for (const char* op : {"fmadd.", "fmsub.", "fnmadd.", "fnmsub."}) e.set(op + f, v);
  }
  // Vector FMA.
  const std::map<std::string, double> vfma = {{"s", 20.0}, {"h", 16.08}, {"ah", 13.76}, {"b", 12.8}};
  for (const auto& [f, v] : vfma) {
    e.set("vfmac." + f, v);
    e.set("vfmac.r." + f, v);
  }
  // Scalar mul/add/compare: FP64 anchors assumed, narrower formats derived.
  const auto mul = savings_chain(0.80 * 26.7, 0.65, 0.47, 0.52, 0.47);
  const auto add = savings_chain(0.55 * 26.7, 0.53, 0.47, 0.57, 0.47);
  const auto cmp = savings_chain(0.15 * 26.7, 0.38, 0.34, 0.35, 0.22);
  for (const char* f : kFmts) {
    e.set(std::string("fmul.") + f, mul.at(f));
    e.set(std::string("fadd.") + f, add.at(f));
    e.set(std::string("fsub.") + f, add.at(f));
    for (const char* op : {"feq.", "flt.", "fle.", "fmin.", "fmax.", "fsgnj.", "fsgnjn.",
                           "fsgnjx.", "fclass."}) {
      e.set(op + std::string(f), cmp.at(f));
    }
    e.set(std::string("fmv.x.") + f, cmp.at(f));
    e.set(std::string("fmv.") + f + ".x", cmp.at(f));
  }
  // Divide and square root, assumed, scaled by divider latency.
  const std::map<std::string, double> div = {
      {"d", 40.0}, {"s", 21.0}, {"h", 13.3}, {"ah", 11.4}, {"b", 7.6}};
  for (const auto& [f, v] : div) {
    e.set("fdiv." + f, v);
    e.set("fsqrt." + f, v);
  }
  // Vector mul/add/compare: FP32 anchors assumed, narrower formats derived.
  const auto vmul = vector_chain(0.80 * 20.0, 0.21, 0.32, 0.21);
  const auto vadd = vector_chain(0.55 * 20.0, 0.20, 0.31, 0.19);
  const auto vcmp = vector_chain(0.15 * 20.0, 0.14, 0.23, 0.08);
  for (const auto& [f, v] : vmul) {
    e.set("vfmul." + f, v);
    e.set("vfmul.r." + f, v);
  }
  for (const auto& [f, v] : vadd) {
    for (const char* op : {"vfadd.", "vfsub.", "vfadd.r.", "vfsub.r."}) e.set(op + f, v);
  }
  for (const auto& [f, v] : vcmp) {
    for (const char* op : {"vfeq.", "vflt.", "vfle.", "vfmin.", "vfmax.", "vfsgnj.", "vfsgnjn.",
                           "vfsgnjx.", "vfeq.r.", "vflt.r.", "vfle.r.", "vfmin.r.", "vfmax.r.",
                           "vfsgnj.r.", "vfsgnjn.r.", "vfsgnjx.r."}) {
      e.set(op + f, v);
    }
  }
  // Scalar FP-FP casts. The halving chain d->s, s->h, h->b is measured or
  // derived; other pairs take the chain value of their wider format and
  // widening casts are assumed 20% cheaper.
  const double cast_s_d = 7.0;
  const double cast_h_s = cast_s_d * (1 - 0.30);
  const double cast_b_h = cast_h_s * (1 - 0.35);
  auto scalar_cast = [&](unsigned wider) {
    return wider == 64 ? cast_s_d : wider == 32 ? cast_h_s : cast_b_h;
  };
  // Vector casts: FP32/FP16 anchor assumed; FP16/FP8 derived 9.5% cheaper.
  const double vcast_h_s = 9.0;
  const double vcast_b_h = vcast_h_s * (1 - 0.095);
  auto vector_cast = [&](unsigned wider) { return wider >= 32 ? vcast_h_s : vcast_b_h; };
  for (const char* dst : kFmts) {
    for (const char* src : kFmts) {
      if (std::string(dst) == src) continue;
      const unsigned wd = width_of(dst), ws = width_of(src);
      const double widen = wd > ws ? 0.8 : 1.0;
      const std::string pair = std::string(dst) + "." + src;
      const double sc = scalar_cast(std::max(wd, ws)) * widen;
      e.set("fcvt." + pair, sc);
      if (std::min(wd, ws) <= 32) e.set("vfcvt." + pair, vector_cast(std::max(wd, ws)) * widen);
      if (2 * wd <= 64) {
        for (const char* l : {"a", "b", "c", "d"}) {
          if ((2 * (l[0] - 'a') + 2) * wd <= 64) e.set("vfcpk" + std::string(l) + "." + pair, 1.3 * sc);
        }
      }
    }
  }
  // Scalar FP-integer casts: FP32/int32 anchor assumed, FP16alt derived.
  const std::map<std::string, double> icast = {
      {"d", 6.0}, {"s", 5.0}, {"h", 4.0}, {"ah", 5.0 * (1 - 0.25)}, {"b", 3.5}};
  for (const auto& [f, v] : icast) {
    for (const char* i : {"w", "wu", "l", "lu"}) {
      e.set("fcvt." + std::string(i) + "." + f, v);
      e.set("fcvt." + f + "." + i, v);
    }
  }
  // Vector FP-integer casts on same-width integers, assumed.
  const std::map<std::string, double> vicast = {{"s", 8.0}, {"h", 8.5}, {"ah", 8.2}, {"b", 9.0}};
  for (const auto& [f, v] : vicast) {
    for (const char* i : {"x", "xu"}) {
      e.set("vfcvt." + std::string(i) + "." + f, v);
      e.set("vfcvt." + f + "." + i, v);
    }
  }
  cfg.energy_notes = {
      "measured: fmadd.d 26.7, vfmac.s 20.0, fcvt.s.d 7.0",
      "measured: scalar FMA per FLOP for s/h/ah/b and vector FMA per FLOP for h/ah/b, stored per "
      "instruction (x2 FLOPs x lanes)",
      "derived: fmul/fadd/fcmp for s/h/ah/b from relative savings against the next larger format "
      "(mul 65/47/52/47%, add 53/47/57/47%, cmp 38/34/35/22%)",
      "derived: vector mul/add/cmp for h/ah/b from per-instruction savings (mul 21/32/21%, add "
      "20/31/19%, cmp 14/23/8%)",
      "derived: fcvt.h.s = fcvt.s.d x 0.70; fcvt.b.h = fcvt.h.s x 0.65; vfcvt.b.h = vfcvt.h.s x "
      "0.905; vfcpk* = 1.3 x the matching scalar cast; fcvt.*.ah int casts = FP32 x 0.75",
      "assumed: FP64 anchors fmul.d = 0.80, fadd.d = 0.55, compare = 0.15 of fmadd.d; vector "
      "anchors use the same ratios of vfmac.s",
      "assumed: fmsub/fnmadd/fnmsub equal fmadd; fsub equals fadd; min/max/sign-injection/"
      "fclass/fmv equal compare; .r forms equal their vector base",
      "assumed: fdiv/fsqrt, remaining FP-FP cast pairs (chain value of the wider format, widening "
      "x0.8), vfcvt.h.s anchor 9.0, int cast anchors",
  };
}

void fill_ri5cy_energy(FpuConfig& cfg) {
  FpuConfig wide;
  fill_ariane_energy(wide);
  EnergyBuilder e{cfg.energy_pj};
  auto uses_only = [](const std::string& key) {
    // Keep entries whose format tokens are all s/h/ah (or integer tokens).
    std::size_t pos = key.find('.');
    while (pos != std::string::npos) {
      const std::size_t next = key.find('.', pos + 1);
      const std::string tok = key.substr(pos + 1, next == std::string::npos ? next : next - pos - 1);
      if (tok == "d" || tok == "b" || tok == "l" || tok == "lu") return false;
      pos = next;
    }
    return true;
  };
  for (const auto& [k, v] : wide.energy_pj) {
    if (!uses_only(k)) continue;
    if (k.rfind("vfcpk", 0) == 0) {
      if (k[5] == 'a') e.set(k, v);
      continue;
    }
    if (k.rfind("fdiv", 0) == 0 || k.rfind("fsqrt", 0) == 0) continue;
    e.set(k, k[0] == 'v' ? 0.5 * v : v);
  }
  for (const char* src : {"h", "ah"}) {
    e.set(std::string("fmacex.s.") + src, wide.energy_pj.at("fmadd.s"));
    e.set(std::string("fmulex.s.") + src, wide.energy_pj.at("fmul.s"));
  }
  cfg.energy_notes = {
      "assumed: no per-instruction characterization exists for this unit; scalar entries reuse the "
      "64-bit unit's table and vector entries are halved for the 32-bit datapath",
      "assumed: fmacex.s.* equals fmadd.s and fmulex.s.* equals fmul.s",
      "assumed: frequency_hz is a placeholder for efficiency reports",
  };
}

std::vector<ConfigFormat> builtin_config_formats(std::initializer_list<const char*> sfx) {
  std::vector<ConfigFormat> out;
  for (const char* s : sfx) {
    const FormatDesc& f = builtin_format(s);
    out.push_back(ConfigFormat{f, s});
  }
  return out;
}

FpuConfig ariane() {
  FpuConfig c;
  c.name = "ariane";
  c.w_fpu = 64;
  c.flen = 64;
  c.xlen = 64;
  c.formats = builtin_config_formats({"d", "s", "h", "ah", "b"});
  const std::map<std::string, int> addmul = {
      {"fp64", 4}, {"fp32", 3}, {"fp16", 3}, {"fp16alt", 3}, {"fp8", 2}};
  for (const auto& f : c.formats) {
    const std::string& n = f.fmt.name();
    c.blocks[Block::addmul].formats[n] = {Impl::parallel, addmul.at(n)};
    c.blocks[Block::divsqrt].formats[n] = {Impl::merged, 0};
    c.blocks[Block::comp].formats[n] = {Impl::parallel, 1};
    c.blocks[Block::conv].formats[n] = {Impl::merged, 2};
  }
  c.blocks[Block::divsqrt].merged_lanes = {64};
  c.blocks[Block::conv].merged_lanes = {64, 64, 16, 16, 8, 8, 8, 8};
  c.simd_enabled = true;
  c.fregs_in_xregs = false;
  c.check_boxing = false;
  c.table_lanes = LaneCount::dedicated;
  c.frequency_hz = 923e6;
  fill_ariane_energy(c);
  return c;
}

FpuConfig ri5cy() {
  FpuConfig c;
  c.name = "ri5cy";
  c.w_fpu = 32;
  c.flen = 32;
  c.xlen = 32;
  c.formats = builtin_config_formats({"s", "h", "ah"});
  for (const auto& f : c.formats) {
    const std::string& n = f.fmt.name();
    c.blocks[Block::addmul].formats[n] = {Impl::merged, 1};
    c.blocks[Block::divsqrt].formats[n] = {Impl::disabled, 0};
    c.blocks[Block::comp].formats[n] = {Impl::parallel, 1};
    c.blocks[Block::conv].formats[n] = {Impl::merged, 1};
  }
  c.blocks[Block::conv].merged_lanes = {32, 32};
  c.simd_enabled = true;
  c.fregs_in_xregs = true;
  c.check_boxing = false;
  c.table_lanes = LaneCount::usable;
  c.frequency_hz = 350e6;
  fill_ri5cy_energy(c);
  return c;
}

}  // namespace

FpuConfig preset(std::string_view name) {
  if (name == "ariane") return ariane();
  if (name == "ri5cy") return ri5cy();
  throw LookupError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"ariane", "ri5cy"}; }

}  // namespace tpfp
