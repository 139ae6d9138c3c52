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

#include "tpfp/harness.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "tpfp/errors.hpp"
#include "tpfp/isa.hpp"

namespace tpfp {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_double(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string hex_bits(std::uint64_t v, unsigned width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%0*llX", static_cast<int>((width + 3) / 4),
                static_cast<unsigned long long>(v));
  return buf;
}

std::string bits_text(const std::optional<int>& b) { return b ? std::to_string(*b) : "all"; }

Json bits_json(const std::optional<int>& b) { return b ? Json(*b) : Json("all"); }

std::vector<std::uint8_t> to_bytes(const std::vector<std::uint16_t>& v) {
  std::vector<std::uint8_t> out;
  out.reserve(v.size() * 2);
  for (const auto x : v) {
    out.push_back(static_cast<std::uint8_t>(x));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
  }
  return out;
}

}  // namespace

StreamPair gen_streams(std::size_t n, std::uint64_t seed, const StreamDistribution& dist) {
  if (n == 0) throw UsageError("stream length must be >= 1");
  const FormatDesc& h = fp16();
  if (dist.exp_min >= dist.exp_max || dist.exp_min < h.emin() || dist.exp_max > h.emax() + 1) {
    throw UsageError("exponent range must be a nonempty subrange of FP16 normals");
  }
  // Distribution mapping uses only raw engine output so streams match across
  // standard libraries.
  std::mt19937_64 rng(seed);
  const std::uint64_t count = static_cast<std::uint64_t>(dist.exp_max - dist.exp_min) << 10;
  auto draw = [&] {
    const std::uint64_t idx = ((rng() >> 32) * count) >> 32;
    const std::uint64_t exp = static_cast<std::uint64_t>(dist.exp_min + h.bias()) + (idx >> 10);
    std::uint64_t bits = (exp << 10) | (idx & 0x3FF);
    if (dist.random_signs && (rng() >> 63)) bits |= 0x8000;
    return static_cast<std::uint16_t>(bits);
  };
  StreamPair s;
  s.a.reserve(n);
  s.b.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.a.push_back(draw());
    s.b.push_back(draw());
  }
  return s;
}

ExactReal exact_dot(std::span<const std::uint16_t> a, std::span<const std::uint16_t> b) {
  if (a.size() != b.size()) throw UsageError("streams differ in length");
  ExactReal acc = ExactReal::zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ExactReal x = ExactReal::from_bits(fp16(), BitsValue::from_u64(a[i], 16));
    const ExactReal y = ExactReal::from_bits(fp16(), BitsValue::from_u64(b[i], 16));
    if (!x.is_finite() || !y.is_finite()) throw UsageError("streams must hold finite values");
    acc = exact_add(acc, exact_mul(x, y), false);
  }
  return acc;
}

double rel_error(const ExactReal& exact, const ExactReal& got) {
  if (!exact.is_finite() || exact.is_zero()) throw UsageError("relative error needs a finite nonzero reference");
  if (!got.is_finite()) return std::numeric_limits<double>::infinity();
  const ExactReal diff = exact_add(got, -exact, false);
  return std::fabs(diff.to_double() / exact.to_double());
}

int bits_correct_from_rel(double rel) {
  if (!(rel > 0.0)) throw UsageError("bits_correct needs a positive relative error");
  return static_cast<int>(std::lround(-std::log2(rel)));
}

std::optional<int> bits_correct(const ExactReal& exact, const ExactReal& got) {
  if (got.is_finite() && compare(exact, got) == 0) return std::nullopt;
  return bits_correct_from_rel(rel_error(exact, got));
}

unsigned precision_bits(const ExactReal& x) {
  if (!x.is_finite() || x.is_zero()) return 0;
  const BigInt& s = x.significand();
  return static_cast<unsigned>(boost::multiprecision::msb(s) - boost::multiprecision::lsb(s) + 1);
}

char to_char(Variant v) { return static_cast<char>('a' + static_cast<int>(v)); }

std::string_view describe(Variant v) {
  switch (v) {
    case Variant::a: return "fp16 fmadd.h";
    case Variant::b: return "cast to fp32, fmadd.s";
    case Variant::c: return "fmul.h, cast, fadd.s (instruction count inferred)";
    case Variant::d: return "vfmul.h, two casts, two fadd.s";
    case Variant::e: return "fmacex.s.h";
  }
  return "";
}

std::string variant_program(Variant v) {
  switch (v) {
    case Variant::a:
      return "flh f1, @a\nflh f2, @b\nfmadd.h f3, f1, f2, f3\n";
    case Variant::b:
      return "flh f1, @a\nflh f2, @b\nfcvt.s.h f1, f1\nfcvt.s.h f2, f2\nfmadd.s f3, f1, f2, f3\n";
    case Variant::c:
      return "flh f1, @a\nflh f2, @b\nfmul.h f1, f1, f2\nfcvt.s.h f1, f1\nfadd.s f3, f3, f1\n";
    case Variant::d:
      return "flw f1, @a\nflw f2, @b\nvfmul.h f1, f1, f2\nvfcvt.s.h.lo f4, f1\n"
             "vfcvt.s.h.hi f5, f1\nfadd.s f3, f3, f4\nfadd.s f3, f3, f5\n";
    case Variant::e:
      return "flh f1, @a\nflh f2, @b\nfmacex.s.h f3, f1, f2\n";
  }
  return "";
}

unsigned pairs_per_iteration(Variant v) { return v == Variant::d ? 2 : 1; }

const FormatDesc& result_format(Variant v) { return v == Variant::a ? fp16() : fp32(); }

VariantResult run_variant(const FpuConfig& cfg, Variant v, const StreamPair& s,
                          const ExactReal& exact, const ExactReal& fp16_exact) {
  const std::size_t n = s.a.size();
  if (n == 0 || n % 2 != 0 || s.b.size() != n) throw UsageError("stream length must be even and nonzero");
  Machine m(cfg, false);
  m.state().streams["a"].bytes = to_bytes(s.a);
  m.state().streams["b"].bytes = to_bytes(s.b);
  const Program p = parse_program(variant_program(v), cfg);
  const RunReport run = m.run_program(p, static_cast<long>(n / pairs_per_iteration(v)));

  VariantResult r;
  r.variant = v;
  const FormatDesc& f = result_format(v);
  r.result_bits = m.freg(3).lane(f.width(), 0);
  r.value = ExactReal::from_bits(f, BitsValue::from_u64(r.result_bits, f.width()));
  r.rel_error = rel_error(exact, r.value);
  r.bits_correct = bits_correct(exact, r.value);
  r.rel_error_vs_fp16_exact = fp16_exact.is_finite() && !fp16_exact.is_zero()
                                  ? rel_error(fp16_exact, r.value)
                                  : std::numeric_limits<double>::quiet_NaN();
  r.instructions = run.timing.instructions;
  r.instr_per_pair = static_cast<double>(run.timing.instructions) / static_cast<double>(n);
  r.cycles = run.timing.total_cycles;
  r.energy = run.energy;
  r.flags = m.read_fflags();
  return r;
}

CaseStudyReport run_case_study(const FpuConfig& cfg, std::size_t n, std::uint64_t seed,
                               const StreamDistribution& dist) {
  if (n == 0 || n % 2 != 0) throw UsageError("n must be even and nonzero");
  CaseStudyReport r;
  r.config = cfg.name;
  r.n = n;
  r.seed = seed;
  r.dist = dist;
  const StreamPair s = gen_streams(n, seed, dist);
  r.exact = exact_dot(s.a, s.b);
  if (r.exact.is_zero()) throw UsageError("exact result is zero; relative errors are undefined");
  r.exact_precision_bits = precision_bits(r.exact);
  r.fp16_exact_bits = round(fp16(), r.exact, RoundingMode::rne).value.to_u64();
  const ExactReal fp16_exact = ExactReal::from_bits(fp16(), BitsValue::from_u64(r.fp16_exact_bits, 16));
  r.fp16_rel_error = rel_error(r.exact, fp16_exact);
  r.fp16_bits_correct = bits_correct(r.exact, fp16_exact);
  for (const Variant v : kAllVariants) r.variants.push_back(run_variant(cfg, v, s, r.exact, fp16_exact));
  return r;
}

std::string case_study_text(const CaseStudyReport& r) {
  std::string out;
  out += "case study: config " + r.config + ", n=" + std::to_string(r.n) +
         ", seed=" + std::to_string(r.seed) + "\n";
  out += "inputs: fp16 normals, exponent in [" + std::to_string(r.dist.exp_min) + ", " +
         std::to_string(r.dist.exp_max) + ")" + (r.dist.random_signs ? ", random signs" : ", positive") +
         "\n";
  out += "exact result: " + fmt_double("%.17g", r.exact.to_double()) + " (" +
         std::to_string(r.exact_precision_bits) + " significant bits)\n";
  out += "exact cast to fp16: " + hex_bits(r.fp16_exact_bits, 16) +
         " rel_error=" + fmt_double("%.2e", r.fp16_rel_error) +
         " bits_correct=" + bits_text(r.fp16_bits_correct) + "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-3s %-12s %-10s %-10s %-5s %7s %6s %8s %12s  %s\n", "var",
                "result", "rel_err", "vs_fp16", "bits", "instr", "/pair", "cycles", "fpu_pJ",
                "body");
  out += line;
  for (const auto& v : r.variants) {
    const FormatDesc& f = result_format(v.variant);
    std::snprintf(line, sizeof line, "%-3c %-12s %-10s %-10s %-5s %7ld %6s %8ld %12s  %s\n",
                  to_char(v.variant), hex_bits(v.result_bits, f.width()).c_str(),
                  fmt_double("%.2e", v.rel_error).c_str(),
                  fmt_double("%.2e", v.rel_error_vs_fp16_exact).c_str(),
                  bits_text(v.bits_correct).c_str(), v.instructions,
                  fmt_double("%.2f", v.instr_per_pair).c_str(), v.cycles,
                  fmt_double("%.2f", v.energy.total_pj).c_str(),
                  std::string(describe(v.variant)).c_str());
    out += line;
  }
  out += "\nenergy covers FPU instructions only; loads and stores are excluded.\n";
  return out;
}

std::string case_study_json(const CaseStudyReport& r) {
  Json j;
  j["config"] = r.config;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["distribution"] = {{"exp_min", r.dist.exp_min},
                       {"exp_max", r.dist.exp_max},
                       {"random_signs", r.dist.random_signs}};
  j["exact"] = {{"value", r.exact.to_double()}, {"precision_bits", r.exact_precision_bits}};
  j["fp16_exact"] = {{"bits", hex_bits(r.fp16_exact_bits, 16)},
                     {"rel_error", r.fp16_rel_error},
                     {"bits_correct", bits_json(r.fp16_bits_correct)}};
  Json vars = Json::array();
  for (const auto& v : r.variants) {
    const FormatDesc& f = result_format(v.variant);
    Json energy = Json::object();
    for (const auto& [key, line] : v.energy.by_key) energy[key] = {{"count", line.count}, {"pj", line.pj}};
    vars.push_back({{"id", std::string(1, to_char(v.variant))},
                    {"body", describe(v.variant)},
                    {"result_format", f.name()},
                    {"result_bits", hex_bits(v.result_bits, f.width())},
                    {"value", v.value.to_double()},
                    {"rel_error", v.rel_error},
                    {"rel_error_vs_fp16_exact", v.rel_error_vs_fp16_exact},
                    {"bits_correct", bits_json(v.bits_correct)},
                    {"instructions", v.instructions},
                    {"instr_per_pair", v.instr_per_pair},
                    {"cycles", v.cycles},
                    {"fpu_energy_pj", v.energy.total_pj},
                    {"energy_by_key", energy},
                    {"fflags", v.flags.to_string()}});
  }
  j["variants"] = vars;
  return j.dump(2) + "\n";
}

std::string efficiency_text(const FpuConfig& cfg, double freq_hz,
                            const std::vector<EfficiencyRow>& rows) {
  std::string out = "FMA efficiency: config " + cfg.name + ", " +
                    fmt_double("%.4g", freq_hz / 1e6) + " MHz\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-7s %4s %6s %9s %9s %10s %9s\n", "format", "mode", "L",
                "lanes", "GFLOP/s", "pJ/FLOP", "GFLOP/s/W", "relative");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-8s %-7s %4d %6u %9.2f %9.2f %10.1f %9.2f\n",
                  r.format.c_str(), r.vector ? "vector" : "scalar", r.latency, r.lanes, r.gflops,
                  r.pj_per_flop, r.gflops_per_watt, r.relative);
    out += line;
  }
  return out;
}

std::string efficiency_json(const FpuConfig& cfg, double freq_hz,
                            const std::vector<EfficiencyRow>& rows) {
  Json j;
  j["config"] = cfg.name;
  j["frequency_hz"] = freq_hz;
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"format", r.format},
                   {"mode", r.vector ? "vector" : "scalar"},
                   {"latency", r.latency},
                   {"lanes", r.lanes},
                   {"gflops", r.gflops},
                   {"pj_per_flop", r.pj_per_flop},
                   {"gflops_per_watt", r.gflops_per_watt},
                   {"relative", r.relative}});
  }
  j["rows"] = arr;
  return j.dump(2) + "\n";
}

}  // namespace tpfp
