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

// tpfpu command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "conformance.hpp"
#include "json.hpp"
#include "tpfp/errors.hpp"
#include "tpfp/harness.hpp"
#include "tpfp/isa.hpp"

namespace {

using namespace tpfp;
using Json = nlohmann::ordered_json;

constexpr ArithOp kArithOps[] = {
    ArithOp::add,   ArithOp::sub,    ArithOp::mul,    ArithOp::div,   ArithOp::sqrt,  ArithOp::min,
    ArithOp::max,   ArithOp::sgnj,   ArithOp::sgnjn,  ArithOp::sgnjx, ArithOp::feq,   ArithOp::flt,
    ArithOp::fle,   ArithOp::fmadd,  ArithOp::fmsub,  ArithOp::fnmadd, ArithOp::fnmsub,
};

struct IntType {
  unsigned width;
  bool is_signed;
};

std::optional<IntType> int_type(const std::string& s) {
  if (s == "int32" || s == "w") return IntType{32, true};
  if (s == "uint32" || s == "wu") return IntType{32, false};
  if (s == "int64" || s == "l") return IntType{64, true};
  if (s == "uint64" || s == "lu") return IntType{64, false};
  return std::nullopt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::uint8_t> parse_stream_file(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::uint8_t> bytes;
  std::string digits;
  bool comment = false;
  for (const char c : text) {
    if (c == '\n') comment = false;
    if (comment || std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '#') {
      comment = true;
      continue;
    }
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw UsageError("stream file '" + path + "': unexpected character '" + std::string(1, c) + "'");
    }
    digits.push_back(c);
  }
  if (digits.size() % 2 != 0) throw UsageError("stream file '" + path + "': odd number of hex digits");
  for (std::size_t i = 0; i < digits.size(); i += 2) {
    bytes.push_back(static_cast<std::uint8_t>(std::stoul(digits.substr(i, 2), nullptr, 16)));
  }
  return bytes;
}

std::string hex64(std::uint64_t v, unsigned width) { return BitsValue::from_u64(v, width).hex(); }

FpuConfig select_config(const std::string& preset_name, const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  return preset(preset_name);
}

struct OpArgs {
  std::string op;
  std::vector<std::string> operands;
  std::string fmt = "fp32";
  std::string to;
  std::string rm = "rne";
  std::optional<unsigned> iterations;
  bool json = false;
};

int cmd_op(const OpArgs& a) {
  const RoundingMode rm = parse_rounding_mode(a.rm);
  auto want = [&](std::size_t n) {
    if (a.operands.size() != n) {
      throw UsageError(a.op + " expects " + std::to_string(n) + " operands, got " +
                       std::to_string(a.operands.size()));
    }
  };
  FpResult r;
  if (a.op == "cvt") {
    want(1);
    if (a.to.empty()) throw UsageError("cvt needs --to");
    const auto src_int = int_type(a.fmt);
    const auto dst_int = int_type(a.to);
    if (src_int && dst_int) throw UsageError("cvt needs a floating-point side");
    if (src_int) {
      r = cvt_int_fp(src_int->width, src_int->is_signed, builtin_format(a.to), rm,
                     parse_bits(a.operands[0], src_int->width));
    } else if (dst_int) {
      const FormatDesc& f = builtin_format(a.fmt);
      r = cvt_fp_int(f, dst_int->width, dst_int->is_signed, rm, parse_bits(a.operands[0], f.width()));
    } else {
      const FormatDesc& f = builtin_format(a.fmt);
      r = cvt_fp_fp(f, builtin_format(a.to), rm, parse_bits(a.operands[0], f.width()));
    }
  } else if (a.op == "fmacex" || a.op == "fmulex") {
    if (a.to.empty()) throw UsageError(a.op + " needs --to");
    const FormatDesc& src = builtin_format(a.fmt);
    const FormatDesc& dst = builtin_format(a.to);
    if (a.op == "fmacex") {
      want(3);
      r = fma_multi(src, dst, rm, parse_bits(a.operands[0], src.width()),
                    parse_bits(a.operands[1], src.width()), parse_bits(a.operands[2], dst.width()));
    } else {
      want(2);
      r = mul_multi(src, dst, rm, parse_bits(a.operands[0], src.width()),
                    parse_bits(a.operands[1], src.width()));
    }
  } else if (a.op == "fclass") {
    want(1);
    const FormatDesc& f = builtin_format(a.fmt);
    r.value = BitsValue::from_u64(classify_bits(f, parse_bits(a.operands[0], f.width())), 10);
  } else {
    const ArithOp* found = nullptr;
    for (const auto& op : kArithOps) {
      const std::string name(to_string(op));
      if (a.op == name || a.op == "f" + name) found = &op;
    }
    if (!found) throw UsageError("unknown operation '" + a.op + "'");
    const FormatDesc& f = builtin_format(a.fmt);
    want(static_cast<std::size_t>(arity(*found)));
    std::vector<BitsValue> ops;
    for (const auto& s : a.operands) ops.push_back(parse_bits(s, f.width()));
    if (*found == ArithOp::div && a.iterations) {
      r = div(f, rm, ops[0], ops[1], *a.iterations);
    } else {
      if (a.iterations) throw UsageError("--iterations applies to div only");
      r = evaluate(*found, f, rm, ops);
    }
  }
  if (a.json) {
    Json j{{"op", a.op}, {"bits", r.value.hex()}, {"flags", r.flags.to_string()}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << r.value.hex() << " flags=" << r.flags.to_string() << "\n";
  }
  return 0;
}

struct RunArgs {
  std::string program;
  std::string preset = "ariane";
  std::string config;
  std::vector<std::string> streams;
  std::optional<long> loop;
  bool trace = false;
  bool json = false;
};

int cmd_run(const RunArgs& a) {
  const FpuConfig cfg = select_config(a.preset, a.config);
  const Program p = parse_program(read_file(a.program), cfg);
  Machine m(cfg, a.trace);
  for (const auto& s : a.streams) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--stream expects name=path, got '" + s + "'");
    m.state().streams[s.substr(0, eq)].bytes = parse_stream_file(s.substr(eq + 1));
  }
  const RunReport r = m.run_program(p, a.loop);
  const MachineState& st = m.state();
  if (a.json) {
    Json j;
    j["config"] = cfg.name;
    j["cycles"] = r.timing.total_cycles;
    j["instructions"] = r.timing.instructions;
    j["fflags"] = st.fflags.to_string();
    j["fpu_energy_pj"] = r.energy.total_pj;
    Json e = Json::object();
    for (const auto& [k, line] : r.energy.by_key) e[k] = {{"count", line.count}, {"pj", line.pj}};
    j["energy_by_key"] = e;
    Json regs = Json::object();
    for (unsigned i = 0; i < 32; ++i) {
      if (!cfg.fregs_in_xregs && st.fregs[i] != 0) regs["f" + std::to_string(i)] = hex64(st.fregs[i], cfg.flen);
    }
    for (unsigned i = 0; i < 32; ++i) {
      if (st.xregs[i] != 0) regs["x" + std::to_string(i)] = hex64(st.xregs[i], cfg.xlen);
    }
    j["registers"] = regs;
    Json streams = Json::object();
    for (const auto& [name, s] : st.streams) {
      std::string hexs;
      for (const auto b : s.bytes) hexs += hex64(b, 8).substr(2);
      streams[name] = {{"cursor", s.cursor}, {"bytes", hexs}};
    }
    j["streams"] = streams;
    if (a.trace) {
      Json t = Json::array();
      for (const auto& it : r.timing.trace) t.push_back({{"index", it.tag}, {"issue", it.issue}, {"retire", it.retire}});
      j["trace"] = t;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "config: " << cfg.name << "\n";
  std::cout << "cycles: " << r.timing.total_cycles << "\n";
  std::cout << "instructions: " << r.timing.instructions << "\n";
  std::cout << "fflags: " << st.fflags.to_string() << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "fpu energy: %.4f pJ\n", r.energy.total_pj);
  std::cout << line;
  for (const auto& [k, e] : r.energy.by_key) {
    std::snprintf(line, sizeof line, "  %-20s %8ld %12.4f\n", k.c_str(), e.count, e.pj);
    std::cout << line;
  }
  std::cout << "registers:\n";
  for (unsigned i = 0; i < 32; ++i) {
    if (!cfg.fregs_in_xregs && st.fregs[i] != 0) std::cout << "  f" << i << " = " << hex64(st.fregs[i], cfg.flen) << "\n";
  }
  for (unsigned i = 0; i < 32; ++i) {
    if (st.xregs[i] != 0) std::cout << "  x" << i << (cfg.fregs_in_xregs ? "/f" + std::to_string(i) : "") << " = " << hex64(st.xregs[i], cfg.xlen) << "\n";
  }
  for (const auto& [name, s] : st.streams) {
    std::cout << "stream @" << name << " (cursor " << s.cursor << "):";
    for (std::size_t i = 0; i < s.bytes.size(); ++i) std::cout << (i % 16 == 0 ? "\n  " : " ") << hex64(s.bytes[i], 8).substr(2);
    std::cout << "\n";
  }
  if (a.trace) {
    std::cout << "trace (body index, issue, retire):\n";
    for (const auto& it : r.timing.trace) std::cout << "  " << it.tag << " " << it.issue << " " << it.retire << "\n";
  }
  return 0;
}

int cmd_selftest(unsigned jobs, bool json) {
  const conformance::Tally t = conformance::fp8_exhaustive(jobs);
  if (json) {
    Json j{{"checks", t.checks}, {"mismatches", t.mismatches}, {"failures", t.failures}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "fp8 exhaustive: " << t.checks << " checks, " << t.mismatches << " mismatches\n";
    for (const auto& f : t.failures) std::cout << "  " << f << "\n";
  }
  return t.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tpfpu: transprecision FPU emulator"};
  app.require_subcommand(1);

  OpArgs op;
  auto* op_cmd = app.add_subcommand("op", "Evaluate one operation and print result bits and flags");
  op_cmd->add_option("operation", op.op, "add, sub, mul, div, sqrt, min, max, sgnj[n|x], eq, lt, le, "
                                          "madd, msub, nmadd, nmsub (optional f prefix), fclass, cvt, fmacex, "
                                          "fmulex")
      ->required();
  op_cmd->add_option("operands", op.operands, "Operand bit patterns (0x... or decimal)");
  op_cmd->add_option("--fmt", op.fmt, "Operand format (name or suffix; int32/uint32/int64/uint64 for cvt)")
      ->capture_default_str();
  op_cmd->add_option("--to", op.to, "Destination format for cvt, fmacex and fmulex");
  op_cmd->add_option("--rm", op.rm, "Rounding mode: rne, rtz, rdn, rup, rmm")->capture_default_str();
  op_cmd->add_option("--iterations", op.iterations, "Divider iterations for div");
  op_cmd->add_flag("--json", op.json, "Emit JSON");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute an assembly program");
  run_cmd->add_option("program", run.program, "Program file")->required();
  run_cmd->add_option("--preset", run.preset, "Configuration preset")->capture_default_str();
  run_cmd->add_option("--config", run.config, "Configuration JSON file (overrides --preset)");
  run_cmd->add_option("--stream", run.streams, "Input stream as name=path (hex byte file)");
  run_cmd->add_option("--loop", run.loop, "Loop count (overrides .loop)");
  run_cmd->add_flag("--trace", run.trace, "Print per-instruction issue and retire cycles");
  run_cmd->add_flag("--json", run.json, "Emit JSON");

  std::string cs_preset = "ri5cy", cs_config;
  std::size_t cs_n = 1024;
  std::uint64_t cs_seed = 1;
  StreamDistribution dist;
  bool cs_json = false;
  auto* cs_cmd = app.add_subcommand("case-study", "Run the five dot-product kernel variants");
  cs_cmd->add_option("--preset", cs_preset, "Configuration preset")->capture_default_str();
  cs_cmd->add_option("--config", cs_config, "Configuration JSON file (overrides --preset)");
  cs_cmd->add_option("--n", cs_n, "Stream length (even)")->capture_default_str();
  cs_cmd->add_option("--seed", cs_seed, "Stream seed")->capture_default_str();
  cs_cmd->add_option("--exp-min", dist.exp_min, "Smallest input exponent")->capture_default_str();
  cs_cmd->add_option("--exp-max", dist.exp_max, "Input exponent upper bound (exclusive)")->capture_default_str();
  cs_cmd->add_flag("--random-signs", dist.random_signs, "Draw input signs at random");
  cs_cmd->add_flag("--json", cs_json, "Emit JSON");

  std::string rep_preset = "ariane", rep_config;
  std::optional<double> rep_freq;
  bool rep_json = false;
  auto* rep_cmd = app.add_subcommand("report", "FMA efficiency table");
  rep_cmd->add_option("--preset", rep_preset, "Configuration preset")->capture_default_str();
  rep_cmd->add_option("--config", rep_config, "Configuration JSON file (overrides --preset)");
  rep_cmd->add_option("--freq", rep_freq, "Clock frequency in Hz (default: from configuration)");
  rep_cmd->add_flag("--json", rep_json, "Emit JSON");

  unsigned jobs = conformance::default_jobs();
  bool st_json = false;
  auto* st_cmd = app.add_subcommand("selftest", "Exhaustive FP8 check against the reference oracle");
  st_cmd->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  st_cmd->add_flag("--json", st_json, "Emit JSON");

  std::string dump_preset = "ariane", dump_config;
  auto* dump_cmd = app.add_subcommand("dump-config", "Print a configuration as JSON");
  dump_cmd->add_option("--preset", dump_preset, "Configuration preset (" + [] {
    std::string s;
    for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ")")->capture_default_str();
  dump_cmd->add_option("--config", dump_config, "Configuration JSON file to normalize");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*op_cmd) return cmd_op(op);
    if (*run_cmd) return cmd_run(run);
    if (*cs_cmd) {
      const FpuConfig cfg = select_config(cs_preset, cs_config);
      const CaseStudyReport r = run_case_study(cfg, cs_n, cs_seed, dist);
      std::cout << (cs_json ? case_study_json(r) : case_study_text(r));
      return 0;
    }
    if (*rep_cmd) {
      const FpuConfig cfg = select_config(rep_preset, rep_config);
      const double f = rep_freq.value_or(cfg.frequency_hz);
      const auto rows = efficiency_report(cfg, f);
      std::cout << (rep_json ? efficiency_json(cfg, f, rows) : efficiency_text(cfg, f, rows));
      return 0;
    }
    if (*st_cmd) return cmd_selftest(jobs, st_json);
    if (*dump_cmd) {
      std::cout << config_to_json(select_config(dump_preset, dump_config));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
