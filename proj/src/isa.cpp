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

#include "tpfp/isa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "tpfp/errors.hpp"

namespace tpfp {

namespace {

std::uint64_t mask64(unsigned width) { return width >= 64 ? ~0ULL : (1ULL << width) - 1; }

std::uint64_t sign_extend(std::uint64_t v, unsigned from, unsigned to) {
  v &= mask64(from);
  if (from < 64 && ((v >> (from - 1)) & 1)) v |= ~mask64(from);
  return v & mask64(to);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

const std::map<std::string, ArithOp>& scalar_ops() {
  static const std::map<std::string, ArithOp> m = {
      {"fadd", ArithOp::add},     {"fsub", ArithOp::sub},       {"fmul", ArithOp::mul},
      {"fdiv", ArithOp::div},     {"fsqrt", ArithOp::sqrt},     {"fmin", ArithOp::min},
      {"fmax", ArithOp::max},     {"fsgnj", ArithOp::sgnj},     {"fsgnjn", ArithOp::sgnjn},
      {"fsgnjx", ArithOp::sgnjx}, {"feq", ArithOp::feq},        {"flt", ArithOp::flt},
      {"fle", ArithOp::fle},      {"fmadd", ArithOp::fmadd},    {"fmsub", ArithOp::fmsub},
      {"fnmadd", ArithOp::fnmadd}, {"fnmsub", ArithOp::fnmsub},
  };
  return m;
}

const std::map<std::string, ArithOp>& vector_ops() {
  static const std::map<std::string, ArithOp> m = {
      {"vfadd", ArithOp::add},     {"vfsub", ArithOp::sub},   {"vfmul", ArithOp::mul},
      {"vfdiv", ArithOp::div},     {"vfsqrt", ArithOp::sqrt}, {"vfmin", ArithOp::min},
      {"vfmax", ArithOp::max},     {"vfsgnj", ArithOp::sgnj}, {"vfsgnjn", ArithOp::sgnjn},
      {"vfsgnjx", ArithOp::sgnjx}, {"vfeq", ArithOp::feq},    {"vflt", ArithOp::flt},
      {"vfle", ArithOp::fle},      {"vfmac", ArithOp::fmadd},
  };
  return m;
}

bool rounds(ArithOp op) {
  switch (op) {
    case ArithOp::add:
    case ArithOp::sub:
    case ArithOp::mul:
    case ArithOp::div:
    case ArithOp::sqrt:
    case ArithOp::fmadd:
    case ArithOp::fmsub:
    case ArithOp::fnmadd:
    case ArithOp::fnmsub:
      return true;
    default:
      return false;
  }
}

struct IntSpec {
  unsigned width;
  bool is_signed;
};

std::optional<IntSpec> scalar_int(std::string_view t) {
  if (t == "w") return IntSpec{32, true};
  if (t == "wu") return IntSpec{32, false};
  if (t == "l") return IntSpec{64, true};
  if (t == "lu") return IntSpec{64, false};
  return std::nullopt;
}

std::optional<bool> vector_int(std::string_view t) {
  if (t == "x") return true;
  if (t == "xu") return false;
  return std::nullopt;
}

class LineParser {
 public:
  LineParser(const FpuConfig& cfg, int line) : cfg_(cfg), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_); }

  FormatDesc format(const std::string& sfx) const {
    if (const auto* f = cfg_.find_format(sfx); f && f->suffix == sfx) return f->fmt;
    for (const auto& b : builtin_formats()) {
      if (mnemonic_suffix(b) == sfx) return b;
    }
    fail("unknown format suffix '" + sfx + "'");
  }

  bool is_format(const std::string& sfx) const {
    if (const auto* f = cfg_.find_format(sfx); f && f->suffix == sfx) return true;
    for (const auto& b : builtin_formats()) {
      if (mnemonic_suffix(b) == sfx) return true;
    }
    return false;
  }

  Operand operand(const std::string& text, char kind) const {
    Operand o;
    if (kind == 's') {
      if (text.size() < 2 || text[0] != '@') fail("expected stream operand '@name', got '" + text + "'");
      o.kind = Operand::Kind::stream;
      o.stream = text.substr(1);
      return o;
    }
    const char want = kind == 'f' ? 'f' : 'x';
    if (text.size() < 2 || std::tolower(static_cast<unsigned char>(text[0])) != want) {
      fail(std::string("expected ") + (want == 'f' ? "FP" : "integer") + " register, got '" +
           text + "'");
    }
    unsigned idx = 0;
    const auto* b = text.data() + 1;
    const auto* e = text.data() + text.size();
    const auto [p, ec] = std::from_chars(b, e, idx);
    if (ec != std::errc() || p != e || idx > 31) fail("bad register '" + text + "'");
    o.kind = kind == 'f' ? Operand::Kind::freg : Operand::Kind::xreg;
    o.reg = idx;
    return o;
  }

  /// Parses operands against a pattern of 'f', 'x' and 's' characters.
  void operands(Instruction& in, std::vector<std::string> args, std::string_view pattern,
                bool allow_rm) const {
    if (args.size() == 1 && args[0].empty()) args.clear();
    if (allow_rm && args.size() == pattern.size() + 1) {
      try {
        in.rm = parse_rounding_mode(args.back());
      } catch (const ParseError&) {
        fail("bad rounding mode '" + args.back() + "'");
      }
      args.pop_back();
    }
    if (args.size() != pattern.size()) {
      fail(in.mnemonic + " expects " + std::to_string(pattern.size()) + " operands" +
           (allow_rm ? " and an optional rounding mode" : "") + ", got " +
           std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < args.size(); ++i) in.operands.push_back(operand(args[i], pattern[i]));
  }

 private:
  const FpuConfig& cfg_;
  int line_;
};

}  // namespace

std::optional<Instruction> decode(std::string_view text, const FpuConfig& cfg, int line_no) {
  const std::size_t comment = text.find(';');
  if (comment != std::string_view::npos) text = text.substr(0, comment);
  text = trim(text);
  if (text.empty()) return std::nullopt;
  LineParser lp(cfg, line_no);
  if (text.front() == '.') lp.fail("directive not allowed here: '" + std::string(text) + "'");

  std::size_t ws = 0;
  while (ws < text.size() && !std::isspace(static_cast<unsigned char>(text[ws]))) ++ws;
  Instruction in;
  in.line = line_no;
  in.mnemonic = lower(text.substr(0, ws));
  in.energy_key = in.mnemonic;
  const auto args = split(text.substr(ws), ',');
  const auto tok = split(in.mnemonic, '.');
  const std::string& base = tok[0];

  static const std::map<std::string, unsigned> kMem = {{"d", 64}, {"w", 32}, {"h", 16}, {"b", 8}};
  if (tok.size() == 1 && base.size() == 3 && (base.rfind("fl", 0) == 0 || base.rfind("fs", 0) == 0) &&
      kMem.count(base.substr(2))) {
    in.kind = base[1] == 'l' ? InstrKind::load : InstrKind::store;
    in.mem_bits = kMem.at(base.substr(2));
    lp.operands(in, args, "fs", false);
    return in;
  }

  if (const auto it = scalar_ops().find(base); it != scalar_ops().end()) {
    if (tok.size() != 2) lp.fail("expected " + base + ".<fmt>, got '" + in.mnemonic + "'");
    in.kind = InstrKind::arith;
    in.op = it->second;
    in.fmt = lp.format(tok[1]);
    const int n = arity(in.op);
    std::string pattern(is_comparison(in.op) ? "x" : "f");
    pattern.append(static_cast<std::size_t>(n), 'f');
    lp.operands(in, args, pattern, rounds(in.op));
    return in;
  }

  if (const auto it = vector_ops().find(base); it != vector_ops().end()) {
    std::size_t k = 1;
    if (tok.size() == 3 && tok[1] == "r") {
      in.replicate = true;
      k = 2;
    }
    if (tok.size() != k + 1) lp.fail("expected " + base + "[.r].<fmt>, got '" + in.mnemonic + "'");
    in.kind = InstrKind::vec_arith;
    in.op = it->second;
    in.fmt = lp.format(tok[k]);
    if (in.replicate && arity(in.op) < 2) lp.fail(base + " has no vector-scalar form");
    std::string pattern(is_comparison(in.op) ? "x" : "f");
    // vfmac accumulates into its destination: vd = vs1*vs2 + vd.
    pattern.append(static_cast<std::size_t>(in.op == ArithOp::fmadd ? 2 : arity(in.op)), 'f');
    lp.operands(in, args, pattern, rounds(in.op));
    return in;
  }

  if (base == "fclass") {
    if (tok.size() != 2) lp.fail("expected fclass.<fmt>");
    in.kind = InstrKind::fclass;
    in.fmt = lp.format(tok[1]);
    lp.operands(in, args, "xf", false);
    return in;
  }

  if (base == "fmv") {
    if (tok.size() != 3) lp.fail("expected fmv.x.<fmt> or fmv.<fmt>.x");
    if (tok[1] == "x") {
      in.kind = InstrKind::fmv_xf;
      in.fmt = lp.format(tok[2]);
      lp.operands(in, args, "xf", false);
    } else if (tok[2] == "x") {
      in.kind = InstrKind::fmv_fx;
      in.fmt = lp.format(tok[1]);
      lp.operands(in, args, "fx", false);
    } else {
      lp.fail("expected fmv.x.<fmt> or fmv.<fmt>.x");
    }
    return in;
  }

  if (base == "fcvt") {
    if (tok.size() != 3) lp.fail("expected fcvt.<dst>.<src>");
    const auto di = scalar_int(tok[1]);
    const auto si = scalar_int(tok[2]);
    if (di && si) lp.fail("fcvt needs an FP operand");
    if (di) {
      in.kind = InstrKind::cvt_fi;
      in.fmt = lp.format(tok[2]);
      in.int_width = di->width;
      in.is_signed = di->is_signed;
      lp.operands(in, args, "xf", true);
    } else if (si) {
      in.kind = InstrKind::cvt_if;
      in.fmt = lp.format(tok[1]);
      in.int_width = si->width;
      in.is_signed = si->is_signed;
      lp.operands(in, args, "fx", true);
    } else {
      in.kind = InstrKind::cvt_ff;
      in.fmt = lp.format(tok[1]);
      in.src = lp.format(tok[2]);
      if (tok[1] == tok[2]) lp.fail("fcvt between identical formats");
      lp.operands(in, args, "ff", true);
    }
    return in;
  }

  if (base == "vfcvt") {
    if (tok.size() != 3 && tok.size() != 4) lp.fail("expected vfcvt.<dst>.<src>[.lo|.hi]");
    const auto di = vector_int(tok[1]);
    const auto si = vector_int(tok[2]);
    if (di || si) {
      if (tok.size() != 3 || (di && si)) lp.fail("bad vector integer conversion '" + in.mnemonic + "'");
      in.kind = di ? InstrKind::vcvt_fi : InstrKind::vcvt_if;
      in.fmt = lp.format(di ? tok[2] : tok[1]);
      in.is_signed = di ? *di : *si;
      in.int_width = in.fmt->width();
      lp.operands(in, args, "ff", true);
      return in;
    }
    in.kind = InstrKind::vcvt_ff;
    in.fmt = lp.format(tok[1]);
    in.src = lp.format(tok[2]);
    if (tok[1] == tok[2]) lp.fail("vfcvt between identical formats");
    const bool resize = in.fmt->width() != in.src->width();
    if (tok.size() == 4) {
      if (!resize) lp.fail("equal-width vfcvt takes no .lo/.hi suffix");
      if (tok[3] == "lo") {
        in.half = Half::low;
      } else if (tok[3] == "hi") {
        in.half = Half::high;
      } else {
        lp.fail("expected .lo or .hi, got '." + tok[3] + "'");
      }
      in.energy_key = tok[0] + "." + tok[1] + "." + tok[2];
    } else if (resize) {
      lp.fail("width-changing vfcvt needs a .lo or .hi suffix");
    }
    lp.operands(in, args, "ff", true);
    return in;
  }

  if (base.size() == 6 && base.rfind("vfcpk", 0) == 0 && base[5] >= 'a' && base[5] <= 'd') {
    if (tok.size() != 3) lp.fail("expected " + base + ".<dst>.<src>");
    in.kind = InstrKind::cpk;
    in.pair = static_cast<unsigned>(base[5] - 'a');
    in.fmt = lp.format(tok[1]);
    in.src = lp.format(tok[2]);
    lp.operands(in, args, "fff", true);
    return in;
  }

  if (base == "fmacex" || base == "fmulex") {
    if (tok.size() != 3) lp.fail("expected " + base + ".<dst>.<src>");
    in.kind = base == "fmacex" ? InstrKind::fmacex : InstrKind::fmulex;
    in.fmt = lp.format(tok[1]);
    in.src = lp.format(tok[2]);
    lp.operands(in, args, "fff", true);
    return in;
  }

  lp.fail("unknown mnemonic '" + in.mnemonic + "'");
}

Program parse_program(std::string_view text, const FpuConfig& cfg) {
  Program p;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    ++line_no;
    std::string_view body = line.substr(0, line.find(';'));
    body = trim(body);
    if (!body.empty() && body.front() == '.') {
      const auto parts = split(body, ' ');
      long n = 0;
      const std::string& count = parts.size() == 2 ? parts[1] : std::string();
      const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
      if (parts.size() != 2 || parts[0] != ".loop" || ec != std::errc() ||
          ptr != count.data() + count.size() || n < 1) {
        throw ParseError("expected '.loop N' with N >= 1", line_no);
      }
      if (p.loop_count) throw ParseError("duplicate .loop directive", line_no);
      p.loop_count = n;
    } else if (auto in = decode(line, cfg, line_no)) {
      p.body.push_back(std::move(*in));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return p;
}

FpuOp fpu_op_of(const Instruction& in, const FpuConfig& cfg) {
  FpuOp op;
  op.mnemonic = in.mnemonic;
  const unsigned flen = cfg.flen;
  auto block_of = [](ArithOp a) {
    switch (a) {
      case ArithOp::div:
      case ArithOp::sqrt:
        return Block::divsqrt;
      case ArithOp::add:
      case ArithOp::sub:
      case ArithOp::mul:
      case ArithOp::fmadd:
      case ArithOp::fmsub:
      case ArithOp::fnmadd:
      case ArithOp::fnmsub:
        return Block::addmul;
      default:
        return Block::comp;
    }
  };
  auto need_vector = [&](const FormatDesc& f) {
    if (!cfg.simd_enabled) {
      throw UnsupportedOperation(in.mnemonic + ": SIMD is disabled in '" + cfg.name + "'");
    }
    return vector_length(f, flen);
  };
  switch (in.kind) {
    case InstrKind::arith:
      op.block = block_of(in.op);
      op.formats = {in.fmt->name()};
      break;
    case InstrKind::vec_arith:
      op.block = block_of(in.op);
      op.formats = {in.fmt->name()};
      op.elements = need_vector(*in.fmt);
      break;
    case InstrKind::fclass:
    case InstrKind::fmv_xf:
    case InstrKind::fmv_fx:
      op.block = Block::comp;
      op.formats = {in.fmt->name()};
      break;
    case InstrKind::cvt_fi:
    case InstrKind::cvt_if:
      if (in.int_width > cfg.xlen) {
        throw UnsupportedOperation(in.mnemonic + ": " + std::to_string(in.int_width) +
                                   "-bit integers exceed XLEN=" + std::to_string(cfg.xlen));
      }
      op.block = Block::conv;
      op.formats = {in.fmt->name()};
      break;
    case InstrKind::cvt_ff:
      op.block = Block::conv;
      op.formats = {in.src->name(), in.fmt->name()};
      break;
    case InstrKind::vcvt_fi:
    case InstrKind::vcvt_if:
      op.block = Block::conv;
      op.formats = {in.fmt->name()};
      op.elements = need_vector(*in.fmt);
      break;
    case InstrKind::vcvt_ff: {
      op.block = Block::conv;
      op.formats = {in.src->name(), in.fmt->name()};
      need_vector(in.src->width() < in.fmt->width() ? *in.src : *in.fmt);
      if (in.fmt->width() > flen || in.src->width() > flen) {
        throw UnsupportedOperation(in.mnemonic + ": format wider than FLEN");
      }
      op.elements = in.fmt->width() >= in.src->width() ? flen / in.fmt->width()
                                                       : flen / in.src->width();
      break;
    }
    case InstrKind::cpk:
      if (!cfg.simd_enabled) {
        throw UnsupportedOperation(in.mnemonic + ": SIMD is disabled in '" + cfg.name + "'");
      }
      op.block = Block::conv;
      op.formats = {in.src->name(), in.fmt->name()};
      op.elements = 2;
      break;
    case InstrKind::fmacex:
    case InstrKind::fmulex:
      op.block = Block::addmul;
      op.formats = {in.fmt->name(), in.src->name()};
      if (in.fmt->width() < in.src->width()) {
        throw UnsupportedOperation(in.mnemonic + ": destination narrower than source");
      }
      break;
    case InstrKind::load:
    case InstrKind::store:
      throw UsageError(in.mnemonic + " is not an FPU instruction");
  }
  return op;
}

int latency_of(const FpuConfig& cfg, const Instruction& in) {
  if (!in.is_fpu()) return in.kind == InstrKind::load ? cfg.load_latency : 1;
  return latency_of(cfg, fpu_op_of(in, cfg));
}

Machine::Machine(FpuConfig cfg, bool keep_trace) : cfg_(std::move(cfg)), pipeline_(keep_trace) {
  cfg_.validate();
}

FpRegister Machine::freg(unsigned i) const {
  if (cfg_.fregs_in_xregs) return FpRegister(xreg(i) & mask64(cfg_.flen), cfg_.flen);
  return FpRegister(state_.fregs.at(i) & mask64(cfg_.flen), cfg_.flen);
}

void Machine::set_freg(unsigned i, const FpRegister& r) {
  if (r.flen() != cfg_.flen) throw UsageError("register FLEN does not match configuration");
  if (cfg_.fregs_in_xregs) {
    set_xreg(i, r.bits());
  } else {
    state_.fregs.at(i) = r.bits();
  }
}

std::uint64_t Machine::xreg(unsigned i) const { return i == 0 ? 0 : state_.xregs.at(i); }

void Machine::set_xreg(unsigned i, std::uint64_t v) {
  if (i != 0) state_.xregs.at(i) = v & mask64(cfg_.xlen);
}

RegId Machine::reg_id(const Operand& o) const {
  if (o.kind == Operand::Kind::xreg || cfg_.fregs_in_xregs) return 32 + static_cast<RegId>(o.reg);
  return static_cast<RegId>(o.reg);
}

const Machine::Resolved& Machine::resolve(const Instruction& in) {
  if (const auto it = cache_.find(in.mnemonic); it != cache_.end()) return it->second;
  Resolved r{latency_of(cfg_, in), 0.0};
  if (in.is_fpu()) r.energy = energy_of(cfg_, in.energy_key);
  return cache_.emplace(in.mnemonic, r).first->second;
}

void Machine::compute(const Instruction& in) {
  const unsigned flen = cfg_.flen;
  const bool check = cfg_.check_boxing;
  auto scalar = [&](const FormatDesc& f, std::size_t k) {
    return read_scalar(f, freg(in.operands[k].reg), check);
  };
  auto put_scalar = [&](const FormatDesc& f, const BitsValue& v) {
    set_freg(in.operands[0].reg, write_scalar(flen, f, v));
  };
  auto vreg = [&](std::size_t k) { return freg(in.operands[k].reg); };
  auto need_xlen = [&](unsigned w) {
    if (w > cfg_.xlen) {
      throw UnsupportedOperation(in.mnemonic + ": " + std::to_string(w) +
                                 "-bit integers exceed XLEN=" + std::to_string(cfg_.xlen));
    }
  };
  StatusFlags flags;
  switch (in.kind) {
    case InstrKind::arith: {
      const FormatDesc& f = *in.fmt;
      const int n = arity(in.op);
      std::array<BitsValue, 3> ops;
      for (int k = 0; k < n; ++k) ops[k] = scalar(f, static_cast<std::size_t>(k) + 1);
      const FpResult r = evaluate(in.op, f, in.rm, std::span<const BitsValue>(ops.data(), n));
      flags = r.flags;
      if (is_comparison(in.op)) {
        set_xreg(in.operands[0].reg, r.value.to_u64());
      } else {
        put_scalar(f, r.value);
      }
      break;
    }
    case InstrKind::vec_arith: {
      const FormatDesc& f = *in.fmt;
      VecResult r;
      const FpRegister a = vreg(1);
      if (in.op == ArithOp::fmadd) {
        const FpRegister acc = vreg(0);
        r = in.replicate ? vec_scalar(in.op, f, in.rm, a, vreg(2), acc)
                         : vec_map3(in.op, f, in.rm, a, vreg(2), acc);
      } else if (arity(in.op) == 1) {
        const std::array<FpRegister, 1> regs{a};
        r = vec_map(in.op, f, in.rm, regs);
      } else {
        r = in.replicate ? vec_scalar(in.op, f, in.rm, a, vreg(2))
                         : vec_map2(in.op, f, in.rm, a, vreg(2));
      }
      flags = r.flags;
      if (is_comparison(in.op)) {
        set_xreg(in.operands[0].reg, r.value.bits());
      } else {
        set_freg(in.operands[0].reg, r.value);
      }
      break;
    }
    case InstrKind::fclass:
      set_xreg(in.operands[0].reg, classify_bits(*in.fmt, scalar(*in.fmt, 1)));
      break;
    case InstrKind::cvt_ff: {
      const FpResult r = cvt_fp_fp(*in.src, *in.fmt, in.rm, scalar(*in.src, 1));
      flags = r.flags;
      put_scalar(*in.fmt, r.value);
      break;
    }
    case InstrKind::cvt_fi: {
      need_xlen(in.int_width);
      const FpResult r = cvt_fp_int(*in.fmt, in.int_width, in.is_signed, in.rm, scalar(*in.fmt, 1));
      flags = r.flags;
      set_xreg(in.operands[0].reg, sign_extend(r.value.to_u64(), in.int_width, cfg_.xlen));
      break;
    }
    case InstrKind::cvt_if: {
      need_xlen(in.int_width);
      const BitsValue v = BitsValue::from_u64(xreg(in.operands[1].reg) & mask64(in.int_width),
                                              in.int_width);
      const FpResult r = cvt_int_fp(in.int_width, in.is_signed, *in.fmt, in.rm, v);
      flags = r.flags;
      put_scalar(*in.fmt, r.value);
      break;
    }
    case InstrKind::vcvt_ff: {
      const VecResult r = vec_cvt_half(*in.src, *in.fmt, in.rm, vreg(1), in.half.value_or(Half::low));
      flags = r.flags;
      set_freg(in.operands[0].reg, r.value);
      break;
    }
    case InstrKind::vcvt_fi: {
      const VecResult r = vec_cvt_to_int(*in.fmt, in.is_signed, in.rm, vreg(1));
      flags = r.flags;
      set_freg(in.operands[0].reg, r.value);
      break;
    }
    case InstrKind::vcvt_if: {
      const VecResult r = vec_cvt_from_int(*in.fmt, in.is_signed, in.rm, vreg(1));
      flags = r.flags;
      set_freg(in.operands[0].reg, r.value);
      break;
    }
    case InstrKind::cpk: {
      const VecResult r = cast_and_pack(*in.src, *in.fmt, in.rm, scalar(*in.src, 1),
                                        scalar(*in.src, 2), vreg(0), in.pair);
      flags = r.flags;
      set_freg(in.operands[0].reg, r.value);
      break;
    }
    case InstrKind::fmacex: {
      const FpResult r = fma_multi(*in.src, *in.fmt, in.rm, scalar(*in.src, 1), scalar(*in.src, 2),
                                   scalar(*in.fmt, 0));
      flags = r.flags;
      put_scalar(*in.fmt, r.value);
      break;
    }
    case InstrKind::fmulex: {
      const FpResult r = mul_multi(*in.src, *in.fmt, in.rm, scalar(*in.src, 1), scalar(*in.src, 2));
      flags = r.flags;
      put_scalar(*in.fmt, r.value);
      break;
    }
    case InstrKind::fmv_xf: {
      const unsigned w = in.fmt->width();
      set_xreg(in.operands[0].reg, sign_extend(vreg(1).bits(), w, cfg_.xlen));
      break;
    }
    case InstrKind::fmv_fx: {
      const unsigned w = in.fmt->width();
      put_scalar(*in.fmt, BitsValue::from_u64(xreg(in.operands[1].reg) & mask64(w), w));
      break;
    }
    case InstrKind::load: {
      if (in.mem_bits > flen) {
        throw UnsupportedOperation(in.mnemonic + ": " + std::to_string(in.mem_bits) +
                                   "-bit load exceeds FLEN=" + std::to_string(flen));
      }
      const auto it = state_.streams.find(in.operands[1].stream);
      if (it == state_.streams.end()) throw UsageError("unknown stream @" + in.operands[1].stream);
      Stream& s = it->second;
      const std::size_t n = in.mem_bits / 8;
      if (s.cursor + n > s.bytes.size()) {
        throw UsageError(in.mnemonic + ": stream @" + in.operands[1].stream + " out of bounds at byte " +
                         std::to_string(s.cursor));
      }
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(s.bytes[s.cursor + i]) << (8 * i);
      s.cursor += n;
      const std::uint64_t high = mask64(flen) & ~mask64(in.mem_bits);
      set_freg(in.operands[0].reg, FpRegister(v | high, flen));
      break;
    }
    case InstrKind::store: {
      if (in.mem_bits > flen) {
        throw UnsupportedOperation(in.mnemonic + ": " + std::to_string(in.mem_bits) +
                                   "-bit store exceeds FLEN=" + std::to_string(flen));
      }
      Stream& s = state_.streams[in.operands[1].stream];
      const std::size_t n = in.mem_bits / 8;
      if (s.bytes.size() < s.cursor + n) s.bytes.resize(s.cursor + n);
      const std::uint64_t v = vreg(0).bits();
      for (std::size_t i = 0; i < n; ++i) s.bytes[s.cursor + i] = static_cast<std::uint8_t>(v >> (8 * i));
      s.cursor += n;
      break;
    }
  }
  state_.fflags |= flags;
}

void Machine::execute_resolved(const Instruction& in, const Resolved& r, std::uint32_t tag) {
  compute(in);
  IssueRequest req;
  req.tag = tag;
  req.fpu = in.is_fpu();
  req.latency = r.latency;
  if (req.fpu) {
    const FpuOp op = fpu_op_of(in, cfg_);
    req.block = op.block;
    req.blocking = op.block == Block::divsqrt;
  }
  auto add_src = [&](const Operand& o) {
    if (o.kind == Operand::Kind::stream) return;
    const RegId id = reg_id(o);
    if (id != 32) req.srcs[req.n_srcs++] = id;
  };
  const bool dst_is_src = in.kind == InstrKind::store;
  const bool dst_also_read = in.kind == InstrKind::cpk || in.kind == InstrKind::fmacex ||
                             (in.kind == InstrKind::vec_arith && in.op == ArithOp::fmadd);
  for (std::size_t k = 1; k < in.operands.size(); ++k) add_src(in.operands[k]);
  if (dst_is_src || dst_also_read) add_src(in.operands[0]);
  if (!dst_is_src) {
    const RegId id = reg_id(in.operands[0]);
    if (id != 32) req.dsts[req.n_dsts++] = id;
  }
  pipeline_.issue(req);
  if (req.fpu) energy_.add(in.energy_key, r.energy);
}

void Machine::execute(const Instruction& in) {
  const Resolved& r = resolve(in);
  execute_resolved(in, r, static_cast<std::uint32_t>(in.line));
}

RunReport Machine::run_program(const Program& p, std::optional<long> loop_count) {
  const long n = loop_count.value_or(p.loop_count.value_or(1));
  if (n < 1) throw UsageError("loop count must be >= 1");
  std::vector<Resolved> resolved;
  resolved.reserve(p.body.size());
  for (const auto& in : p.body) resolved.push_back(resolve(in));
  reset_reports();
  for (long it = 0; it < n; ++it) {
    for (std::size_t i = 0; i < p.body.size(); ++i) {
      execute_resolved(p.body[i], resolved[i], static_cast<std::uint32_t>(i));
    }
  }
  return RunReport{pipeline_.report(), energy_};
}

void Machine::reset_reports() {
  pipeline_.reset();
  energy_ = EnergyReport{};
}

}  // namespace tpfp
