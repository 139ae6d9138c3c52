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

#include "tpfp/fpumodel.hpp"

#include <algorithm>
#include <set>

#include "tpfp/errors.hpp"

namespace tpfp {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::pair<std::string_view, E>, N>& table,
             const char* what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  throw ParseError(std::string("unknown ") + what + " '" + std::string(text) + "'", 0);
}

constexpr std::array<std::pair<std::string_view, Block>, 4> kBlockNames{{
    {"addmul", Block::addmul},
    {"divsqrt", Block::divsqrt},
    {"comp", Block::comp},
    {"conv", Block::conv},
}};

constexpr std::array<std::pair<std::string_view, Impl>, 3> kImplNames{{
    {"parallel", Impl::parallel},
    {"merged", Impl::merged},
    {"disabled", Impl::disabled},
}};

constexpr std::array<std::pair<std::string_view, LaneCount>, 2> kLaneCountNames{{
    {"usable", LaneCount::usable},
    {"dedicated", LaneCount::dedicated},
}};

const BlockConfig& empty_block() {
  static const BlockConfig b;
  return b;
}

}  // namespace

std::string_view to_string(Block b) { return kBlockNames[static_cast<int>(b)].first; }
Block parse_block(std::string_view text) { return parse_enum(text, kBlockNames, "block"); }
std::string_view to_string(Impl i) { return kImplNames[static_cast<int>(i)].first; }
Impl parse_impl(std::string_view text) { return parse_enum(text, kImplNames, "implementation"); }
std::string_view to_string(LaneCount c) { return kLaneCountNames[static_cast<int>(c)].first; }
LaneCount parse_lane_count(std::string_view text) {
  return parse_enum(text, kLaneCountNames, "lane count");
}

const ConfigFormat* FpuConfig::find_format(std::string_view key) const {
  for (const auto& f : formats) {
    if (f.fmt.name() == key || f.suffix == key) return &f;
  }
  return nullptr;
}

const ConfigFormat& FpuConfig::format(std::string_view key) const {
  if (const auto* f = find_format(key)) return *f;
  throw LookupError("format '" + std::string(key) + "' is not part of configuration '" + name +
                    "'");
}

const BlockConfig& FpuConfig::block(Block b) const {
  const auto it = blocks.find(b);
  return it == blocks.end() ? empty_block() : it->second;
}

void FpuConfig::validate() const {
  auto fail = [this](const std::string& msg) { throw UsageError("config '" + name + "': " + msg); };
  if (w_fpu < 8 || w_fpu > 512) fail("w_fpu must be within 8..512");
  if (flen < 8 || flen > 64) fail("flen must be within 8..64");
  if (xlen != 32 && xlen != 64) fail("xlen must be 32 or 64");
  if (fregs_in_xregs && flen != xlen) fail("fregs_in_xregs requires flen == xlen");
  if (formats.empty()) fail("no formats");
  std::set<std::string> names, suffixes;
  for (const auto& f : formats) {
    if (f.fmt.width() > flen) fail(f.fmt.name() + " is wider than flen");
    if (f.suffix.empty()) fail(f.fmt.name() + " has no mnemonic suffix");
    if (!names.insert(f.fmt.name()).second) fail("duplicate format " + f.fmt.name());
    if (!suffixes.insert(f.suffix).second) fail("duplicate suffix " + f.suffix);
  }
  for (const auto& [b, bc] : blocks) {
    for (const auto& [fname, s] : bc.formats) {
      if (!find_format(fname)) fail(std::string(to_string(b)) + " names unknown format " + fname);
      if (s.impl != Impl::disabled && b != Block::divsqrt && s.cycles < 1) {
        fail(std::string(to_string(b)) + "/" + fname + " needs cycles >= 1");
      }
    }
    for (unsigned w : bc.merged_lanes) {
      if (w == 0 || w > w_fpu) fail("merged lane width out of range");
    }
  }
  if (divider.pre_post_cycles < 0 || divider.bits_per_cycle < 1) fail("bad divider settings");
  if (load_latency < 1) fail("load_latency must be >= 1");
  for (const auto& [k, v] : energy_pj) {
    if (!(v >= 0.0)) fail("energy for " + k + " must be non-negative");
  }
}

std::vector<unsigned> merged_lane_widths(unsigned w_fpu, std::span<const unsigned> widths) {
  if (widths.empty()) return {};
  const unsigned narrowest = *std::min_element(widths.begin(), widths.end());
  const unsigned k = w_fpu / narrowest;
  std::vector<unsigned> lanes;
  for (unsigned i = 1; i <= k; ++i) {
    unsigned best = 0;
    for (unsigned w : widths) {
      if (w * i <= w_fpu) best = std::max(best, w);
    }
    lanes.push_back(best);
  }
  return lanes;
}

LaneGeometry lane_geometry(const FpuConfig& cfg, Block b) {
  LaneGeometry g;
  g.block = b;
  const BlockConfig& bc = cfg.block(b);
  Slice merged{Impl::merged, {}, {}, 0};
  std::vector<unsigned> merged_widths;
  for (const auto& f : cfg.formats) {
    const auto it = bc.formats.find(f.fmt.name());
    if (it == bc.formats.end() || it->second.impl == Impl::disabled) continue;
    const int cycles = b == Block::divsqrt ? divider_latency(cfg, f.fmt) : it->second.cycles;
    if (it->second.impl == Impl::parallel) {
      const unsigned k = std::max(1u, cfg.w_fpu / f.fmt.width());
      g.slices.push_back(
          Slice{Impl::parallel, {f.fmt.name()}, std::vector<unsigned>(k, f.fmt.width()), cycles});
    } else {
      merged.formats.push_back(f.fmt.name());
      merged_widths.push_back(f.fmt.width());
      merged.cycles = std::max(merged.cycles, cycles);
    }
  }
  if (!merged.formats.empty()) {
    merged.lane_widths =
        bc.merged_lanes.empty() ? merged_lane_widths(cfg.w_fpu, merged_widths) : bc.merged_lanes;
    g.slices.push_back(std::move(merged));
  }
  return g;
}

const Slice* LaneGeometry::slice_of(std::string_view fmt_name) const {
  for (const auto& s : slices) {
    if (std::find(s.formats.begin(), s.formats.end(), fmt_name) != s.formats.end()) return &s;
  }
  return nullptr;
}

unsigned LaneGeometry::usable_lanes(std::string_view fmt_name, unsigned width) const {
  const Slice* s = slice_of(fmt_name);
  if (!s) return 0;
  return static_cast<unsigned>(
      std::count_if(s->lane_widths.begin(), s->lane_widths.end(),
                    [width](unsigned w) { return w >= width; }));
}

unsigned LaneGeometry::dedicated_lanes(const FpuConfig& cfg, std::string_view fmt_name) const {
  const Slice* s = slice_of(fmt_name);
  if (!s) return 0;
  const unsigned width = cfg.format(fmt_name).fmt.width();
  for (const auto& member : s->formats) {
    if (cfg.format(member).fmt.width() != width) continue;
    if (member != fmt_name) return 0;
    break;
  }
  return static_cast<unsigned>(std::count(s->lane_widths.begin(), s->lane_widths.end(), width));
}

int divider_latency(const FpuConfig& cfg, const FormatDesc& fmt) {
  const int bpc = cfg.divider.bits_per_cycle;
  return cfg.divider.pre_post_cycles + (fmt.precision() + bpc - 1) / bpc;
}

std::optional<TableCell> table_cell(const FpuConfig& cfg, Block b, std::string_view fmt_name) {
  const ConfigFormat& f = cfg.format(fmt_name);
  const auto& bc = cfg.block(b);
  const auto it = bc.formats.find(f.fmt.name());
  if (it == bc.formats.end() || it->second.impl == Impl::disabled) return std::nullopt;
  const LaneGeometry g = lane_geometry(cfg, b);
  const Slice* s = g.slice_of(f.fmt.name());
  const int cycles = b == Block::divsqrt ? divider_latency(cfg, f.fmt) : s->cycles;
  const unsigned lanes = cfg.table_lanes == LaneCount::usable
                             ? g.usable_lanes(f.fmt.name(), f.fmt.width())
                             : g.dedicated_lanes(cfg, f.fmt.name());
  return TableCell{it->second.impl, cycles, lanes};
}

int latency_of(const FpuConfig& cfg, const FpuOp& op) {
  if (op.formats.empty()) throw UsageError(op.mnemonic + ": no formats");
  const BlockConfig& bc = cfg.block(op.block);
  const LaneGeometry g = lane_geometry(cfg, op.block);
  const Slice* slice = nullptr;
  unsigned widest = 0;
  const FormatDesc* divfmt = nullptr;
  for (const auto& name : op.formats) {
    const ConfigFormat* f = cfg.find_format(name);
    if (!f) {
      throw UnsupportedOperation(op.mnemonic + ": format " + name + " is not enabled in '" +
                                 cfg.name + "'");
    }
    const auto it = bc.formats.find(f->fmt.name());
    if (it == bc.formats.end() || it->second.impl == Impl::disabled) {
      throw UnsupportedOperation(op.mnemonic + ": " + std::string(to_string(op.block)) +
                                 " block is disabled for " + f->fmt.name() + " in '" + cfg.name +
                                 "'");
    }
    const Slice* s = g.slice_of(f->fmt.name());
    if (slice && s != slice) {
      throw UnsupportedOperation(op.mnemonic + ": no " + std::string(to_string(op.block)) +
                                 " slice handles " + op.formats.front() + " and " + name +
                                 " together in '" + cfg.name + "'");
    }
    slice = s;
    if (f->fmt.width() > widest) {
      widest = f->fmt.width();
      divfmt = &f->fmt;
    }
  }
  const unsigned lanes = g.usable_lanes(op.formats.front(), widest);
  if (lanes < op.elements) {
    throw UnsupportedOperation(op.mnemonic + ": needs " + std::to_string(op.elements) +
                               " lanes of at least " + std::to_string(widest) + " bits, " +
                               std::string(to_string(op.block)) + " slice has " +
                               std::to_string(lanes));
  }
  return op.block == Block::divsqrt ? divider_latency(cfg, *divfmt) : slice->cycles;
}

long& PipelineModel::ready(RegId r) { return ready_[r]; }

void PipelineModel::settle(long through) {
  while (!in_flight_.empty()) {
    long min_done = kPending;
    for (const auto& f : in_flight_) min_done = std::min(min_done, f.done);
    const long c = std::max(arb_cycle_, min_done);
    if (c > through) return;
    std::size_t winner = in_flight_.size();
    int winner_block = 0;
    for (int k = 0; k < 4 && winner == in_flight_.size(); ++k) {
      const int blk = (rr_ + k) % 4;
      for (std::size_t i = 0; i < in_flight_.size(); ++i) {
        const auto& f = in_flight_[i];
        if (f.done > c || static_cast<int>(f.block) != blk) continue;
        if (winner == in_flight_.size() || f.seq < in_flight_[winner].seq) winner = i;
      }
      winner_block = blk;
    }
    const InFlight w = in_flight_[winner];
    in_flight_.erase(in_flight_.begin() + static_cast<long>(winner));
    for (int d = 0; d < w.n_dsts; ++d) ready(w.dsts[d]) = c;
    if (w.blocking) blocking_free_ = c;
    if (w.trace_index != SIZE_MAX) trace_[w.trace_index].retire = c;
    last_retire_ = std::max(last_retire_, c);
    rr_ = (winner_block + 1) % 4;
    arb_cycle_ = c + 1;
  }
}

long PipelineModel::issue(const IssueRequest& req) {
  long t = next_issue_;
  for (;;) {
    settle(t);
    bool ok = !req.blocking || blocking_free_ <= t;
    for (int i = 0; ok && i < req.n_srcs; ++i) ok = ready(req.srcs[i]) <= t;
    for (int i = 0; ok && i < req.n_dsts; ++i) ok = ready(req.dsts[i]) <= t;
    if (ok) break;
    ++t;
  }
  next_issue_ = t + 1;
  ++instructions_;
  std::size_t index = SIZE_MAX;
  if (keep_trace_) {
    index = trace_.size();
    trace_.push_back(InstrTiming{req.tag, t, kPending});
  }
  if (!req.fpu) {
    const long done = t + req.latency;
    for (int d = 0; d < req.n_dsts; ++d) ready(req.dsts[d]) = done;
    if (keep_trace_) trace_[index].retire = done;
    last_retire_ = std::max(last_retire_, done);
    return t;
  }
  for (int d = 0; d < req.n_dsts; ++d) ready(req.dsts[d]) = kPending;
  if (req.blocking) blocking_free_ = kPending;
  in_flight_.push_back(InFlight{index, seq_++, req.block, t + req.latency, req.blocking, req.dsts,
                                req.n_dsts});
  return t;
}

TimingReport PipelineModel::report() {
  settle(kPending - 1);
  TimingReport r;
  r.total_cycles = std::max(last_retire_, next_issue_);
  r.instructions = instructions_;
  r.trace = trace_;
  return r;
}

void PipelineModel::reset() { *this = PipelineModel(keep_trace_); }

double energy_of(const FpuConfig& cfg, std::string_view key) {
  const auto it = cfg.energy_pj.find(std::string(key));
  if (it == cfg.energy_pj.end()) {
    throw LookupError("no energy entry for '" + std::string(key) + "' in configuration '" +
                      cfg.name + "'");
  }
  return it->second;
}

void EnergyReport::add(const std::string& key, double pj) {
  total_pj += pj;
  auto& line = by_key[key];
  ++line.count;
  line.pj += pj;
}

std::vector<EfficiencyRow> efficiency_report(const FpuConfig& cfg, double freq_hz) {
  std::vector<EfficiencyRow> rows;
  auto add_row = [&](const ConfigFormat& f, bool vector) {
    const unsigned lanes = vector ? cfg.flen / f.fmt.width() : 1;
    const std::string mnemonic = (vector ? "vfmac." : "fmadd.") + f.suffix;
    int latency = 0;
    try {
      latency = latency_of(cfg, FpuOp{mnemonic, Block::addmul, {f.fmt.name()}, lanes});
    } catch (const UnsupportedOperation&) {
      return;
    }
    EfficiencyRow row;
    row.format = f.fmt.name();
    row.vector = vector;
    row.latency = latency;
    row.lanes = lanes;
    row.gflops = lanes * 2.0 * freq_hz / 1e9;
    row.pj_per_flop = energy_of(cfg, mnemonic) / (2.0 * lanes);
    row.gflops_per_watt = 1000.0 / row.pj_per_flop;
    rows.push_back(row);
  };
  for (const auto& f : cfg.formats) add_row(f, false);
  if (cfg.simd_enabled) {
    for (const auto& f : cfg.formats) {
      if (cfg.flen / f.fmt.width() >= 2) add_row(f, true);
    }
  }
  for (auto& r : rows) r.relative = r.gflops_per_watt / rows.front().gflops_per_watt;
  return rows;
}

}  // namespace tpfp
