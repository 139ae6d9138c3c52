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

#ifndef TPFP_FPUMODEL_HPP
#define TPFP_FPUMODEL_HPP

// Architecture model of the unit: operation-group blocks made of parallel
// or merged slices, lane geometry, latencies, in-order issue timing and a
// per-instruction energy lookup.

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpfp/formats.hpp"

namespace tpfp {

enum class Block { addmul, divsqrt, comp, conv };
inline constexpr Block kAllBlocks[] = {Block::addmul, Block::divsqrt, Block::comp, Block::conv};
std::string_view to_string(Block b);
Block parse_block(std::string_view text);

enum class Impl { parallel, merged, disabled };
std::string_view to_string(Impl i);
Impl parse_impl(std::string_view text);

/// How a table cell counts lanes of a merged slice. `usable` counts lanes
/// wide enough for the format. `dedicated` counts lanes exactly as wide as
/// the format and credits them to the first listed format of that width.
enum class LaneCount { usable, dedicated };
std::string_view to_string(LaneCount c);
LaneCount parse_lane_count(std::string_view text);

struct ConfigFormat {
  FormatDesc fmt;
  std::string suffix;  ///< mnemonic suffix, e.g. "h"

  friend bool operator==(const ConfigFormat&, const ConfigFormat&) = default;
};

struct SliceSetting {
  Impl impl = Impl::disabled;
  int cycles = 0;  ///< pipeline depth; unused for the iterative divider

  friend bool operator==(const SliceSetting&, const SliceSetting&) = default;
};

struct BlockConfig {
  std::map<std::string, SliceSetting> formats;  ///< keyed by format name
  /// Custom lane widths for the merged slice; empty selects the generic
  /// merged layout.
  std::vector<unsigned> merged_lanes;

  friend bool operator==(const BlockConfig&, const BlockConfig&) = default;
};

struct DividerConfig {
  int pre_post_cycles = 3;
  int bits_per_cycle = 3;

  friend bool operator==(const DividerConfig&, const DividerConfig&) = default;
};

struct FpuConfig {
  std::string name;
  unsigned w_fpu = 64;
  unsigned flen = 64;
  unsigned xlen = 64;
  std::vector<ConfigFormat> formats;
  std::map<Block, BlockConfig> blocks;
  bool simd_enabled = true;
  /// FP data lives in the integer register file (f<i> aliases x<i>).
  bool fregs_in_xregs = false;
  bool check_boxing = false;
  DividerConfig divider;
  int load_latency = 1;
  LaneCount table_lanes = LaneCount::usable;
  double frequency_hz = 0.0;
  std::map<std::string, double> energy_pj;
  std::vector<std::string> energy_notes;

  /// Looks up an enabled format by name or suffix. Throws LookupError.
  const ConfigFormat& format(std::string_view name_or_suffix) const;
  const ConfigFormat* find_format(std::string_view name_or_suffix) const;
  const BlockConfig& block(Block b) const;

  /// Throws UsageError on inconsistent settings.
  void validate() const;

  friend bool operator==(const FpuConfig&, const FpuConfig&) = default;
};

/// Generic merged layout: floor(w_fpu / min width) lanes; lane i (1-based)
/// is as wide as the widest member format no wider than w_fpu / i.
std::vector<unsigned> merged_lane_widths(unsigned w_fpu, std::span<const unsigned> widths);

struct Slice {
  Impl impl = Impl::parallel;
  std::vector<std::string> formats;  ///< member formats in config order
  std::vector<unsigned> lane_widths;
  int cycles = 0;
};

struct LaneGeometry {
  Block block = Block::addmul;
  std::vector<Slice> slices;

  const Slice* slice_of(std::string_view fmt_name) const;
  /// Lanes of the format's slice that can hold `width`-bit operands.
  unsigned usable_lanes(std::string_view fmt_name, unsigned width) const;
  unsigned dedicated_lanes(const FpuConfig& cfg, std::string_view fmt_name) const;
};

LaneGeometry lane_geometry(const FpuConfig& cfg, Block b);

/// Cycles of one division or square root: pre/post cycles plus
/// ceil(precision / bits_per_cycle), hidden bit included.
int divider_latency(const FpuConfig& cfg, const FormatDesc& fmt);

/// One (cycles, lanes) entry of a configuration table; nullopt when the
/// format is disabled in the block.
struct TableCell {
  Impl impl;
  int cycles;
  unsigned lanes;
};
std::optional<TableCell> table_cell(const FpuConfig& cfg, Block b, std::string_view fmt_name);

/// Resource usage of one FPU instruction.
struct FpuOp {
  std::string mnemonic;
  Block block = Block::addmul;
  std::vector<std::string> formats;  ///< one or two format names
  unsigned elements = 1;             ///< lanes occupied
};

/// Pipeline depth, or the divider latency for DIVSQRT. Throws
/// UnsupportedOperation for disabled formats, formats without a shared
/// slice, or too few lanes.
int latency_of(const FpuConfig& cfg, const FpuOp& op);

/// A register identifier in the scoreboard namespace.
using RegId = int;

struct IssueRequest {
  std::uint32_t tag = 0;  ///< caller-defined instruction identifier
  bool fpu = true;        ///< false for loads and stores
  Block block = Block::addmul;
  int latency = 1;
  bool blocking = false;
  std::array<RegId, 4> srcs{};
  int n_srcs = 0;
  std::array<RegId, 2> dsts{};
  int n_dsts = 0;
};

struct InstrTiming {
  std::uint32_t tag;
  long issue;
  long retire;
};

struct TimingReport {
  long total_cycles = 0;
  long instructions = 0;
  std::vector<InstrTiming> trace;
};

/// In-order single-issue timing. One instruction issues per cycle. Issue
/// waits until sources and destinations have no pending write and, for a
/// blocking op, until the previous blocking op retired. A consumer may
/// issue in the cycle its producer retires. At most one FPU result retires
/// per cycle; simultaneous results are picked round-robin over blocks and
/// the others wait. Loads retire after the load latency without
/// arbitration.
class PipelineModel {
 public:
  explicit PipelineModel(bool keep_trace = true) : keep_trace_(keep_trace) {}

  /// Issues one instruction; returns its issue cycle.
  long issue(const IssueRequest& req);
  /// Drains in-flight results and returns the report. The model can keep
  /// issuing afterwards.
  TimingReport report();
  void reset();

 private:
  static constexpr long kPending = std::numeric_limits<long>::max();

  struct InFlight {
    std::size_t trace_index;
    std::uint64_t seq;
    Block block;
    long done;
    bool blocking;
    std::array<RegId, 2> dsts;
    int n_dsts;
  };

  void settle(long through);
  long& ready(RegId r);

  bool keep_trace_;
  long next_issue_ = 0;
  long arb_cycle_ = 0;
  long blocking_free_ = 0;
  long last_retire_ = 0;
  long instructions_ = 0;
  std::uint64_t seq_ = 0;
  int rr_ = 0;
  std::map<RegId, long> ready_;
  std::vector<InFlight> in_flight_;
  std::vector<InstrTiming> trace_;
};

/// Energy table lookup. Throws LookupError for a missing entry.
double energy_of(const FpuConfig& cfg, std::string_view key);

struct EnergyLine {
  long count = 0;
  double pj = 0.0;
};

struct EnergyReport {
  double total_pj = 0.0;
  std::map<std::string, EnergyLine> by_key;

  void add(const std::string& key, double pj);
};

struct EfficiencyRow {
  std::string format;
  bool vector = false;
  int latency = 0;
  unsigned lanes = 0;
  double gflops = 0.0;
  double pj_per_flop = 0.0;
  double gflops_per_watt = 0.0;
  double relative = 0.0;  ///< efficiency relative to the first row
};

/// FMA efficiency per format and mode (one FMA = 2 FLOPs). Scalar rows use
/// fmadd.<fmt>; vector rows use vfmac.<fmt> with one lane per element.
std::vector<EfficiencyRow> efficiency_report(const FpuConfig& cfg, double freq_hz);

FpuConfig preset(std::string_view name);
std::vector<std::string> preset_names();

std::string config_to_json(const FpuConfig& cfg);
/// Throws ParseError on malformed JSON and UsageError on invalid settings.
FpuConfig config_from_json(const std::string& text);
FpuConfig load_config(const std::string& path);

}  // namespace tpfp

#endif  // TPFP_FPUMODEL_HPP
