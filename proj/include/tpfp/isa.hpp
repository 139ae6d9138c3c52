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

#ifndef TPFP_ISA_HPP
#define TPFP_ISA_HPP

// Mnemonic-level instruction set and interpreter. Programs are plain text,
// one instruction per line; see docs/assembly.md for the grammar.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tpfp/arith.hpp"
#include "tpfp/fpumodel.hpp"
#include "tpfp/simd.hpp"

namespace tpfp {

enum class InstrKind {
  arith,      ///< scalar same-format operation
  vec_arith,  ///< lane-wise operation, optionally vector-scalar
  fclass,
  cvt_ff,
  cvt_fi,     ///< FP to integer register
  cvt_if,     ///< integer register to FP
  vcvt_ff,    ///< vector FP-FP conversion, optionally half-selecting
  vcvt_fi,    ///< vector FP to same-width integer lanes
  vcvt_if,
  cpk,        ///< cast-and-pack
  fmacex,     ///< expanding multiply-accumulate: fd = fs1*fs2 + fd
  fmulex,
  fmv_xf,     ///< raw FP bits to integer register
  fmv_fx,
  load,
  store,
};

struct Operand {
  enum class Kind { freg, xreg, stream };
  Kind kind = Kind::freg;
  unsigned reg = 0;
  std::string stream;
};

struct Instruction {
  std::string mnemonic;
  /// Energy table key: the mnemonic without a .lo/.hi suffix.
  std::string energy_key;
  InstrKind kind = InstrKind::arith;
  ArithOp op = ArithOp::add;
  std::optional<FormatDesc> fmt;  ///< destination or only format
  std::optional<FormatDesc> src;  ///< source format of conversions and expanding ops
  unsigned int_width = 0;
  bool is_signed = true;
  bool replicate = false;  ///< vector-scalar (.r) form
  std::optional<Half> half;
  unsigned pair = 0;       ///< cast-and-pack pair index
  unsigned mem_bits = 0;   ///< load/store width
  RoundingMode rm = RoundingMode::rne;
  std::vector<Operand> operands;  ///< destination first
  int line = 0;

  bool is_fpu() const { return kind != InstrKind::load && kind != InstrKind::store; }
};

struct Program {
  std::vector<Instruction> body;
  /// Iterations requested by a `.loop N` directive.
  std::optional<long> loop_count;
};

/// Decodes one line. Returns nullopt for blank or comment-only lines.
/// Format suffixes resolve against `cfg` first, then the built-ins. Throws
/// ParseError carrying `line_no`.
std::optional<Instruction> decode(std::string_view text, const FpuConfig& cfg, int line_no = 0);
Program parse_program(std::string_view text, const FpuConfig& cfg);

/// Resource usage of an FPU instruction (block, formats, lanes).
FpuOp fpu_op_of(const Instruction& in, const FpuConfig& cfg);

/// Latency of an instruction under `cfg`; throws UnsupportedOperation.
int latency_of(const FpuConfig& cfg, const Instruction& in);

/// Byte-addressed stream with a post-incrementing cursor. Multi-byte
/// elements are little-endian.
struct Stream {
  std::vector<std::uint8_t> bytes;
  std::size_t cursor = 0;

  friend bool operator==(const Stream&, const Stream&) = default;
};

struct MachineState {
  std::array<std::uint64_t, 32> fregs{};
  std::array<std::uint64_t, 32> xregs{};
  StatusFlags fflags;
  std::map<std::string, Stream> streams;

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct RunReport {
  TimingReport timing;
  EnergyReport energy;
};

/// Interpreter bound to one configuration. Not safe for concurrent use.
class Machine {
 public:
  explicit Machine(FpuConfig cfg, bool keep_trace = true);

  const FpuConfig& config() const noexcept { return cfg_; }
  MachineState& state() noexcept { return state_; }
  const MachineState& state() const noexcept { return state_; }

  /// Executes one instruction: result, accrued flags, timing and energy.
  /// Throws UnsupportedOperation for instructions the configuration lacks
  /// and UsageError for stream accesses out of bounds.
  void execute(const Instruction& in);

  /// Executes the body `loop_count` times (default: the program's .loop
  /// count, else 1) with zero loop overhead. Reports cover this run only.
  RunReport run_program(const Program& p, std::optional<long> loop_count = std::nullopt);

  StatusFlags read_fflags() const noexcept { return state_.fflags; }
  void clear_fflags() noexcept { state_.fflags = {}; }

  FpRegister freg(unsigned i) const;
  void set_freg(unsigned i, const FpRegister& r);
  std::uint64_t xreg(unsigned i) const;
  void set_xreg(unsigned i, std::uint64_t v);

  /// Timing and energy accumulated since construction or the last reset.
  TimingReport timing() { return pipeline_.report(); }
  const EnergyReport& energy() const noexcept { return energy_; }
  void reset_reports();

 private:
  struct Resolved {
    int latency;
    double energy;
  };
  const Resolved& resolve(const Instruction& in);
  void execute_resolved(const Instruction& in, const Resolved& r, std::uint32_t tag);
  void compute(const Instruction& in);
  RegId reg_id(const Operand& o) const;

  FpuConfig cfg_;
  MachineState state_;
  PipelineModel pipeline_;
  EnergyReport energy_;
  std::unordered_map<std::string, Resolved> cache_;
};

}  // namespace tpfp

#endif  // TPFP_ISA_HPP
