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

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tpfp/errors.hpp"
#include "tpfp/fpumodel.hpp"

namespace tpfp {

namespace {

using json = nlohmann::ordered_json;

json block_to_json(const BlockConfig& b, const FpuConfig& cfg) {
  json j;
  json formats = json::object();
  for (const auto& f : cfg.formats) {
    const auto it = b.formats.find(f.fmt.name());
    if (it == b.formats.end()) continue;
    formats[f.fmt.name()] = {{"impl", to_string(it->second.impl)}, {"cycles", it->second.cycles}};
  }
  j["formats"] = formats;
  if (!b.merged_lanes.empty()) j["lanes"] = b.merged_lanes;
  return j;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : it->template get<T>();
}

}  // namespace

std::string config_to_json(const FpuConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["w_fpu"] = cfg.w_fpu;
  j["flen"] = cfg.flen;
  j["xlen"] = cfg.xlen;
  json formats = json::array();
  for (const auto& f : cfg.formats) {
    formats.push_back({{"name", f.fmt.name()},
                       {"exp_bits", f.fmt.exp_bits()},
                       {"man_bits", f.fmt.man_bits()},
                       {"suffix", f.suffix}});
  }
  j["formats"] = formats;
  json blocks;
  for (Block b : kAllBlocks) blocks[std::string(to_string(b))] = block_to_json(cfg.block(b), cfg);
  j["blocks"] = blocks;
  j["simd"] = cfg.simd_enabled;
  j["fregs_in_xregs"] = cfg.fregs_in_xregs;
  j["check_boxing"] = cfg.check_boxing;
  j["divider"] = {{"pre_post_cycles", cfg.divider.pre_post_cycles},
                  {"bits_per_cycle", cfg.divider.bits_per_cycle}};
  j["load_latency"] = cfg.load_latency;
  j["table_lanes"] = to_string(cfg.table_lanes);
  j["frequency_hz"] = cfg.frequency_hz;
  j["energy"] = cfg.energy_pj;
  j["energy_notes"] = cfg.energy_notes;
  return j.dump(2) + "\n";
}

FpuConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config JSON: ") + e.what(), 0);
  }
  FpuConfig cfg;
  try {
    cfg.name = get_or<std::string>(j, "name", "custom");
    cfg.w_fpu = j.at("w_fpu").get<unsigned>();
    cfg.flen = get_or<unsigned>(j, "flen", cfg.w_fpu);
    cfg.xlen = get_or<unsigned>(j, "xlen", 64);
    for (const auto& f : j.at("formats")) {
      const std::string name = f.at("name").get<std::string>();
      const FormatDesc fmt(name, f.at("exp_bits").get<int>(), f.at("man_bits").get<int>());
      std::string suffix;
      if (f.contains("suffix")) {
        suffix = f.at("suffix").get<std::string>();
      } else {
        try {
          const FormatDesc& b = builtin_format(name);
          if (!(b == fmt)) throw LookupError(name);
          suffix = std::string(mnemonic_suffix(b));
        } catch (const LookupError&) {
          throw UsageError("format '" + name + "' needs a \"suffix\"");
        }
      }
      cfg.formats.push_back(ConfigFormat{fmt, suffix});
    }
    for (const auto& [bname, bj] : j.at("blocks").items()) {
      BlockConfig bc;
      for (const auto& [fname, fj] : bj.at("formats").items()) {
        bc.formats[fname] = SliceSetting{parse_impl(fj.at("impl").get<std::string>()),
                                         get_or<int>(fj, "cycles", 0)};
      }
      bc.merged_lanes = get_or<std::vector<unsigned>>(bj, "lanes", {});
      cfg.blocks[parse_block(bname)] = bc;
    }
    cfg.simd_enabled = get_or<bool>(j, "simd", true);
    cfg.fregs_in_xregs = get_or<bool>(j, "fregs_in_xregs", false);
    cfg.check_boxing = get_or<bool>(j, "check_boxing", false);
    if (j.contains("divider")) {
      cfg.divider.pre_post_cycles = get_or<int>(j["divider"], "pre_post_cycles", 3);
      cfg.divider.bits_per_cycle = get_or<int>(j["divider"], "bits_per_cycle", 3);
    }
    cfg.load_latency = get_or<int>(j, "load_latency", 1);
    cfg.table_lanes = parse_lane_count(get_or<std::string>(j, "table_lanes", "usable"));
    cfg.frequency_hz = get_or<double>(j, "frequency_hz", 0.0);
    cfg.energy_pj = get_or<std::map<std::string, double>>(j, "energy", {});
    cfg.energy_notes = get_or<std::vector<std::string>>(j, "energy_notes", {});
  } catch (const json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what(), 0);
  }
  cfg.validate();
  return cfg;
}

FpuConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace tpfp
