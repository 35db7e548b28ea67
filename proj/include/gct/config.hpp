#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "gct/gmsolver.hpp"
#include "gct/metric.hpp"
#include "gct/transfer.hpp"

namespace gct {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PatchConfig {
  int w = 32;
  int h = 32;
  int stride_w = 8;
  int stride_h = 12;
  int n_stripes = 4;
  int expand_rows = 1;
  int bins_per_channel = 8;
};

struct ProtocolConfig {
  int trials = 10;
  std::uint64_t seed = 0;
  bool multi_shot = false;
};

/// Every tunable of the pipeline. Defaults: 32x32 patches with a 12 (rows) by
/// 8 (columns) stride and (R, k) = (100, 3).
struct Config {
  PatchConfig patch;
  AffinityParams affinity;
  SolverParams solver;
  int pose_bins = 8;
  TransferParams transfer;
  KissmeParams metric;
  ProtocolConfig protocol;

  MatchingConfig matching() const { return {affinity, solver, patch.expand_rows}; }

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Unknown keys are rejected; missing keys keep their defaults.
Config config_from_json_text(const std::string& text);
Config load_config(const std::filesystem::path& path);
std::string config_to_json_text(const Config& config);

}  // namespace gct
