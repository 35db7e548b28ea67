#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gct/config.hpp"
#include "gct/dataset.hpp"

namespace gct {

/// rates[r - 1] = percentage of probes whose true match ranks within the top r.
struct CmcCurve {
  std::vector<double> rates;

  double at_rank(int r) const { return rates.at(static_cast<std::size_t>(r - 1)); }
  friend bool operator==(const CmcCurve&, const CmcCurve&) = default;
};

struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

/// Seeded identity split into halves; an odd identity goes to training.
Split split_dataset(const DatasetIndex& index, std::uint64_t seed);

/// 1-based rank of each probe's best true match (ties by gallery index).
std::vector<int> match_ranks(const Eigen::MatrixXd& distances, const std::vector<int>& probe_ids,
                             const std::vector<int>& gallery_ids);

CmcCurve cmc_curve(const Eigen::MatrixXd& distances, const std::vector<int>& probe_ids,
                   const std::vector<int>& gallery_ids);

/// Element-wise mean.
CmcCurve average_curves(const std::vector<CmcCurve>& curves);

struct TrialResult {
  CmcCurve transfer;  // correspondence transfer
  CmcCurve aligned;   // no-transfer baseline with the same metric
  std::uint64_t delta_calls = 0;
  std::uint64_t test_pairs = 0;
};

struct ProtocolResult {
  CmcCurve transfer;
  CmcCurve aligned;
  std::vector<TrialResult> trials;
};

struct ProtocolOptions {
  bool parallel = true;
};

/// Repeated random-split protocol: per trial split identities, learn templates
/// and the metric from training positives, score the test identities, and
/// average the CMC curves. Probe camera is the lowest camera id.
ProtocolResult run_protocol(const Dataset& data, const Config& config, const ProtocolOptions& options = {});

/// Scores the given test identities against a prebuilt store (one draw).
TrialResult evaluate_with_store(const Dataset& data, const TemplateStore& store, const std::vector<int>& test_ids,
                                const Config& config, std::uint64_t draw_seed, bool parallel = true);

/// Plain-text rank table and "rank,rate" CSV.
std::string format_cmc_table(const CmcCurve& transfer, const CmcCurve& aligned);
std::string format_cmc_csv(const CmcCurve& curve);

}  // namespace gct
