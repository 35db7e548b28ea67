#pragma once

// Data-parallel kernels. Every kernel exists twice: a plain serial reference
// in gct::serial and an OpenMP version in gct::parallel. Both produce
// bit-identical results; the tests and the benchmark compare them.

#include <Eigen/Core>
#include <span>
#include <vector>

#include "gct/transfer.hpp"

namespace gct {

struct TestImage {
  const AttributedGraph* graph = nullptr;
  const PoseContext* pose = nullptr;
};

/// Worker cap: GCT_THREADS if set to a positive integer, else the OpenMP default.
int worker_count();

namespace serial {

std::vector<std::vector<int>> match_pairs(const std::vector<TrainingPair>& pairs, const MatchingConfig& config);

/// Probe x gallery transfer distances (reference selection, ensemble, delta).
Eigen::MatrixXd transfer_distance_matrix(const TemplateStore& store, std::span<const TestImage> probes,
                                         std::span<const TestImage> galleries, const TransferParams& params,
                                         DeltaCounter* counter = nullptr);

/// Probe x gallery spatially aligned distances.
Eigen::MatrixXd aligned_distance_matrix(std::span<const TestImage> probes, std::span<const TestImage> galleries,
                                        const MetricModel& metric, DeltaCounter* counter = nullptr);

}  // namespace serial

namespace parallel {

std::vector<std::vector<int>> match_pairs(const std::vector<TrainingPair>& pairs, const MatchingConfig& config);

Eigen::MatrixXd transfer_distance_matrix(const TemplateStore& store, std::span<const TestImage> probes,
                                         std::span<const TestImage> galleries, const TransferParams& params,
                                         DeltaCounter* counter = nullptr);

Eigen::MatrixXd aligned_distance_matrix(std::span<const TestImage> probes, std::span<const TestImage> galleries,
                                        const MetricModel& metric, DeltaCounter* counter = nullptr);

}  // namespace parallel

}  // namespace gct
