#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gct/gmsolver.hpp"
#include "gct/imggraph.hpp"
#include "gct/metric.hpp"
#include "gct/posectx.hpp"

namespace gct {

/// Learned correspondences of one positive training pair.
/// gallery_of_probe[p] is the gallery patch matched to probe patch p.
struct CorrespondenceTemplate {
  std::string pair_id;
  std::vector<int> gallery_of_probe;
  PoseContext probe_pose;
  PoseContext gallery_pose;

  int size() const { return static_cast<int>(gallery_of_probe.size()); }
};

struct TemplateStore {
  std::vector<CorrespondenceTemplate> templates;
  PatchLayout layout;
  MetricModel metric;

  int patches_per_template() const { return layout.patch_count(); }
};

/// Positive training pair as consumed by build_template_store.
struct TrainingPair {
  std::string pair_id;
  const AttributedGraph* probe = nullptr;
  const AttributedGraph* gallery = nullptr;
  PoseContext probe_pose;
  PoseContext gallery_pose;
  int identity = 0;
};

struct StoreParams {
  MatchingConfig matching;
  KissmeParams kissme;
  std::uint64_t seed = 0;
};

/// Similar pairs for the metric: patch pairs linked by the learned templates.
/// Dissimilar pairs: as many random patch pairs across different identities.
std::vector<VectorPair> similar_patch_pairs(const std::vector<TrainingPair>& pairs,
                                            const std::vector<CorrespondenceTemplate>& templates);
std::vector<VectorPair> dissimilar_patch_pairs(const std::vector<TrainingPair>& pairs, std::size_t count,
                                               std::uint64_t seed);

/// Graph-matches every positive pair (in parallel) and fits the metric.
TemplateStore build_template_store(const std::vector<TrainingPair>& pairs, const StoreParams& params);

struct RankedReference {
  int template_index = 0;
  double similarity = 0.0;
};

/// Top min(R, size) templates by pose-pair similarity; ties by pair_id.
std::vector<RankedReference> select_references(const TemplateStore& store, const PoseContext& test_probe_pose,
                                               const PoseContext& test_gallery_pose, int R);

/// Pose similarity of one test image against the probe (or gallery) side of
/// every stored template.
std::vector<double> pose_scores(const TemplateStore& store, const PoseContext& pose, bool probe_side);

/// Ranking from precomputed per-side scores; pair similarity is their product.
std::vector<RankedReference> rank_references(const TemplateStore& store, const std::vector<double>& probe_scores,
                                             const std::vector<double>& gallery_scores, int R);

/// Mean delta over all R*n transferred correspondences.
double distance_full(const AttributedGraph& probe, const AttributedGraph& gallery,
                     const std::vector<const CorrespondenceTemplate*>& refs, const MetricModel& metric,
                     DeltaCounter* counter = nullptr);

/// k gallery candidates per probe patch, flattened: candidates[p * k + i].
struct CompactTemplate {
  int k = 0;
  std::vector<int> candidates;

  int probe_count() const { return k == 0 ? 0 : static_cast<int>(candidates.size()) / k; }
};

/// Offset voting: each probe patch moves by the mean center offset its R
/// reference matches suggest, and the k gallery patches whose centers are
/// nearest to that target (ties by lower index) become its candidates.
CompactTemplate ensemble_templates(const std::vector<const CorrespondenceTemplate*>& refs,
                                   const PatchLayout& probe_layout, const PatchLayout& gallery_layout, int k);

/// Mean delta over the k*n compact correspondences (exactly k*n evaluations).
double distance_ensemble(const AttributedGraph& probe, const AttributedGraph& gallery, const CompactTemplate& compact,
                         const MetricModel& metric, DeltaCounter* counter = nullptr);

/// Spatially aligned comparison (patch p against patch p), the no-transfer baseline.
double distance_aligned(const AttributedGraph& probe, const AttributedGraph& gallery, const MetricModel& metric,
                        DeltaCounter* counter = nullptr);

/// Select references, ensemble, and score one test pair.
struct TransferParams {
  int R = 100;
  int k = 3;
};

double transfer_distance_ranked(const TemplateStore& store, const AttributedGraph& probe,
                                const AttributedGraph& gallery, const std::vector<RankedReference>& ranked, int k,
                                DeltaCounter* counter = nullptr);

double transfer_distance(const TemplateStore& store, const AttributedGraph& probe, const PoseContext& probe_pose,
                         const AttributedGraph& gallery, const PoseContext& gallery_pose, const TransferParams& params,
                         DeltaCounter* counter = nullptr);

}  // namespace gct
