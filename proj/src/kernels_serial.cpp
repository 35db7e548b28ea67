#include "gct/errors.hpp"
#include "kernels_common.hpp"

namespace gct {

namespace detail {

void check_test_layouts(const TemplateStore* store, std::span<const TestImage> probes,
                        std::span<const TestImage> galleries) {
  const PatchLayout* ref = store ? &store->layout : nullptr;
  auto check = [&](const TestImage& t) {
    if (!ref) ref = &t.graph->layout;
    if (!t.graph->layout.same_geometry(*ref))
      throw LayoutMismatchError("test image layout differs from the template store layout");
  };
  for (const auto& t : probes) check(t);
  for (const auto& t : galleries) check(t);
}

}  // namespace detail

namespace serial {

std::vector<std::vector<int>> match_pairs(const std::vector<TrainingPair>& pairs, const MatchingConfig& config) {
  std::vector<std::vector<int>> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = match_image_pair(*pairs[i].probe, *pairs[i].gallery, config);
  return out;
}

Eigen::MatrixXd transfer_distance_matrix(const TemplateStore& store, std::span<const TestImage> probes,
                                         std::span<const TestImage> galleries, const TransferParams& params,
                                         DeltaCounter* counter) {
  detail::check_test_layouts(&store, probes, galleries);
  std::vector<std::vector<double>> gallery_scores(galleries.size());
  for (std::size_t g = 0; g < galleries.size(); ++g) gallery_scores[g] = pose_scores(store, *galleries[g].pose, false);

  Eigen::MatrixXd D(probes.size(), galleries.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto probe_scores = pose_scores(store, *probes[p].pose, true);
    for (std::size_t g = 0; g < galleries.size(); ++g) {
      const auto ranked = rank_references(store, probe_scores, gallery_scores[g], params.R);
      D(p, g) = transfer_distance_ranked(store, *probes[p].graph, *galleries[g].graph, ranked, params.k, counter);
    }
  }
  return D;
}

Eigen::MatrixXd aligned_distance_matrix(std::span<const TestImage> probes, std::span<const TestImage> galleries,
                                        const MetricModel& metric, DeltaCounter* counter) {
  detail::check_test_layouts(nullptr, probes, galleries);
  Eigen::MatrixXd D(probes.size(), galleries.size());
  for (std::size_t p = 0; p < probes.size(); ++p)
    for (std::size_t g = 0; g < galleries.size(); ++g)
      D(p, g) = distance_aligned(*probes[p].graph, *galleries[g].graph, metric, counter);
  return D;
}

}  // namespace serial
}  // namespace gct
