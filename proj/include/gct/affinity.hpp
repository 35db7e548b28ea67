#pragma once

#include <Eigen/Core>
#include <vector>

#include "gct/imggraph.hpp"

namespace gct {

struct AffinityParams {
  double sigma_p = 0.2;  // spatial bandwidth, in normalized image units
  double sigma_f = 0.3;  // visual bandwidth
};

/// Candidate sets for one probe stripe against its gallery search space.
/// Candidate (i1, i2) has flat index i1 * n2 + i2 (probe-major).
struct MatchProblem {
  std::vector<int> probe_nodes;
  std::vector<int> gallery_nodes;

  int n1() const { return static_cast<int>(probe_nodes.size()); }
  int n2() const { return static_cast<int>(gallery_nodes.size()); }
};

double node_affinity(const Point2& pos1, const Point2& pos2, const Eigen::Ref<const Eigen::RowVectorXd>& feat1,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat2, const AffinityParams& params);

/// Compatibility of candidate (i1, i2) with candidate (j1, j2): compares the
/// probe-side offset/feature difference with the gallery-side one.
double edge_affinity(const Point2& pos_i1, const Point2& pos_j1, const Point2& pos_i2, const Point2& pos_j2,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_i1,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_j1,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_i2,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_j2, const AffinityParams& params);

/// Dense symmetric affinity over the n1*n2 candidates. Entries coupling two
/// distinct candidates that share a probe or gallery node are zero.
Eigen::MatrixXd build_affinity_matrix(const AttributedGraph& probe, const AttributedGraph& gallery,
                                      const MatchProblem& problem, const AffinityParams& params);

/// Probe patches of stripe `stripe_idx`, and gallery patches whose row lies in
/// the same stripe widened by `expand_rows` rows on both sides (clamped).
MatchProblem stripe_search_space(const PatchLayout& probe_layout, const PatchLayout& gallery_layout, int stripe_idx,
                                 int expand_rows);

}  // namespace gct
