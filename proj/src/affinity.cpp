#include "gct/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gct {

namespace {

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double node_affinity(const Point2& pos1, const Point2& pos2, const Eigen::Ref<const Eigen::RowVectorXd>& feat1,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat2, const AffinityParams& params) {
  return std::exp(-dist(pos1, pos2) / params.sigma_p) * std::exp(-(feat1 - feat2).norm() / params.sigma_f);
}

double edge_affinity(const Point2& pos_i1, const Point2& pos_j1, const Point2& pos_i2, const Point2& pos_j2,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_i1,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_j1,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_i2,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feat_j2, const AffinityParams& params) {
  const double dx = (pos_i1.x - pos_j1.x) - (pos_i2.x - pos_j2.x);
  const double dy = (pos_i1.y - pos_j1.y) - (pos_i2.y - pos_j2.y);
  const double df = ((feat_i1 - feat_j1) - (feat_i2 - feat_j2)).norm();
  return std::exp(-std::hypot(dx, dy) / params.sigma_p) * std::exp(-df / params.sigma_f);
}

Eigen::MatrixXd build_affinity_matrix(const AttributedGraph& probe, const AttributedGraph& gallery,
                                      const MatchProblem& problem, const AffinityParams& params) {
  const int n1 = problem.n1(), n2 = problem.n2();
  for (int v : problem.probe_nodes)
    if (v < 0 || v >= probe.size()) throw std::out_of_range("probe node " + std::to_string(v) + " out of range");
  for (int v : problem.gallery_nodes)
    if (v < 0 || v >= gallery.size()) throw std::out_of_range("gallery node " + std::to_string(v) + " out of range");

  const int order = n1 * n2;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(order, order);
  for (int a = 0; a < order; ++a) {
    const int i1 = problem.probe_nodes[a / n2], i2 = problem.gallery_nodes[a % n2];
    K(a, a) = node_affinity(probe.positions_norm[i1], gallery.positions_norm[i2], probe.feature(i1),
                            gallery.feature(i2), params);
    for (int b = a + 1; b < order; ++b) {
      if (a / n2 == b / n2 || a % n2 == b % n2) continue;  // shared node: conflicting candidates
      const int j1 = problem.probe_nodes[b / n2], j2 = problem.gallery_nodes[b % n2];
      const double v = edge_affinity(probe.positions_norm[i1], probe.positions_norm[j1], gallery.positions_norm[i2],
                                     gallery.positions_norm[j2], probe.feature(i1), probe.feature(j1),
                                     gallery.feature(i2), gallery.feature(j2), params);
      K(a, b) = v;
      K(b, a) = v;
    }
  }
  return K;
}

MatchProblem stripe_search_space(const PatchLayout& probe_layout, const PatchLayout& gallery_layout, int stripe_idx,
                                 int expand_rows) {
  if (probe_layout.n_stripes != gallery_layout.n_stripes)
    throw std::invalid_argument("probe and gallery layouts have different stripe counts");
  if (stripe_idx < 0 || stripe_idx >= probe_layout.n_stripes)
    throw std::out_of_range("stripe index " + std::to_string(stripe_idx) + " out of range");
  if (expand_rows < 0) throw std::invalid_argument("expand_rows must be >= 0");

  MatchProblem mp;
  for (int p = 0; p < probe_layout.patch_count(); ++p)
    if (probe_layout.stripe_of_patch[p] == stripe_idx) mp.probe_nodes.push_back(p);

  const auto bounds = gallery_layout.stripe_row_bounds();
  const int lo = std::max(0, bounds[stripe_idx] - expand_rows);
  const int hi = std::min(gallery_layout.n_rows, bounds[stripe_idx + 1] + expand_rows);
  for (int r = lo; r < hi; ++r)
    for (int c = 0; c < gallery_layout.n_cols; ++c) mp.gallery_nodes.push_back(r * gallery_layout.n_cols + c);
  return mp;
}

}  // namespace gct
