#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "gct/image.hpp"

namespace gct {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Regular overlapping patch grid over one image plus its stripe partition.
///
/// Anchors sit at multiples of the stride starting from (0,0); a trailing
/// margin narrower than one stride is dropped, so patches never leave the
/// image. Centers are anchor + half the patch size. Patch rows are grouped
/// into `n_stripes` contiguous bands, earlier bands taking the remainder.
struct PatchLayout {
  int image_width_px = 0;
  int image_height_px = 0;
  int patch_w_px = 0;
  int patch_h_px = 0;
  int stride_w_px = 0;
  int stride_h_px = 0;
  int n_rows = 0;
  int n_cols = 0;
  int n_stripes = 0;
  std::vector<Point2> centers;      // row-major
  std::vector<int> stripe_of_patch;

  int patch_count() const { return n_rows * n_cols; }
  int row_of(int patch) const { return patch / n_cols; }
  int col_of(int patch) const { return patch % n_cols; }
  int anchor_x(int patch) const { return col_of(patch) * stride_w_px; }
  int anchor_y(int patch) const { return row_of(patch) * stride_h_px; }

  /// First row of each stripe followed by n_rows (size n_stripes + 1).
  std::vector<int> stripe_row_bounds() const;

  /// True when both layouts were produced from the same parameters.
  bool same_geometry(const PatchLayout& other) const;

  friend bool operator==(const PatchLayout&, const PatchLayout&) = default;
};

PatchLayout decompose_into_patches(int width, int height, int patch_w, int patch_h, int stride_w,
                                   int stride_h, int n_stripes);

/// One feature row per patch.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-channel RGB histograms of every patch, L1-normalized per channel and
/// then L2-normalized as a whole. Dimension is 3 * bins_per_channel.
FeatureMatrix extract_builtin_features(const Image& img, const PatchLayout& layout, int bins_per_channel = 8);

/// Patch graph of one image: normalized centers (spatial attribute) and
/// unit-norm features (visual attribute). Blank patches keep a zero feature.
struct AttributedGraph {
  PatchLayout layout;
  std::vector<Point2> positions_norm;
  FeatureMatrix features;

  int size() const { return static_cast<int>(positions_norm.size()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }
  Eigen::Map<const Eigen::RowVectorXd> feature(int node) const {
    return {features.row(node).data(), features.cols()};
  }
};

AttributedGraph build_graph(const PatchLayout& layout, FeatureMatrix features);

}  // namespace gct
