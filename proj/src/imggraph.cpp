#include "gct/imggraph.hpp"

#include <cmath>
#include <string>

#include "gct/errors.hpp"

namespace gct {

std::vector<int> PatchLayout::stripe_row_bounds() const {
  std::vector<int> bounds(n_stripes + 1, 0);
  const int base = n_rows / n_stripes;
  const int extra = n_rows % n_stripes;
  for (int s = 0; s < n_stripes; ++s) bounds[s + 1] = bounds[s] + base + (s < extra ? 1 : 0);
  return bounds;
}

bool PatchLayout::same_geometry(const PatchLayout& o) const {
  return image_width_px == o.image_width_px && image_height_px == o.image_height_px &&
         patch_w_px == o.patch_w_px && patch_h_px == o.patch_h_px && stride_w_px == o.stride_w_px &&
         stride_h_px == o.stride_h_px && n_stripes == o.n_stripes;
}

PatchLayout decompose_into_patches(int width, int height, int patch_w, int patch_h, int stride_w,
                                   int stride_h, int n_stripes) {
  if (patch_w < 1 || patch_h < 1 || patch_w > width || patch_h > height)
    throw DimensionError("patch " + std::to_string(patch_w) + "x" + std::to_string(patch_h) +
                         " does not fit image " + std::to_string(width) + "x" + std::to_string(height));
  if (stride_w < 1 || stride_h < 1) throw std::invalid_argument("strides must be >= 1");

  PatchLayout L;
  L.image_width_px = width;
  L.image_height_px = height;
  L.patch_w_px = patch_w;
  L.patch_h_px = patch_h;
  L.stride_w_px = stride_w;
  L.stride_h_px = stride_h;
  L.n_rows = (height - patch_h) / stride_h + 1;
  L.n_cols = (width - patch_w) / stride_w + 1;
  if (n_stripes < 1 || n_stripes > L.n_rows)
    throw std::invalid_argument("n_stripes must lie in [1, " + std::to_string(L.n_rows) + "], got " +
                                std::to_string(n_stripes));
  L.n_stripes = n_stripes;

  L.centers.reserve(L.patch_count());
  for (int r = 0; r < L.n_rows; ++r)
    for (int c = 0; c < L.n_cols; ++c)
      L.centers.push_back({c * stride_w + patch_w / 2.0, r * stride_h + patch_h / 2.0});

  const auto bounds = L.stripe_row_bounds();
  L.stripe_of_patch.resize(L.patch_count());
  for (int s = 0; s < n_stripes; ++s)
    for (int r = bounds[s]; r < bounds[s + 1]; ++r)
      for (int c = 0; c < L.n_cols; ++c) L.stripe_of_patch[r * L.n_cols + c] = s;
  return L;
}

FeatureMatrix extract_builtin_features(const Image& img, const PatchLayout& layout, int bins_per_channel) {
  if (img.width != layout.image_width_px || img.height != layout.image_height_px)
    throw DimensionError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                         " does not match layout " + std::to_string(layout.image_width_px) + "x" +
                         std::to_string(layout.image_height_px));
  if (bins_per_channel < 2) throw std::invalid_argument("bins_per_channel must be >= 2");

  const int n = layout.patch_count();
  FeatureMatrix F = FeatureMatrix::Zero(n, 3 * bins_per_channel);
  for (int p = 0; p < n; ++p) {
    const int x0 = layout.anchor_x(p), y0 = layout.anchor_y(p);
    auto row = F.row(p);
    for (int y = y0; y < y0 + layout.patch_h_px; ++y)
      for (int x = x0; x < x0 + layout.patch_w_px; ++x)
        for (int c = 0; c < 3; ++c) row(c * bins_per_channel + img.at(x, y, c) * bins_per_channel / 256) += 1.0;
    for (int c = 0; c < 3; ++c) {
      auto h = row.segment(c * bins_per_channel, bins_per_channel);
      const double s = h.sum();
      if (s > 0) h /= s;
    }
    const double norm = row.norm();
    if (norm > 0) row /= norm;
  }
  return F;
}

AttributedGraph build_graph(const PatchLayout& layout, FeatureMatrix features) {
  if (features.rows() != layout.patch_count())
    throw DimensionError("feature count " + std::to_string(features.rows()) + " != patch count " +
                         std::to_string(layout.patch_count()));
  AttributedGraph g;
  g.layout = layout;
  g.positions_norm.reserve(layout.centers.size());
  for (const auto& c : layout.centers)
    g.positions_norm.push_back({c.x / layout.image_width_px, c.y / layout.image_height_px});
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double norm = features.row(i).norm();
    if (norm > 0) features.row(i) /= norm;
  }
  g.features = std::move(features);
  return g;
}

}  // namespace gct
