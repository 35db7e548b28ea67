#include "gct/dataset.hpp"

#include <algorithm>
#include <filesystem>

#include "gct/errors.hpp"
#include "gct/formats.hpp"

namespace gct {

std::vector<int> DatasetIndex::identities() const {
  std::vector<int> ids;
  for (const auto& e : entries) ids.push_back(e.identity);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

int DatasetIndex::find(const std::string& image_id) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].image_id == image_id) return static_cast<int>(i);
  return -1;
}

LoadedImage load_image(const DatasetEntry& entry, const Config& config) {
  const auto& P = config.patch;
  auto require = [](const std::string& path) {
    if (!std::filesystem::exists(path)) throw MissingDataError(path, "missing data file: " + path);
  };

  LoadedImage out;
  FeatureMatrix features;
  PatchLayout layout;
  if (!entry.features_path.empty()) {
    require(entry.features_path);
    int w = entry.width, h = entry.height;
    if ((w <= 0 || h <= 0) && !entry.pixels_path.empty()) {
      require(entry.pixels_path);
      const Image img = read_ppm(entry.pixels_path);
      w = img.width;
      h = img.height;
    }
    layout = decompose_into_patches(w, h, P.w, P.h, P.stride_w, P.stride_h, P.n_stripes);
    try {
      features = read_gctf(entry.features_path);
    } catch (const MissingDataError&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw MissingDataError(entry.features_path, entry.features_path + ": " + e.what());
    }
    if (features.rows() != layout.patch_count())
      throw DimensionError(entry.features_path + ": " + std::to_string(features.rows()) +
                           " patches, layout expects " + std::to_string(layout.patch_count()));
  } else {
    require(entry.pixels_path);
    Image img;
    try {
      img = read_ppm(entry.pixels_path);
    } catch (const std::runtime_error& e) {
      throw MissingDataError(entry.pixels_path, e.what());
    }
    layout = decompose_into_patches(img.width, img.height, P.w, P.h, P.stride_w, P.stride_h, P.n_stripes);
    features = extract_builtin_features(img, layout, P.bins_per_channel);
  }
  out.graph = build_graph(layout, std::move(features));
  if (entry.joints) out.pose = compute_pose_context(*entry.joints);
  return out;
}

Dataset load_dataset(const DatasetIndex& index, const Config& config) {
  Dataset d;
  d.index = index;
  d.images.reserve(index.entries.size());
  for (const auto& e : index.entries) d.images.push_back(load_image(e, config));
  return d;
}

}  // namespace gct
