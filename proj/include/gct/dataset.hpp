#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gct/config.hpp"
#include "gct/imggraph.hpp"
#include "gct/posectx.hpp"

namespace gct {

struct DatasetEntry {
  std::string image_id;
  int identity = 0;
  int camera = 0;
  std::string pixels_path;    // PPM, resolved against the manifest directory
  std::string features_path;  // GCTF; takes precedence over pixels
  int width = 0;   // image size; needed when only features_path is given
  int height = 0;
  std::optional<JointSet> joints;
};

struct DatasetIndex {
  std::vector<DatasetEntry> entries;

  std::vector<int> identities() const;  // sorted, unique
  int find(const std::string& image_id) const;  // -1 when absent
};

/// An entry with its patch graph and (when joints are known) pose context.
struct LoadedImage {
  AttributedGraph graph;
  std::optional<PoseContext> pose;
};

struct Dataset {
  DatasetIndex index;
  std::vector<LoadedImage> images;  // parallel to index.entries
};

/// Thrown when a referenced pixel or feature file is missing or unreadable.
class MissingDataError : public std::runtime_error {
 public:
  MissingDataError(const std::string& path, const std::string& what)
      : std::runtime_error(what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Builds graphs from pixels (built-in histogram features) or from feature
/// files, using the patch configuration in `config`.
Dataset load_dataset(const DatasetIndex& index, const Config& config);

/// Graph of a single entry.
LoadedImage load_image(const DatasetEntry& entry, const Config& config);

}  // namespace gct
