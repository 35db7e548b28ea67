#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "gct/config.hpp"
#include "gct/dataset.hpp"
#include "gct/imggraph.hpp"
#include "gct/transfer.hpp"

namespace gct {

/// Malformed manifest. `line` is 1-based, 0 when unknown.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// JSON manifest: {"entries": [{"image_id", "identity", "camera",
/// "pixels_path" | "features_path", "joints": [[x,y] x 14] | null}, ...]}.
/// Relative paths are resolved against `base_dir`. A joint with negative
/// coordinates is treated as missing.
DatasetIndex parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
DatasetIndex load_manifest(const std::filesystem::path& path);
std::string manifest_to_json_text(const DatasetIndex& index, const std::filesystem::path& base_dir);

/// GCTF feature file: "GCTF", u32 version (1), u32 n_patches, u32 dim, then
/// n_patches * dim float32, all little-endian, row-major.
std::string encode_gctf(const FeatureMatrix& features);
FeatureMatrix decode_gctf(const std::string& bytes);
void write_gctf(const std::filesystem::path& path, const FeatureMatrix& features);
FeatureMatrix read_gctf(const std::filesystem::path& path);

/// Template store as one JSON document: format tag, config echo, layout,
/// templates (matches plus both pose codes), metric arrays.
std::string store_to_json_text(const TemplateStore& store, const Config& config);
TemplateStore store_from_json_text(const std::string& text, Config* config_out = nullptr);
void save_store(const std::filesystem::path& path, const TemplateStore& store, const Config& config);
TemplateStore load_store(const std::filesystem::path& path, Config* config_out = nullptr);

}  // namespace gct
