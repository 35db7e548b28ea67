#include "gct/formats.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "gct/errors.hpp"

namespace gct {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingDataError(path.string(), "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Line of the n-th (0-based) occurrence of `"image_id"` in the raw text, so
// errors can point at the offending entry.
int entry_line(const std::string& text, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    pos = text.find("\"image_id\"", i == 0 ? 0 : pos + 1);
    if (pos == std::string::npos) return 0;
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

}  // namespace

DatasetIndex parse_manifest(const std::string& text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ManifestError("manifest is not valid JSON: " + std::string(e.what()), line);
  }
  if (!root.is_object() || !root.contains("entries") || !root["entries"].is_array())
    throw ManifestError("manifest must be an object with an \"entries\" array", 1);

  DatasetIndex index;
  std::set<std::string> seen;
  const auto& arr = root["entries"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const int line = entry_line(text, i);
    auto fail = [&](const std::string& msg) -> ManifestError {
      return ManifestError("manifest line " + std::to_string(line) + " (entry " + std::to_string(i) + "): " + msg, line);
    };
    const json& e = arr[i];
    if (!e.is_object()) throw fail("entry is not an object");
    DatasetEntry d;
    try {
      d.image_id = e.at("image_id").get<std::string>();
      d.identity = e.at("identity").get<int>();
      d.camera = e.at("camera").get<int>();
      if (e.contains("pixels_path") && !e["pixels_path"].is_null())
        d.pixels_path = (base_dir / e["pixels_path"].get<std::string>()).string();
      if (e.contains("features_path") && !e["features_path"].is_null())
        d.features_path = (base_dir / e["features_path"].get<std::string>()).string();
      if (e.contains("width")) d.width = e["width"].get<int>();
      if (e.contains("height")) d.height = e["height"].get<int>();
    } catch (const json::exception& ex) {
      throw fail(ex.what());
    }
    if (d.pixels_path.empty() && d.features_path.empty()) throw fail("needs pixels_path or features_path");
    if (d.pixels_path.empty() && (d.width <= 0 || d.height <= 0))
      throw fail("feature-only entries need positive width and height");
    if (!seen.insert(d.image_id).second) throw fail("duplicate image_id " + d.image_id);

    if (e.contains("joints") && !e["joints"].is_null()) {
      const json& js = e["joints"];
      if (!js.is_array() || js.size() != static_cast<std::size_t>(kNumJoints))
        throw fail("joints must list exactly 14 [x, y] pairs");
      JointSet set;
      for (int j = 0; j < kNumJoints; ++j) {
        if (js[j].is_null()) continue;
        if (!js[j].is_array() || js[j].size() != 2 || !js[j][0].is_number() || !js[j][1].is_number())
          throw fail("joint " + std::to_string(j) + " must be [x, y] or null");
        set.coords[j] = {js[j][0].get<double>(), js[j][1].get<double>()};
        set.valid[j] = set.coords[j].x >= 0 && set.coords[j].y >= 0;
      }
      d.joints = set;
    }
    index.entries.push_back(std::move(d));
  }
  return index;
}

DatasetIndex load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingDataError(path.string(), "cannot read manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::string manifest_to_json_text(const DatasetIndex& index, const fs::path& base_dir) {
  json arr = json::array();
  for (const auto& e : index.entries) {
    json j = {{"image_id", e.image_id}, {"identity", e.identity}, {"camera", e.camera}};
    if (!e.pixels_path.empty()) j["pixels_path"] = fs::path(e.pixels_path).lexically_relative(base_dir).string();
    if (!e.features_path.empty()) j["features_path"] = fs::path(e.features_path).lexically_relative(base_dir).string();
    if (e.width > 0) j["width"] = e.width;
    if (e.height > 0) j["height"] = e.height;
    if (e.joints) {
      json js = json::array();
      for (int k = 0; k < kNumJoints; ++k)
        js.push_back(e.joints->valid[k] ? json::array({e.joints->coords[k].x, e.joints->coords[k].y}) : json());
      j["joints"] = js;
    } else {
      j["joints"] = nullptr;
    }
    arr.push_back(std::move(j));
  }
  return json{{"entries", arr}}.dump(1) + "\n";
}

// ---- GCTF ----

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

std::string encode_gctf(const FeatureMatrix& features) {
  std::string out = "GCTF";
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(features.rows()));
  put_u32(out, static_cast<std::uint32_t>(features.cols()));
  out.reserve(out.size() + static_cast<std::size_t>(features.size()) * 4);
  for (Eigen::Index r = 0; r < features.rows(); ++r)
    for (Eigen::Index c = 0; c < features.cols(); ++c)
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(features(r, c))));
  return out;
}

FeatureMatrix decode_gctf(const std::string& bytes) {
  if (bytes.size() < 16 || bytes.compare(0, 4, "GCTF") != 0) throw std::runtime_error("not a GCTF feature file");
  if (get_u32(bytes, 4) != 1) throw std::runtime_error("unsupported GCTF version " + std::to_string(get_u32(bytes, 4)));
  const std::uint64_t n = get_u32(bytes, 8), dim = get_u32(bytes, 12);
  if (bytes.size() != 16 + n * dim * 4) throw std::runtime_error("GCTF payload size does not match its header");
  FeatureMatrix F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::size_t at = 16;
  for (Eigen::Index r = 0; r < F.rows(); ++r)
    for (Eigen::Index c = 0; c < F.cols(); ++c, at += 4) F(r, c) = std::bit_cast<float>(get_u32(bytes, at));
  return F;
}

void write_gctf(const fs::path& path, const FeatureMatrix& features) { spit(path, encode_gctf(features)); }

FeatureMatrix read_gctf(const fs::path& path) { return decode_gctf(slurp(path)); }

// ---- template store ----

namespace {

json codes_to_json(const PoseContext::Codes& codes) {
  json flat = json::array();
  for (const auto& row : codes)
    for (auto v : row) flat.push_back(v);
  return flat;
}

PoseContext::Codes codes_from_json(const json& j) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(kNumJoints * kContextCols))
    throw std::runtime_error("pose code array has the wrong size");
  PoseContext::Codes c{};
  for (int i = 0; i < kNumJoints; ++i)
    for (int k = 0; k < kContextCols; ++k) c[i][k] = j[i * kContextCols + k].get<std::uint8_t>();
  return c;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw std::runtime_error("matrix payload does not match its shape");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)].get<double>();
  return m;
}

}  // namespace

std::string store_to_json_text(const TemplateStore& store, const Config& config) {
  const PatchLayout& L = store.layout;
  json templates = json::array();
  for (const auto& t : store.templates)
    templates.push_back({{"pair_id", t.pair_id},
                         {"matches", t.gallery_of_probe},
                         {"probe_psi", codes_to_json(t.probe_pose.psi)},
                         {"probe_phi", codes_to_json(t.probe_pose.phi)},
                         {"gallery_psi", codes_to_json(t.gallery_pose.psi)},
                         {"gallery_phi", codes_to_json(t.gallery_pose.phi)}});
  const json root = {
      {"format", "gct-template-store"},
      {"version", 1},
      {"config", json::parse(config_to_json_text(config))},
      {"layout",
       {{"image_width_px", L.image_width_px},
        {"image_height_px", L.image_height_px},
        {"patch_w_px", L.patch_w_px},
        {"patch_h_px", L.patch_h_px},
        {"stride_w_px", L.stride_w_px},
        {"stride_h_px", L.stride_h_px},
        {"n_stripes", L.n_stripes}}},
      {"templates", templates},
      {"metric",
       {{"pca_mean", matrix_to_json(store.metric.pca_mean)},
        {"pca_basis", matrix_to_json(store.metric.pca_basis)},
        {"M", matrix_to_json(store.metric.M)}}},
  };
  return root.dump(1) + "\n";
}

TemplateStore store_from_json_text(const std::string& text, Config* config_out) {
  TemplateStore store;
  try {
    const json root = json::parse(text);
    if (root.at("format") != "gct-template-store" || root.at("version") != 1)
      throw std::runtime_error("not a version-1 template store");
    if (config_out) *config_out = config_from_json_text(root.at("config").dump());
    const json& L = root.at("layout");
    store.layout = decompose_into_patches(L.at("image_width_px"), L.at("image_height_px"), L.at("patch_w_px"),
                                          L.at("patch_h_px"), L.at("stride_w_px"), L.at("stride_h_px"),
                                          L.at("n_stripes"));
    const int n = store.layout.patch_count();
    for (const json& t : root.at("templates")) {
      CorrespondenceTemplate ct;
      ct.pair_id = t.at("pair_id").get<std::string>();
      ct.gallery_of_probe = t.at("matches").get<std::vector<int>>();
      if (ct.size() != n) throw std::runtime_error("template " + ct.pair_id + " has the wrong match count");
      for (int g : ct.gallery_of_probe)
        if (g < 0 || g >= n) throw std::runtime_error("template " + ct.pair_id + " has an invalid gallery index");
      ct.probe_pose = {codes_from_json(t.at("probe_psi")), codes_from_json(t.at("probe_phi"))};
      ct.gallery_pose = {codes_from_json(t.at("gallery_psi")), codes_from_json(t.at("gallery_phi"))};
      store.templates.push_back(std::move(ct));
    }
    const json& m = root.at("metric");
    store.metric.pca_mean = matrix_from_json(m.at("pca_mean"));
    store.metric.pca_basis = matrix_from_json(m.at("pca_basis"));
    store.metric.M = matrix_from_json(m.at("M"));
    if (store.metric.M.rows() != store.metric.pca_basis.cols() || store.metric.M.cols() != store.metric.M.rows())
      throw std::runtime_error("metric matrices have inconsistent shapes");
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed template store: ") + e.what());
  }
  return store;
}

void save_store(const fs::path& path, const TemplateStore& store, const Config& config) {
  spit(path, store_to_json_text(store, config));
}

TemplateStore load_store(const fs::path& path, Config* config_out) {
  return store_from_json_text(slurp(path), config_out);
}

}  // namespace gct
