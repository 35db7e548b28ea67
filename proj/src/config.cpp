#include "gct/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

namespace gct {

using nlohmann::json;

void Config::validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive("patch.w", patch.w);
  positive("patch.h", patch.h);
  positive("patch.stride_w", patch.stride_w);
  positive("patch.stride_h", patch.stride_h);
  positive("patch.n_stripes", patch.n_stripes);
  if (patch.expand_rows < 0) throw ConfigError("patch.expand_rows must be >= 0");
  if (patch.bins_per_channel < 2) throw ConfigError("patch.bins_per_channel must be >= 2");
  positive("affinity.sigma_p", affinity.sigma_p);
  positive("affinity.sigma_f", affinity.sigma_f);
  positive("solver.beta", solver.beta);
  positive("solver.max_iters", solver.max_iters);
  positive("solver.tol", solver.tol);
  positive("solver.sinkhorn_sweeps", solver.sinkhorn_sweeps);
  if (pose_bins != 8) throw ConfigError("pose.n_bins must be 8");
  positive("transfer.R", transfer.R);
  positive("transfer.k", transfer.k);
  positive("metric.d_red", metric.d_red);
  if (metric.reg < 0) throw ConfigError("metric.reg must be >= 0");
  positive("protocol.trials", protocol.trials);
}

namespace {

// Reads `key` from `obj` into `out` if present; rejects unknown keys.
class Section {
 public:
  Section(const json& root, const char* name) : name_(name) {
    if (root.contains(name)) {
      if (!root[name].is_object()) throw ConfigError(std::string(name) + " must be an object");
      obj_ = &root[name];
    }
  }
  template <class T>
  Section& get(const char* key, T& out) {
    seen_.push_back(key);
    if (!obj_ || !obj_->contains(key)) return *this;
    try {
      out = (*obj_)[key].get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name_ + "." + key + " has the wrong type");
    }
    return *this;
  }
  void finish() const {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items())
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) throw ConfigError("unknown key " + name_ + "." + k);
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::vector<std::string> seen_;
};

}  // namespace

Config config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  static const char* sections[] = {"patch", "affinity", "solver", "pose", "transfer", "metric", "protocol"};
  for (const auto& [k, v] : root.items())
    if (std::find(std::begin(sections), std::end(sections), k) == std::end(sections))
      throw ConfigError("unknown config section " + k);

  Config c;
  Section(root, "patch")
      .get("w", c.patch.w)
      .get("h", c.patch.h)
      .get("stride_w", c.patch.stride_w)
      .get("stride_h", c.patch.stride_h)
      .get("n_stripes", c.patch.n_stripes)
      .get("expand_rows", c.patch.expand_rows)
      .get("bins_per_channel", c.patch.bins_per_channel)
      .finish();
  Section(root, "affinity").get("sigma_p", c.affinity.sigma_p).get("sigma_f", c.affinity.sigma_f).finish();
  Section(root, "solver")
      .get("beta", c.solver.beta)
      .get("max_iters", c.solver.max_iters)
      .get("tol", c.solver.tol)
      .get("sinkhorn_sweeps", c.solver.sinkhorn_sweeps)
      .finish();
  Section(root, "pose").get("n_bins", c.pose_bins).finish();
  Section(root, "transfer").get("R", c.transfer.R).get("k", c.transfer.k).finish();
  Section(root, "metric").get("d_red", c.metric.d_red).get("reg", c.metric.reg).finish();
  Section(root, "protocol")
      .get("trials", c.protocol.trials)
      .get("seed", c.protocol.seed)
      .get("multi_shot", c.protocol.multi_shot)
      .finish();
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const Config& c) {
  const json j = {
      {"patch",
       {{"w", c.patch.w},
        {"h", c.patch.h},
        {"stride_w", c.patch.stride_w},
        {"stride_h", c.patch.stride_h},
        {"n_stripes", c.patch.n_stripes},
        {"expand_rows", c.patch.expand_rows},
        {"bins_per_channel", c.patch.bins_per_channel}}},
      {"affinity", {{"sigma_p", c.affinity.sigma_p}, {"sigma_f", c.affinity.sigma_f}}},
      {"solver",
       {{"beta", c.solver.beta},
        {"max_iters", c.solver.max_iters},
        {"tol", c.solver.tol},
        {"sinkhorn_sweeps", c.solver.sinkhorn_sweeps}}},
      {"pose", {{"n_bins", c.pose_bins}}},
      {"transfer", {{"R", c.transfer.R}, {"k", c.transfer.k}}},
      {"metric", {{"d_red", c.metric.d_red}, {"reg", c.metric.reg}}},
      {"protocol", {{"trials", c.protocol.trials}, {"seed", c.protocol.seed}, {"multi_shot", c.protocol.multi_shot}}},
  };
  return j.dump(2);
}

}  // namespace gct
