#include "gct/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "gct/errors.hpp"
#include "gct/eval.hpp"
#include "gct/formats.hpp"
#include "gct/kernels.hpp"
#include "gct/synth.hpp"

namespace gct::cli {

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> R, k, trials;

  void attach(CLI::App* cmd, bool protocol_flags) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--seed", seed, "Master seed");
    if (protocol_flags) {
      cmd->add_option("--R", R, "Number of reference templates");
      cmd->add_option("--k", k, "Compact candidates per probe patch");
      cmd->add_option("--trials", trials, "Protocol trials");
    }
  }

  Config resolve(const std::optional<Config>& fallback = std::nullopt) const {
    Config c = !config_path.empty() ? load_config(config_path) : fallback.value_or(Config{});
    if (seed) c.protocol.seed = *seed;
    if (R) c.transfer.R = *R;
    if (k) c.transfer.k = *k;
    if (trials) c.protocol.trials = *trials;
    c.validate();
    return c;
  }
};

std::vector<TrainingPair> all_positive_pairs(const Dataset& data) {
  int pcam = data.index.entries.front().camera;
  for (const auto& e : data.index.entries) pcam = std::min(pcam, e.camera);
  std::vector<TrainingPair> pairs;
  const auto& E = data.index.entries;
  for (std::size_t a = 0; a < E.size(); ++a) {
    if (E[a].camera != pcam) continue;
    for (std::size_t b = 0; b < E.size(); ++b) {
      if (E[b].identity != E[a].identity || E[b].camera == pcam) continue;
      if (!data.images[a].pose || !data.images[b].pose)
        throw std::invalid_argument("entries " + E[a].image_id + " and " + E[b].image_id + " need joints");
      pairs.push_back({E[a].image_id + "|" + E[b].image_id, &data.images[a].graph, &data.images[b].graph,
                       *data.images[a].pose, *data.images[b].pose, E[a].identity});
    }
  }
  return pairs;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_synth(const fs::path& out_dir, const SynthParams& params, std::ostream& out) {
  const DatasetIndex index = write_synthetic_dataset(out_dir, params);
  out << "wrote " << index.entries.size() << " images, " << params.n_identities << " identities to "
      << (out_dir / "manifest.json").string() << "\n";
  return kOk;
}

int cmd_build_templates(const fs::path& manifest, const Overrides& ov, const fs::path& out_path, std::ostream& out) {
  const Config config = ov.resolve();
  const Dataset data = load_dataset(load_manifest(manifest), config);
  const auto pairs = all_positive_pairs(data);
  if (pairs.empty()) throw std::invalid_argument("manifest has no positive cross-camera pairs");
  const TemplateStore store = build_template_store(pairs, {config.matching(), config.metric, config.protocol.seed});
  save_store(out_path, store, config);
  out << "templates: " << store.templates.size() << "\n"
      << "patches per template: " << store.patches_per_template() << "\n"
      << "metric: " << store.metric.input_dim() << " -> " << store.metric.reduced_dim() << " dims\n"
      << "store: " << out_path.string() << "\n";
  return kOk;
}

int cmd_evaluate(const fs::path& manifest, const std::string& store_path, const Overrides& ov, const fs::path& csv_path,
                 bool serial, std::ostream& out) {
  std::optional<TemplateStore> store;
  std::optional<Config> store_config;
  if (!store_path.empty()) {
    if (!fs::exists(store_path)) throw MissingDataError(store_path, "missing template store: " + store_path);
    Config c;
    store = load_store(store_path, &c);
    store_config = c;
  }
  const Config config = ov.resolve(store_config);
  const Dataset data = load_dataset(load_manifest(manifest), config);

  CmcCurve transfer, aligned;
  std::uint64_t calls = 0, pairs = 0;
  if (store) {
    for (const auto& img : data.images)
      if (!img.graph.layout.same_geometry(store->layout))
        throw LayoutMismatchError("manifest images do not match the template store layout");
    // Identities whose images trained the store are excluded when others remain.
    std::set<int> trained;
    for (const auto& t : store->templates) {
      const auto bar = t.pair_id.find('|');
      const int i = data.index.find(t.pair_id.substr(0, bar));
      if (i >= 0) trained.insert(data.index.entries[i].identity);
    }
    std::vector<int> test_ids;
    for (int id : data.index.identities())
      if (!trained.count(id)) test_ids.push_back(id);
    if (test_ids.size() < 2) test_ids = data.index.identities();
    const TrialResult r = evaluate_with_store(data, *store, test_ids, config, config.protocol.seed, !serial);
    transfer = r.transfer;
    aligned = r.aligned;
    calls = r.delta_calls;
    pairs = r.test_pairs;
  } else {
    const ProtocolResult r = run_protocol(data, config, {.parallel = !serial});
    transfer = r.transfer;
    aligned = r.aligned;
    for (const auto& t : r.trials) {
      calls += t.delta_calls;
      pairs += t.test_pairs;
    }
  }
  out << format_cmc_table(transfer, aligned);
  out << "delta evaluations: " << calls << " over " << pairs << " test pairs ("
      << (pairs ? calls / pairs : 0) << " per pair)\n";
  write_text(csv_path, format_cmc_csv(transfer));
  out << "csv: " << csv_path.string() << "\n";
  return kOk;
}

int cmd_match_pair(const fs::path& manifest, const std::string& store_path, const std::string& probe_id,
                   const std::string& gallery_id, const std::string& csv_path, std::ostream& out) {
  if (!fs::exists(store_path)) throw MissingDataError(store_path, "missing template store: " + store_path);
  Config config;
  const TemplateStore store = load_store(store_path, &config);
  const DatasetIndex index = load_manifest(manifest);
  const int pi = index.find(probe_id), gi = index.find(gallery_id);
  if (pi < 0 || gi < 0) throw std::invalid_argument("unknown image id " + (pi < 0 ? probe_id : gallery_id));
  const LoadedImage probe = load_image(index.entries[pi], config);
  const LoadedImage gallery = load_image(index.entries[gi], config);
  if (!probe.graph.layout.same_geometry(store.layout) || !gallery.graph.layout.same_geometry(store.layout))
    throw LayoutMismatchError("images do not match the template store layout");

  const std::vector<int> matches = match_image_pair(probe.graph, gallery.graph, config.matching());
  std::ostringstream csv;
  csv << "probe,gallery,delta,dx_px,dy_px\n";
  char buf[160];
  for (int p = 0; p < probe.graph.size(); ++p) {
    const int g = matches[p];
    const double d = metric_distance(store.metric, probe.graph.feature(p).transpose(), gallery.graph.feature(g).transpose());
    const Point2 a = store.layout.centers[p], b = store.layout.centers[g];
    std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%g,%g\n", p, g, d, b.x - a.x, b.y - a.y);
    csv << buf;
  }
  if (csv_path.empty() || csv_path == "-")
    out << csv.str();
  else
    write_text(csv_path, csv.str());
  return kOk;
}

int cmd_pose_sim(const fs::path& manifest, const std::vector<std::string>& ids, std::ostream& out) {
  const DatasetIndex index = load_manifest(manifest);
  std::vector<PoseContext> poses;
  for (const auto& id : ids) {
    const int i = index.find(id);
    if (i < 0) throw std::invalid_argument("unknown image id " + id);
    if (!index.entries[i].joints) throw std::invalid_argument("entry " + id + " has no joints");
    poses.push_back(compute_pose_context(*index.entries[i].joints));
  }
  char buf[160];
  auto print = [&](const char* label, const PoseContext& a, const PoseContext& b) {
    const PoseSimilarity s = pose_similarity_terms(a, b);
    std::snprintf(buf, sizeof buf, "%s S_psi=%.6f S_phi=%.6f O=%.6f\n", label, s.s_psi, s.s_phi, s.value());
    out << buf;
  };
  if (poses.size() == 2) {
    print("image", poses[0], poses[1]);
  } else {
    print("probe", poses[0], poses[2]);
    print("gallery", poses[1], poses[3]);
    std::snprintf(buf, sizeof buf, "pair S=%.6f\n", pair_similarity(poses[0], poses[1], poses[2], poses[3]));
    out << buf;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph correspondence transfer for person re-identification"};
  app.require_subcommand(1);

  fs::path synth_out;
  SynthParams synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic two-camera dataset");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--identities", synth.n_identities, "Number of identities")->check(CLI::Range(2, 1 << 20));
  synth_cmd->add_option("--shift-max", synth.shift_max_px, "Maximum vertical shift of the second view (px)")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth.seed, "Seed");

  fs::path manifest, out_path;
  std::string store_path;
  bool serial = false;
  Overrides build_ov, eval_ov;
  auto* build_cmd = app.add_subcommand("build-templates", "Learn correspondence templates and the patch metric");
  build_cmd->add_option("--manifest", manifest, "Dataset manifest (JSON)")->required();
  build_cmd->add_option("--out", out_path, "Template store output")->required();
  build_ov.attach(build_cmd, false);

  auto* eval_cmd = app.add_subcommand("evaluate", "CMC evaluation (protocol, or against a prebuilt store)");
  eval_cmd->add_option("--manifest", manifest, "Dataset manifest (JSON)")->required();
  eval_cmd->add_option("--store", store_path, "Template store; without it the repeated-split protocol runs");
  eval_cmd->add_option("--out", out_path, "CMC CSV output")->default_val("cmc.csv");
  eval_cmd->add_flag("--serial", serial, "Use the serial reference kernels");
  eval_ov.attach(eval_cmd, true);

  std::string probe_id, gallery_id, match_out;
  auto* match_cmd = app.add_subcommand("match-pair", "Dump graph-matching correspondences of two images");
  match_cmd->add_option("--manifest", manifest, "Dataset manifest (JSON)")->required();
  match_cmd->add_option("--store", store_path, "Template store (config and metric)")->required();
  match_cmd->add_option("--probe", probe_id, "Probe image id")->required();
  match_cmd->add_option("--gallery", gallery_id, "Gallery image id")->required();
  match_cmd->add_option("--out", match_out, "CSV output (default stdout)");

  std::vector<std::string> pose_ids;
  auto* pose_cmd = app.add_subcommand("pose-sim", "Pose context similarity of two images (or two pairs)");
  pose_cmd->add_option("--manifest", manifest, "Dataset manifest (JSON)")->required();
  pose_cmd->add_option("ids", pose_ids, "Two image ids, or four: probe_a gallery_a probe_b gallery_b")
      ->required()
      ->expected(2, 4);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*synth_cmd) return cmd_synth(synth_out, synth, out);
    if (*build_cmd) return cmd_build_templates(manifest, build_ov, out_path, out);
    if (*eval_cmd) return cmd_evaluate(manifest, store_path, eval_ov, out_path, serial, out);
    if (*match_cmd) return cmd_match_pair(manifest, store_path, probe_id, gallery_id, match_out, out);
    if (*pose_cmd) {
      if (pose_ids.size() != 2 && pose_ids.size() != 4) {
        err << "pose-sim takes two or four image ids\n";
        return kFailure;
      }
      return cmd_pose_sim(manifest, pose_ids, out);
    }
  } catch (const ManifestError& e) {
    err << "error: " << e.what() << "\n";
    return kBadManifest;
  } catch (const MissingDataError& e) {
    err << "error: missing data file " << e.path() << "\n";
    return kMissingData;
  } catch (const ConfigError& e) {
    err << "error: invalid config: " << e.what() << "\n";
    return kBadConfig;
  } catch (const LayoutMismatchError& e) {
    err << "error: layout mismatch: " << e.what() << "\n";
    return kLayoutMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace gct::cli
