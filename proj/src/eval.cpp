#include "gct/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gct/kernels.hpp"
#include "gct/random.hpp"

namespace gct {

Split split_dataset(const DatasetIndex& index, std::uint64_t seed) {
  std::vector<int> ids = index.identities();
  if (ids.size() < 2) throw std::invalid_argument("split needs at least 2 identities");
  Rng rng(derive_seed(seed, SeedStream::Split));
  portable_shuffle(ids.begin(), ids.end(), rng);
  const std::size_t n_train = (ids.size() + 1) / 2;
  Split s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<int> match_ranks(const Eigen::MatrixXd& D, const std::vector<int>& probe_ids,
                             const std::vector<int>& gallery_ids) {
  if (D.rows() != static_cast<Eigen::Index>(probe_ids.size()) ||
      D.cols() != static_cast<Eigen::Index>(gallery_ids.size()))
    throw std::invalid_argument("distance matrix shape does not match the id lists");
  std::vector<int> ranks(probe_ids.size());
  for (Eigen::Index p = 0; p < D.rows(); ++p) {
    Eigen::Index best = -1;
    for (Eigen::Index g = 0; g < D.cols(); ++g)
      if (gallery_ids[g] == probe_ids[p] && (best < 0 || D(p, g) < D(p, best))) best = g;
    if (best < 0) throw std::invalid_argument("probe identity " + std::to_string(probe_ids[p]) + " has no gallery match");
    int rank = 1;
    for (Eigen::Index g = 0; g < D.cols(); ++g)
      if (D(p, g) < D(p, best) || (D(p, g) == D(p, best) && g < best)) ++rank;
    ranks[p] = rank;
  }
  return ranks;
}

CmcCurve cmc_curve(const Eigen::MatrixXd& D, const std::vector<int>& probe_ids, const std::vector<int>& gallery_ids) {
  const auto ranks = match_ranks(D, probe_ids, gallery_ids);
  std::vector<int> hist(gallery_ids.size() + 1, 0);
  for (int r : ranks) ++hist[r];
  CmcCurve c;
  c.rates.resize(gallery_ids.size());
  int cum = 0;
  for (std::size_t r = 1; r <= gallery_ids.size(); ++r) {
    cum += hist[r];
    c.rates[r - 1] = 100.0 * cum / static_cast<double>(ranks.size());
  }
  return c;
}

CmcCurve average_curves(const std::vector<CmcCurve>& curves) {
  if (curves.empty()) throw std::invalid_argument("no curves to average");
  CmcCurve out;
  out.rates.assign(curves.front().rates.size(), 0.0);
  for (const auto& c : curves) {
    if (c.rates.size() != out.rates.size()) throw std::invalid_argument("curves differ in length");
    for (std::size_t r = 0; r < c.rates.size(); ++r) out.rates[r] += c.rates[r];
  }
  for (double& v : out.rates) v /= static_cast<double>(curves.size());
  return out;
}

namespace {

int probe_camera(const DatasetIndex& index) {
  int cam = index.entries.front().camera;
  for (const auto& e : index.entries) cam = std::min(cam, e.camera);
  return cam;
}

const PoseContext& pose_of(const Dataset& data, int i) {
  const auto& pose = data.images[i].pose;
  if (!pose) throw std::invalid_argument("entry " + data.index.entries[i].image_id + " has no joints");
  return *pose;
}

struct TestSets {
  std::vector<TestImage> probes, galleries;
  std::vector<int> probe_ids, gallery_image_ids;
};

TestSets draw_test_sets(const Dataset& data, const std::vector<int>& test_ids, std::uint64_t draw_seed,
                        bool multi_shot) {
  const int pcam = probe_camera(data.index);
  TestSets ts;
  for (int id : test_ids) {
    std::vector<int> pimgs, gimgs;
    for (std::size_t i = 0; i < data.index.entries.size(); ++i) {
      const auto& e = data.index.entries[i];
      if (e.identity != id) continue;
      (e.camera == pcam ? pimgs : gimgs).push_back(static_cast<int>(i));
    }
    if (pimgs.empty() || gimgs.empty())
      throw std::invalid_argument("identity " + std::to_string(id) + " is not seen by two cameras");
    Rng rng(derive_seed(draw_seed, SeedStream::ProbeDraw, static_cast<std::uint64_t>(id)));
    const int p = pimgs[uniform_index(rng, pimgs.size())];
    ts.probes.push_back({&data.images[p].graph, &pose_of(data, p)});
    ts.probe_ids.push_back(id);
    if (!multi_shot) gimgs = {gimgs[uniform_index(rng, gimgs.size())]};
    for (int g : gimgs) {
      ts.galleries.push_back({&data.images[g].graph, &pose_of(data, g)});
      ts.gallery_image_ids.push_back(id);
    }
  }
  return ts;
}

// Collapses gallery images of the same identity by the minimum distance.
Eigen::MatrixXd aggregate_by_identity(const Eigen::MatrixXd& D, const std::vector<int>& image_ids,
                                      const std::vector<int>& ids) {
  std::map<int, Eigen::Index> col;
  for (std::size_t i = 0; i < ids.size(); ++i) col[ids[i]] = static_cast<Eigen::Index>(i);
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(D.rows(), static_cast<Eigen::Index>(ids.size()),
                                                  std::numeric_limits<double>::infinity());
  for (Eigen::Index g = 0; g < D.cols(); ++g) {
    const Eigen::Index c = col.at(image_ids[g]);
    out.col(c) = out.col(c).cwiseMin(D.col(g));
  }
  return out;
}

std::vector<TrainingPair> training_pairs(const Dataset& data, const std::vector<int>& train_ids) {
  const int pcam = probe_camera(data.index);
  const std::set<int> wanted(train_ids.begin(), train_ids.end());
  std::vector<TrainingPair> pairs;
  const auto& entries = data.index.entries;
  for (int id : train_ids)
    for (std::size_t a = 0; a < entries.size(); ++a) {
      if (entries[a].identity != id || entries[a].camera != pcam) continue;
      for (std::size_t b = 0; b < entries.size(); ++b) {
        if (entries[b].identity != id || entries[b].camera == pcam) continue;
        pairs.push_back({entries[a].image_id + "|" + entries[b].image_id, &data.images[a].graph,
                         &data.images[b].graph, pose_of(data, static_cast<int>(a)),
                         pose_of(data, static_cast<int>(b)), id});
      }
    }
  return pairs;
}

}  // namespace

TrialResult evaluate_with_store(const Dataset& data, const TemplateStore& store, const std::vector<int>& test_ids,
                                const Config& config, std::uint64_t draw_seed, bool parallel) {
  const TestSets ts = draw_test_sets(data, test_ids, draw_seed, config.protocol.multi_shot);
  DeltaCounter counter;
  const Eigen::MatrixXd Dt =
      parallel ? parallel::transfer_distance_matrix(store, ts.probes, ts.galleries, config.transfer, &counter)
               : serial::transfer_distance_matrix(store, ts.probes, ts.galleries, config.transfer, &counter);
  const Eigen::MatrixXd Da = parallel ? parallel::aligned_distance_matrix(ts.probes, ts.galleries, store.metric)
                                      : serial::aligned_distance_matrix(ts.probes, ts.galleries, store.metric);
  TrialResult r;
  r.transfer = cmc_curve(aggregate_by_identity(Dt, ts.gallery_image_ids, test_ids), ts.probe_ids, test_ids);
  r.aligned = cmc_curve(aggregate_by_identity(Da, ts.gallery_image_ids, test_ids), ts.probe_ids, test_ids);
  r.delta_calls = counter.value();
  r.test_pairs = static_cast<std::uint64_t>(ts.probes.size() * ts.galleries.size());
  return r;
}

ProtocolResult run_protocol(const Dataset& data, const Config& config, const ProtocolOptions& options) {
  config.validate();
  ProtocolResult out;
  std::vector<CmcCurve> tc, ac;
  for (int t = 0; t < config.protocol.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(config.protocol.seed, SeedStream::Trial, static_cast<std::uint64_t>(t));
    const Split split = split_dataset(data.index, trial_seed);
    const auto pairs = training_pairs(data, split.train);
    if (pairs.empty()) throw std::invalid_argument("training split has no positive pairs");
    const TemplateStore store = build_template_store(pairs, {config.matching(), config.metric, trial_seed});
    out.trials.push_back(evaluate_with_store(data, store, split.test, config, trial_seed, options.parallel));
    tc.push_back(out.trials.back().transfer);
    ac.push_back(out.trials.back().aligned);
  }
  out.transfer = average_curves(tc);
  out.aligned = average_curves(ac);
  return out;
}

std::string format_cmc_table(const CmcCurve& transfer, const CmcCurve& aligned) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-6s %12s %12s\n", "rank", "transfer(%)", "aligned(%)");
  os << buf;
  for (int r : {1, 5, 10, 20}) {
    if (r > static_cast<int>(transfer.rates.size())) break;
    std::snprintf(buf, sizeof buf, "%-6d %12.2f %12.2f\n", r, transfer.at_rank(r), aligned.at_rank(r));
    os << buf;
  }
  return os.str();
}

std::string format_cmc_csv(const CmcCurve& curve) {
  std::ostringstream os;
  os << "rank,rate\n";
  char buf[64];
  for (std::size_t r = 0; r < curve.rates.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f\n", r + 1, curve.rates[r]);
    os << buf;
  }
  return os.str();
}

}  // namespace gct
