#include "gct/transfer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gct/errors.hpp"
#include "gct/kernels.hpp"
#include "gct/random.hpp"

namespace gct {

namespace {

void check_pair_layout(const AttributedGraph& probe, const AttributedGraph& gallery) {
  if (!probe.layout.same_geometry(gallery.layout))
    throw LayoutMismatchError("probe and gallery graphs use different patch configurations");
}

inline double delta(const MetricModel& metric, const AttributedGraph& probe, int p, const AttributedGraph& gallery,
                    int g) {
  return metric_distance(metric, probe.feature(p).transpose(), gallery.feature(g).transpose());
}

}  // namespace

std::vector<VectorPair> similar_patch_pairs(const std::vector<TrainingPair>& pairs,
                                            const std::vector<CorrespondenceTemplate>& templates) {
  std::vector<VectorPair> out;
  for (std::size_t t = 0; t < templates.size(); ++t)
    for (int p = 0; p < templates[t].size(); ++p)
      out.emplace_back(pairs[t].probe->feature(p).transpose(),
                       pairs[t].gallery->feature(templates[t].gallery_of_probe[p]).transpose());
  return out;
}

std::vector<VectorPair> dissimilar_patch_pairs(const std::vector<TrainingPair>& pairs, std::size_t count,
                                               std::uint64_t seed) {
  std::vector<VectorPair> out;
  if (pairs.size() < 2) return out;
  bool multiple_ids = false;
  for (const auto& p : pairs) multiple_ids |= p.identity != pairs.front().identity;
  if (!multiple_ids) return out;

  Rng rng(derive_seed(seed, SeedStream::Dissimilar));
  out.reserve(count);
  while (out.size() < count) {
    const auto a = uniform_index(rng, pairs.size());
    const auto b = uniform_index(rng, pairs.size());
    if (pairs[a].identity == pairs[b].identity) continue;
    const AttributedGraph& ga = *pairs[a].probe;
    const AttributedGraph& gb = *pairs[b].gallery;
    const auto pa = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(ga.size())));
    const auto pb = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(gb.size())));
    out.emplace_back(ga.feature(pa).transpose(), gb.feature(pb).transpose());
  }
  return out;
}

TemplateStore build_template_store(const std::vector<TrainingPair>& pairs, const StoreParams& params) {
  if (pairs.empty()) throw std::invalid_argument("template store needs at least one positive pair");
  const PatchLayout& layout = pairs.front().probe->layout;
  for (const auto& p : pairs)
    if (!p.probe->layout.same_geometry(layout) || !p.gallery->layout.same_geometry(layout))
      throw LayoutMismatchError("training pair " + p.pair_id + " uses a different patch configuration");

  TemplateStore store;
  store.layout = layout;
  auto matches = parallel::match_pairs(pairs, params.matching);
  store.templates.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    store.templates.push_back({pairs[i].pair_id, std::move(matches[i]), pairs[i].probe_pose, pairs[i].gallery_pose});

  const auto similar = similar_patch_pairs(pairs, store.templates);
  const auto dissimilar = dissimilar_patch_pairs(pairs, similar.size(), params.seed);
  if (dissimilar.empty())
    store.metric = MetricModel::euclidean(pairs.front().probe->feature_dim());
  else
    store.metric = fit_kissme(similar, dissimilar, params.kissme);
  return store;
}

std::vector<RankedReference> rank_references(const TemplateStore& store, const std::vector<double>& probe_scores,
                                             const std::vector<double>& gallery_scores, int R) {
  if (R < 1) throw std::invalid_argument("R must be >= 1");
  std::vector<RankedReference> ranked(store.templates.size());
  for (std::size_t t = 0; t < ranked.size(); ++t)
    ranked[t] = {static_cast<int>(t), probe_scores[t] * gallery_scores[t]};
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(R), ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [&](const RankedReference& a, const RankedReference& b) {
                      if (a.similarity != b.similarity) return a.similarity > b.similarity;
                      return store.templates[a.template_index].pair_id < store.templates[b.template_index].pair_id;
                    });
  ranked.resize(keep);
  return ranked;
}

std::vector<double> pose_scores(const TemplateStore& store, const PoseContext& pose, bool probe_side) {
  std::vector<double> s(store.templates.size());
  for (std::size_t t = 0; t < s.size(); ++t)
    s[t] = pose_similarity(pose, probe_side ? store.templates[t].probe_pose : store.templates[t].gallery_pose);
  return s;
}

std::vector<RankedReference> select_references(const TemplateStore& store, const PoseContext& test_probe_pose,
                                               const PoseContext& test_gallery_pose, int R) {
  return rank_references(store, pose_scores(store, test_probe_pose, true), pose_scores(store, test_gallery_pose, false),
                         R);
}

double distance_full(const AttributedGraph& probe, const AttributedGraph& gallery,
                     const std::vector<const CorrespondenceTemplate*>& refs, const MetricModel& metric,
                     DeltaCounter* counter) {
  if (refs.empty()) throw std::invalid_argument("distance_full needs at least one reference");
  check_pair_layout(probe, gallery);
  const int n = probe.size();
  double sum = 0.0;
  for (const auto* ref : refs) {
    if (ref->size() != n) throw LayoutMismatchError("template " + ref->pair_id + " does not match the probe layout");
    for (int p = 0; p < n; ++p) sum += delta(metric, probe, p, gallery, ref->gallery_of_probe[p]);
  }
  const auto calls = static_cast<std::uint64_t>(refs.size()) * static_cast<std::uint64_t>(n);
  if (counter) counter->add(calls);
  return sum / static_cast<double>(calls);
}

CompactTemplate ensemble_templates(const std::vector<const CorrespondenceTemplate*>& refs,
                                   const PatchLayout& probe_layout, const PatchLayout& gallery_layout, int k) {
  if (refs.empty()) throw std::invalid_argument("ensemble needs at least one reference");
  const int n = probe_layout.patch_count();
  const int n_gallery = gallery_layout.patch_count();
  if (k < 1 || k > n_gallery) throw std::invalid_argument("k must lie in [1, gallery patch count]");
  for (const auto* ref : refs)
    if (ref->size() != n) throw LayoutMismatchError("template " + ref->pair_id + " does not match the probe layout");

  CompactTemplate out;
  out.k = k;
  out.candidates.resize(static_cast<std::size_t>(n) * k);
  std::vector<int> order(n_gallery);
  std::vector<double> d2(n_gallery);
  const double inv_r = 1.0 / static_cast<double>(refs.size());
  for (int p = 0; p < n; ++p) {
    const Point2 c = probe_layout.centers[p];
    double ox = 0.0, oy = 0.0;
    for (const auto* ref : refs) {
      const Point2 g = gallery_layout.centers[ref->gallery_of_probe[p]];
      ox += g.x - c.x;
      oy += g.y - c.y;
    }
    const double tx = c.x + ox * inv_r, ty = c.y + oy * inv_r;
    for (int g = 0; g < n_gallery; ++g) {
      const double dx = gallery_layout.centers[g].x - tx, dy = gallery_layout.centers[g].y - ty;
      d2[g] = dx * dx + dy * dy;
    }
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](int a, int b) { return d2[a] != d2[b] ? d2[a] < d2[b] : a < b; });
    std::copy_n(order.begin(), k, out.candidates.begin() + static_cast<std::ptrdiff_t>(p) * k);
  }
  return out;
}

double distance_ensemble(const AttributedGraph& probe, const AttributedGraph& gallery, const CompactTemplate& compact,
                         const MetricModel& metric, DeltaCounter* counter) {
  check_pair_layout(probe, gallery);
  const int n = probe.size();
  if (compact.k < 1 || compact.probe_count() != n)
    throw LayoutMismatchError("compact template does not match the probe layout");
  double sum = 0.0;
  for (int i = 0; i < compact.k; ++i)
    for (int p = 0; p < n; ++p)
      sum += delta(metric, probe, p, gallery, compact.candidates[static_cast<std::size_t>(p) * compact.k + i]);
  const auto calls = static_cast<std::uint64_t>(compact.k) * static_cast<std::uint64_t>(n);
  if (counter) counter->add(calls);
  return sum / static_cast<double>(calls);
}

double distance_aligned(const AttributedGraph& probe, const AttributedGraph& gallery, const MetricModel& metric,
                        DeltaCounter* counter) {
  check_pair_layout(probe, gallery);
  const int n = probe.size();
  double sum = 0.0;
  for (int p = 0; p < n; ++p) sum += delta(metric, probe, p, gallery, p);
  if (counter) counter->add(static_cast<std::uint64_t>(n));
  return sum / n;
}

double transfer_distance_ranked(const TemplateStore& store, const AttributedGraph& probe,
                                const AttributedGraph& gallery, const std::vector<RankedReference>& ranked, int k,
                                DeltaCounter* counter) {
  std::vector<const CorrespondenceTemplate*> refs;
  refs.reserve(ranked.size());
  for (const auto& r : ranked) refs.push_back(&store.templates[r.template_index]);
  const CompactTemplate compact = ensemble_templates(refs, probe.layout, gallery.layout, k);
  return distance_ensemble(probe, gallery, compact, store.metric, counter);
}

double transfer_distance(const TemplateStore& store, const AttributedGraph& probe, const PoseContext& probe_pose,
                         const AttributedGraph& gallery, const PoseContext& gallery_pose, const TransferParams& params,
                         DeltaCounter* counter) {
  if (!probe.layout.same_geometry(store.layout) || !gallery.layout.same_geometry(store.layout))
    throw LayoutMismatchError("test images do not match the template store layout");
  return transfer_distance_ranked(store, probe, gallery, select_references(store, probe_pose, gallery_pose, params.R),
                                  params.k, counter);
}

}  // namespace gct
