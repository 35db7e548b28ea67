#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>

#include "kernels_common.hpp"

namespace gct {

int worker_count() {
  if (const char* env = std::getenv("GCT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

namespace {

// Exceptions must not cross an OpenMP region boundary; keep the first one.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#pragma omp critical(gct_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

namespace parallel {

std::vector<std::vector<int>> match_pairs(const std::vector<TrainingPair>& pairs, const MatchingConfig& config) {
  std::vector<std::vector<int>> out(pairs.size());
  ExceptionSlot slot;
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::ptrdiff_t i = 0; i < n; ++i)
    slot.run([&] { out[i] = match_image_pair(*pairs[i].probe, *pairs[i].gallery, config); });
  slot.rethrow();
  return out;
}

Eigen::MatrixXd transfer_distance_matrix(const TemplateStore& store, std::span<const TestImage> probes,
                                         std::span<const TestImage> galleries, const TransferParams& params,
                                         DeltaCounter* counter) {
  detail::check_test_layouts(&store, probes, galleries);
  const auto np = static_cast<std::ptrdiff_t>(probes.size());
  const auto ng = static_cast<std::ptrdiff_t>(galleries.size());
  std::vector<std::vector<double>> gallery_scores(galleries.size());
  Eigen::MatrixXd D(np, ng);
  ExceptionSlot slot;
#pragma omp parallel num_threads(worker_count())
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t g = 0; g < ng; ++g)
      slot.run([&] { gallery_scores[g] = pose_scores(store, *galleries[g].pose, false); });
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < np; ++p)
      slot.run([&] {
        const auto probe_scores = pose_scores(store, *probes[p].pose, true);
        for (std::ptrdiff_t g = 0; g < ng; ++g) {
          const auto ranked = rank_references(store, probe_scores, gallery_scores[g], params.R);
          D(p, g) = transfer_distance_ranked(store, *probes[p].graph, *galleries[g].graph, ranked, params.k, counter);
        }
      });
  }
  slot.rethrow();
  return D;
}

Eigen::MatrixXd aligned_distance_matrix(std::span<const TestImage> probes, std::span<const TestImage> galleries,
                                        const MetricModel& metric, DeltaCounter* counter) {
  detail::check_test_layouts(nullptr, probes, galleries);
  const auto np = static_cast<std::ptrdiff_t>(probes.size());
  const auto ng = static_cast<std::ptrdiff_t>(galleries.size());
  Eigen::MatrixXd D(np, ng);
  ExceptionSlot slot;
#pragma omp parallel for collapse(2) schedule(static) num_threads(worker_count())
  for (std::ptrdiff_t p = 0; p < np; ++p)
    for (std::ptrdiff_t g = 0; g < ng; ++g)
      slot.run([&] { D(p, g) = distance_aligned(*probes[p].graph, *galleries[g].graph, metric, counter); });
  slot.rethrow();
  return D;
}

}  // namespace parallel
}  // namespace gct
