#include <doctest.h>

#include <cstdlib>

#include "gct/config.hpp"
#include "gct/errors.hpp"
#include "gct/kernels.hpp"
#include "gct/synth.hpp"
#include "test_support.hpp"

using namespace gct;

namespace {

struct Fixture {
  Config config;
  Dataset data;
  std::vector<TrainingPair> pairs;
  TemplateStore store;
  std::vector<TestImage> probes, galleries;

  Fixture() {
    config.metric.d_red = 16;
    SynthParams sp;
    sp.n_identities = 24;
    sp.seed = 8;
    data = synthetic_dataset(sp, config);
    for (int i = 0; i < 12; ++i)
      pairs.push_back({std::to_string(i), &data.images[2 * i].graph, &data.images[2 * i + 1].graph,
                       *data.images[2 * i].pose, *data.images[2 * i + 1].pose, i});
    store = build_template_store(pairs, {config.matching(), config.metric, 2});
    for (int i = 12; i < 24; ++i) {
      probes.push_back({&data.images[2 * i].graph, &*data.images[2 * i].pose});
      galleries.push_back({&data.images[2 * i + 1].graph, &*data.images[2 * i + 1].pose});
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("worker count honours GCT_THREADS") {
  setenv("GCT_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("GCT_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  unsetenv("GCT_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("parallel kernels reproduce the serial reference bit for bit") {
  const Fixture& f = fixture();
  for (const char* threads : {"1", "2", "4"}) {
    setenv("GCT_THREADS", threads, 1);
    CHECK(parallel::match_pairs(f.pairs, f.config.matching()) == serial::match_pairs(f.pairs, f.config.matching()));

    for (const TransferParams tp : {TransferParams{100, 3}, TransferParams{5, 1}, TransferParams{1, 2}}) {
      DeltaCounter cs, cp;
      const Eigen::MatrixXd s = serial::transfer_distance_matrix(f.store, f.probes, f.galleries, tp, &cs);
      const Eigen::MatrixXd p = parallel::transfer_distance_matrix(f.store, f.probes, f.galleries, tp, &cp);
      CHECK(s == p);
      CHECK(cs.value() == cp.value());
      CHECK(cs.value() == 144u * static_cast<unsigned>(tp.k) * 27u);
    }
    DeltaCounter as, ap;
    CHECK(serial::aligned_distance_matrix(f.probes, f.galleries, f.store.metric, &as) ==
          parallel::aligned_distance_matrix(f.probes, f.galleries, f.store.metric, &ap));
    CHECK(as.value() == ap.value());
  }
  unsetenv("GCT_THREADS");
}

TEST_CASE("distance matrix entries equal the single-pair functions") {
  const Fixture& f = fixture();
  const TransferParams tp{4, 2};
  const Eigen::MatrixXd D = parallel::transfer_distance_matrix(f.store, f.probes, f.galleries, tp);
  const Eigen::MatrixXd A = parallel::aligned_distance_matrix(f.probes, f.galleries, f.store.metric);
  for (int p = 0; p < 12; p += 5)
    for (int g = 0; g < 12; g += 3) {
      CHECK(D(p, g) == transfer_distance(f.store, *f.probes[p].graph, *f.probes[p].pose, *f.galleries[g].graph,
                                         *f.galleries[g].pose, tp));
      CHECK(A(p, g) == distance_aligned(*f.probes[p].graph, *f.galleries[g].graph, f.store.metric));
    }
}

TEST_CASE("store matches follow the per-pair matcher") {
  const Fixture& f = fixture();
  for (std::size_t i = 0; i < f.pairs.size(); ++i)
    CHECK(f.store.templates[i].gallery_of_probe ==
          match_image_pair(*f.pairs[i].probe, *f.pairs[i].gallery, f.config.matching()));
}

TEST_CASE("errors inside parallel regions reach the caller") {
  const Fixture& f = fixture();
  Rng rng(3);
  const AttributedGraph odd = testing::random_graph(decompose_into_patches(48, 140, 32, 32, 8, 12, 4), 24, rng);
  std::vector<TestImage> bad = f.galleries;
  bad[5].graph = &odd;
  CHECK_THROWS_AS(parallel::transfer_distance_matrix(f.store, f.probes, bad, {3, 1}), LayoutMismatchError);
  CHECK_THROWS_AS(serial::transfer_distance_matrix(f.store, f.probes, bad, {3, 1}), LayoutMismatchError);

  std::vector<TrainingPair> pairs = f.pairs;
  pairs[7].gallery = &odd;
  CHECK_THROWS_AS(parallel::match_pairs(pairs, f.config.matching()), LayoutMismatchError);
}
