#include <doctest.h>

#include <cmath>

#include "gct/affinity.hpp"
#include "test_support.hpp"

using namespace gct;

namespace {

Eigen::RowVectorXd vec(std::initializer_list<double> v) {
  Eigen::RowVectorXd r(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

AttributedGraph small_graph(Rng& rng, int n, int dim) {
  PatchLayout L;
  L.image_width_px = 100;
  L.image_height_px = 100;
  L.n_rows = n;
  L.n_cols = 1;
  L.n_stripes = 1;
  AttributedGraph g;
  g.layout = L;
  g.features.resize(n, dim);
  for (int i = 0; i < n; ++i) {
    g.positions_norm.push_back({uniform01(rng), uniform01(rng)});
    Eigen::RowVectorXd f(dim);
    for (int j = 0; j < dim; ++j) f(j) = uniform01(rng);
    g.features.row(i) = f / f.norm();
  }
  return g;
}

}  // namespace

TEST_CASE("node affinity examples") {
  const AffinityParams unit{1.0, 1.0};
  const auto f = vec({0.6, 0.8});
  CHECK(node_affinity({0.2, 0.3}, {0.2, 0.3}, f, f, unit) == 1.0);
  CHECK(node_affinity({0, 0}, {0.3, 0.4}, f, f, unit) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(std::exp(-0.5) == doctest::Approx(0.60653).epsilon(1e-5));
  CHECK(node_affinity({0, 0}, {0, 0}, vec({1, 0}), vec({0, 1}), unit) ==
        doctest::Approx(0.24312).epsilon(1e-5));
}

TEST_CASE("edge affinity examples") {
  const AffinityParams unit{1.0, 1.0};
  const auto a = vec({1, 0}), b = vec({0, 1});
  // Pure translation with identical features.
  CHECK(edge_affinity({0.1, 0.1}, {0.3, 0.2}, {0.4, 0.5}, {0.6, 0.6}, a, b, a, b, unit) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // Probe offset (0, 0.1), gallery offset (0, 0.2).
  CHECK(edge_affinity({0, 0}, {0, 0.1}, {0, 0}, {0, 0.2}, a, b, a, b, unit) ==
        doctest::Approx(std::exp(-0.1)).epsilon(1e-14));
  CHECK(std::exp(-0.1) == doctest::Approx(0.90484).epsilon(1e-5));
}

TEST_CASE("edge affinity is symmetric under swapping the candidates") {
  Rng rng(3);
  const AffinityParams p{0.2, 1.0};
  for (int t = 0; t < 200; ++t) {
    Point2 q[4];
    Eigen::RowVectorXd f[4];
    for (int i = 0; i < 4; ++i) {
      q[i] = {uniform01(rng), uniform01(rng)};
      f[i] = Eigen::RowVectorXd::Random(5);
    }
    // (i1,i2) vs (j1,j2) against (j1,j2) vs (i1,i2).
    const double ab = edge_affinity(q[0], q[1], q[2], q[3], f[0], f[1], f[2], f[3], p);
    const double ba = edge_affinity(q[1], q[0], q[3], q[2], f[1], f[0], f[3], f[2], p);
    CHECK(ab == ba);
    CHECK(ab > 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("1x1 affinity matrix is the node affinity") {
  Rng rng(5);
  const AttributedGraph a = small_graph(rng, 3, 4), b = small_graph(rng, 3, 4);
  const AffinityParams p;
  const MatchProblem prob{{2}, {1}};
  const Eigen::MatrixXd K = build_affinity_matrix(a, b, prob, p);
  REQUIRE(K.rows() == 1);
  CHECK(K(0, 0) == node_affinity(a.positions_norm[2], b.positions_norm[1], a.feature(2), b.feature(1), p));
}

TEST_CASE("self matching has a unit diagonal") {
  Rng rng(6);
  const AttributedGraph a = small_graph(rng, 4, 6);
  const MatchProblem prob{{0, 1, 2, 3}, {0, 1, 2, 3}};
  const Eigen::MatrixXd K = build_affinity_matrix(a, a, prob, {});
  for (int i = 0; i < 4; ++i) CHECK(K(i * 4 + i, i * 4 + i) == 1.0);
}

TEST_CASE("2x2 matrix matches a hand-assembled one") {
  Rng rng(8);
  const AffinityParams p{0.3, 0.7};
  for (int t = 0; t < 20; ++t) {
    const AttributedGraph a = small_graph(rng, 4, 3), b = small_graph(rng, 5, 3);
    const MatchProblem prob{{3, 1}, {0, 4}};
    const Eigen::MatrixXd K = build_affinity_matrix(a, b, prob, p);
    // Candidates in probe-major order: (3,0), (3,4), (1,0), (1,4).
    const int c1[4] = {3, 3, 1, 1};
    const int c2[4] = {0, 4, 0, 4};
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(4, 4);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        if (x == y) {
          H(x, y) = node_affinity(a.positions_norm[c1[x]], b.positions_norm[c2[x]], a.feature(c1[x]),
                                  b.feature(c2[x]), p);
        } else if (c1[x] != c1[y] && c2[x] != c2[y]) {
          H(x, y) = edge_affinity(a.positions_norm[c1[x]], a.positions_norm[c1[y]], b.positions_norm[c2[x]],
                                  b.positions_norm[c2[y]], a.feature(c1[x]), a.feature(c1[y]), b.feature(c2[x]),
                                  b.feature(c2[y]), p);
        }
      }
    CHECK((K - H).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("symmetry and conflict structure over random instances") {
  Rng rng(1234);
  for (int t = 0; t < 1000; ++t) {
    const int n1 = 1 + static_cast<int>(uniform_index(rng, 5));
    const int n2 = n1 + static_cast<int>(uniform_index(rng, 3));
    const AttributedGraph a = small_graph(rng, n1 + 2, 4), b = small_graph(rng, n2 + 2, 4);
    MatchProblem prob;
    for (int i = 0; i < n1; ++i) prob.probe_nodes.push_back(i + 1);
    for (int i = 0; i < n2; ++i) prob.gallery_nodes.push_back(n2 + 1 - i);
    const AffinityParams p{0.05 + uniform01(rng), 0.05 + uniform01(rng)};
    const Eigen::MatrixXd K = build_affinity_matrix(a, b, prob, p);
    REQUIRE(K.rows() == n1 * n2);
    bool ok = true;
    for (int x = 0; x < n1 * n2; ++x)
      for (int y = 0; y < n1 * n2; ++y) {
        ok = ok && K(x, y) == K(y, x);
        const bool conflict = x != y && (x / n2 == y / n2 || x % n2 == y % n2);
        if (conflict)
          ok = ok && K(x, y) == 0.0;
        else
          ok = ok && K(x, y) > 0.0 && K(x, y) <= 1.0;
      }
    REQUIRE(ok);
  }
}

TEST_CASE("out of range node index") {
  Rng rng(9);
  const AttributedGraph a = small_graph(rng, 3, 2);
  CHECK_THROWS_AS(build_affinity_matrix(a, a, MatchProblem{{0, 3}, {0, 1}}, {}), std::out_of_range);
  CHECK_THROWS_AS(build_affinity_matrix(a, a, MatchProblem{{0}, {-1}}, {}), std::out_of_range);
}

TEST_CASE("scaling the image leaves K unchanged") {
  // Positions are normalized by image size, so a proportionally scaled
  // layout produces the same graph positions and the same matrix.
  Rng rng(10);
  const PatchLayout L1 = decompose_into_patches(48, 128, 32, 32, 8, 12, 4);
  const PatchLayout L2 = decompose_into_patches(96, 256, 64, 64, 16, 24, 4);
  const AttributedGraph g1 = testing::random_graph(L1, 8, rng);
  Rng rng2(10);
  const AttributedGraph g2 = testing::random_graph(L2, 8, rng2);
  const MatchProblem prob = stripe_search_space(L1, L1, 1, 1);
  CHECK(build_affinity_matrix(g1, g1, prob, {}) == build_affinity_matrix(g2, g2, prob, {}));
}

namespace {

std::vector<int> rows_of(const PatchLayout& L, const std::vector<int>& nodes) {
  std::vector<int> rows;
  for (int v : nodes)
    if (rows.empty() || rows.back() != L.row_of(v)) rows.push_back(L.row_of(v));
  return rows;
}

}  // namespace

TEST_CASE("stripe search space") {
  const PatchLayout L = decompose_into_patches(48, 128, 32, 32, 8, 12, 4);
  // Stripe rows: {0,1,2}, {3,4}, {5,6}, {7,8}.
  for (int s = 0; s < 4; ++s) {
    const MatchProblem m = stripe_search_space(L, L, s, 0);
    CHECK(m.probe_nodes == m.gallery_nodes);
  }
  const MatchProblem m1 = stripe_search_space(L, L, 1, 1);
  CHECK(rows_of(L, m1.probe_nodes) == std::vector<int>{3, 4});
  CHECK(rows_of(L, m1.gallery_nodes) == std::vector<int>{2, 3, 4, 5});
  CHECK(m1.n2() == 12);
  const MatchProblem m0 = stripe_search_space(L, L, 0, 1);
  CHECK(rows_of(L, m0.gallery_nodes) == std::vector<int>{0, 1, 2, 3});
  const MatchProblem m3 = stripe_search_space(L, L, 3, 2);
  CHECK(rows_of(L, m3.gallery_nodes) == std::vector<int>{5, 6, 7, 8});
  CHECK_THROWS_AS(stripe_search_space(L, L, 4, 1), std::out_of_range);
  CHECK_THROWS_AS(stripe_search_space(L, L, -1, 1), std::out_of_range);
}
