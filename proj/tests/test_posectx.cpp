#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gct/errors.hpp"
#include "gct/posectx.hpp"
#include "test_support.hpp"

using namespace gct;

namespace {

// Straightforward trigonometric recomputation of the descriptor.
PoseContext oracle_context(const JointSet& js) {
  double maxd = 0;
  for (int i = 0; i < kNumJoints; ++i)
    for (int j = 0; j < kNumJoints; ++j)
      if (js.valid[i] && js.valid[j])
        maxd = std::max(maxd, std::hypot(js.coords[j].x - js.coords[i].x, js.coords[j].y - js.coords[i].y));
  PoseContext pc;
  for (int i = 0; i < kNumJoints; ++i) {
    int col = 0;
    for (int j = 0; j < kNumJoints; ++j) {
      if (j == i) continue;
      if (js.valid[i] && js.valid[j]) {
        const double dx = js.coords[j].x - js.coords[i].x, dy = js.coords[j].y - js.coords[i].y;
        const double m = std::hypot(dx, dy) / maxd;
        pc.psi[i][col] = static_cast<std::uint8_t>(m >= 1.0 ? 8 : static_cast<int>(m * 8) + 1);
        double deg = std::atan2(-dy, dx) * 180 / std::numbers::pi;
        if (deg < 0) deg += 360;
        pc.phi[i][col] = static_cast<std::uint8_t>(static_cast<int>(deg / 45) + 1);
      }
      ++col;
    }
  }
  return pc;
}

JointSet random_int_pose(Rng& rng) {
  std::array<Point2, kNumJoints> c{};
  for (auto& p : c) p = {static_cast<double>(uniform_index(rng, 48)), static_cast<double>(uniform_index(rng, 128))};
  return JointSet::all_valid(c);
}

PoseContext rotate_phi(PoseContext pc, int steps) {
  for (auto& row : pc.phi)
    for (auto& b : row)
      if (b != 0) b = static_cast<std::uint8_t>((b - 1 + steps + 8 * 4) % 8 + 1);
  return pc;
}

}  // namespace

TEST_CASE("joint to the right at the maximum distance") {
  JointSet js;
  js.coords[0] = {10, 50};
  js.coords[1] = {30, 50};
  js.valid[0] = js.valid[1] = true;
  const PoseContext pc = compute_pose_context(js);
  CHECK(pc.psi[0][0] == 8);  // row 0, column for joint 1
  CHECK(pc.phi[0][0] == 1);
  CHECK(pc.psi[1][0] == 8);  // row 1, column for joint 0: directly left
  CHECK(pc.phi[1][0] == 5);
  for (int i = 0; i < kNumJoints; ++i)
    for (int c = 0; c < kContextCols; ++c)
      if (!((i == 0 && c == 0) || (i == 1 && c == 0))) {
        CHECK(pc.psi[i][c] == 0);
        CHECK(pc.phi[i][c] == 0);
      }
}

TEST_CASE("up on screen is 90 degrees") {
  JointSet js;
  js.coords[0] = {10, 50};
  js.coords[1] = {10, 20};  // above
  js.coords[2] = {10, 80};  // below
  js.valid[0] = js.valid[1] = js.valid[2] = true;
  const PoseContext pc = compute_pose_context(js);
  CHECK(pc.phi[0][0] == 3);  // exactly 90 degrees opens bin 3
  CHECK(pc.phi[0][1] == 7);  // exactly 270 degrees opens bin 7
  CHECK(pc.psi[0][0] == 5);  // half of the max distance opens bin 5
}

TEST_CASE("sector boundaries") {
  // Offsets along each multiple of 45 degrees open the corresponding bin.
  const double dirs[8][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  for (int k = 0; k < 8; ++k) {
    JointSet js;
    js.coords[0] = {50, 50};
    js.coords[1] = {50 + 7 * dirs[k][0], 50 + 7 * dirs[k][1]};
    js.valid[0] = js.valid[1] = true;
    CHECK(compute_pose_context(js).phi[0][0] == k + 1);
  }
}

TEST_CASE("full skeleton has no empty entries and a row layout skipping the center") {
  const JointSet js = testing::standing_pose(24, 20);
  const PoseContext pc = compute_pose_context(js);
  for (int i = 0; i < kNumJoints; ++i)
    for (int c = 0; c < kContextCols; ++c) {
      CHECK(pc.psi[i][c] >= 1);
      CHECK(pc.psi[i][c] <= 8);
      CHECK(pc.phi[i][c] >= 1);
      CHECK(pc.phi[i][c] <= 8);
    }
  // Head row: neck is straight below the head.
  CHECK(pc.phi[0][0] == 7);
}

TEST_CASE("descriptor agrees with a trigonometric recomputation") {
  Rng rng(31);
  for (int t = 0; t < 500; ++t) {
    JointSet js;
    for (int j = 0; j < kNumJoints; ++j) {
      js.coords[j] = {100 * uniform01(rng), 200 * uniform01(rng)};
      js.valid[j] = uniform01(rng) < 0.85;
    }
    js.valid[0] = js.valid[5] = true;
    CHECK(compute_pose_context(js) == oracle_context(js));
  }
}

TEST_CASE("invalid joints zero their rows and columns in both codes") {
  JointSet js = testing::standing_pose(24, 20);
  js.valid[3] = false;
  js.valid[10] = false;
  const PoseContext pc = compute_pose_context(js);
  for (int i = 0; i < kNumJoints; ++i) {
    int col = 0;
    for (int j = 0; j < kNumJoints; ++j) {
      if (j == i) continue;
      const bool bad = i == 3 || i == 10 || j == 3 || j == 10;
      CHECK((pc.psi[i][col] == 0) == bad);
      CHECK((pc.phi[i][col] == 0) == bad);
      ++col;
    }
  }
}

TEST_CASE("translation and uniform scale leave the descriptor unchanged") {
  Rng rng(32);
  for (int t = 0; t < 300; ++t) {
    const JointSet js = random_int_pose(rng);
    const PoseContext base = compute_pose_context(js);
    const double tx = static_cast<double>(uniform_index(rng, 400)) - 200;
    const double ty = static_cast<double>(uniform_index(rng, 400)) - 200;
    for (double s : {0.5, 2.0, 3.0, 7.0}) {
      JointSet moved = js;
      for (auto& p : moved.coords) p = {s * p.x + tx, s * p.y + ty};
      CHECK(compute_pose_context(moved) == base);
    }
  }
}

TEST_CASE("pose context errors") {
  JointSet one;
  one.valid[4] = true;
  CHECK_THROWS_AS(compute_pose_context(one), std::invalid_argument);
  JointSet same;
  for (int j = 0; j < kNumJoints; ++j) {
    same.coords[j] = {5, 5};
    same.valid[j] = true;
  }
  CHECK_THROWS_AS(compute_pose_context(same), DegenerateError);
}

TEST_CASE("cyclic bin distance") {
  CHECK(cyclic_bin_distance(3, 3, 8) == 0);
  CHECK(cyclic_bin_distance(1, 8, 8) == 1);
  CHECK(cyclic_bin_distance(2, 6, 8) == 16);
  double max_seen = 0;
  for (int a = 1; a <= 8; ++a)
    for (int b = 1; b <= 8; ++b) {
      CHECK(cyclic_bin_distance(a, b) == cyclic_bin_distance(b, a));
      CHECK((cyclic_bin_distance(a, b) == 0) == (a == b));
      max_seen = std::max(max_seen, cyclic_bin_distance(a, b));
    }
  CHECK(max_seen == 16);
  CHECK_THROWS_AS(cyclic_bin_distance(0, 3), std::out_of_range);
  CHECK_THROWS_AS(cyclic_bin_distance(3, 9), std::out_of_range);
}

TEST_CASE("pose similarity values") {
  Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    const PoseContext a = compute_pose_context(testing::jittered_pose(rng));
    CHECK(pose_similarity(a, a) == 1.0);
  }
  PoseContext a, b;
  a.psi[2][4] = 3;
  b.psi[2][4] = 4;
  a.phi[2][4] = 1;
  b.phi[2][4] = 8;
  CHECK(pose_similarity(a, b) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(std::exp(-2.0) == doctest::Approx(0.13534).epsilon(1e-4));

  PoseContext empty;
  CHECK_THROWS_AS(pose_similarity(a, empty), std::invalid_argument);
}

TEST_CASE("entries valid on one side only are ignored") {
  PoseContext a, b;
  a.psi[0][0] = b.psi[0][0] = 2;
  a.phi[0][0] = b.phi[0][0] = 2;
  a.psi[5][5] = 8;  // b has nothing here
  a.phi[5][5] = 4;
  CHECK(pose_similarity(a, b) == 1.0);
}

TEST_CASE("pose similarity is symmetric and rotation-consistent") {
  Rng rng(34);
  for (int t = 0; t < 200; ++t) {
    JointSet ja = testing::jittered_pose(rng, 10), jb = testing::jittered_pose(rng, 10);
    ja.valid[uniform_index(rng, kNumJoints)] = false;
    const PoseContext a = compute_pose_context(ja), b = compute_pose_context(jb);
    const double s = pose_similarity(a, b);
    CHECK(s == pose_similarity(b, a));
    CHECK(s > 0.0);
    CHECK(s <= 1.0);
    // Rotating one side by +1 matches rotating the other by -1; rotating both
    // leaves the angle term alone.
    CHECK(pose_similarity_terms(rotate_phi(a, 1), b).s_phi == pose_similarity_terms(a, rotate_phi(b, -1)).s_phi);
    CHECK(pose_similarity_terms(rotate_phi(a, 1), rotate_phi(b, 1)).s_phi == pose_similarity_terms(a, b).s_phi);
    CHECK(pose_similarity_terms(rotate_phi(a, 1), b).s_psi == pose_similarity_terms(a, b).s_psi);
  }
}

TEST_CASE("pair similarity is the product of both sides") {
  Rng rng(35);
  std::vector<std::pair<PoseContext, PoseContext>> store;
  for (int t = 0; t < 10; ++t)
    store.emplace_back(compute_pose_context(testing::jittered_pose(rng, 12)),
                       compute_pose_context(testing::jittered_pose(rng, 12)));
  const PoseContext qp = compute_pose_context(testing::jittered_pose(rng, 12));
  const PoseContext qg = compute_pose_context(testing::jittered_pose(rng, 12));
  for (const auto& [p, g] : store)
    CHECK(pair_similarity(qp, qg, p, g) == pose_similarity(qp, p) * pose_similarity(qg, g));
  CHECK(pair_similarity(store[0].first, store[0].second, store[0].first, store[0].second) == 1.0);
}
