#include "gct/posectx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gct/errors.hpp"

namespace gct {

JointSet JointSet::all_valid(const std::array<Point2, kNumJoints>& coords) {
  JointSet j;
  j.coords = coords;
  j.valid.fill(true);
  return j;
}

namespace {

double squared_distance(const Point2& a, const Point2& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  return dx * dx + dy * dy;
}

// Bin b covers normalized magnitudes [(b-1)/8, b/8); 1.0 joins the last bin.
// Compared on squares so that exact inputs bin exactly.
int magnitude_bin(double d2, double max2) {
  int b = 1;
  while (b < kPoseBins && 64.0 * d2 >= static_cast<double>(b * b) * max2) ++b;
  return b;
}

// 45-degree sector of (u, v) = (dx, -dy), counterclockwise from +x, bin 1 =
// [0, 45). Decided by sign and magnitude comparisons, never by atan2, so
// boundary angles land in a well-defined bin.
int angle_bin(double u, double v) {
  if (v >= 0 && u > 0) return v < u ? 1 : 2;
  if (v > 0 && u <= 0) return v > -u ? 3 : 4;
  if (v <= 0 && u < 0) return -v < -u ? 5 : 6;
  return u < -v ? 7 : 8;  // v < 0, u >= 0
}

}  // namespace

PoseContext compute_pose_context(const JointSet& joints) {
  int n_valid = 0;
  double max2 = 0.0;
  for (int i = 0; i < kNumJoints; ++i) {
    if (!joints.valid[i]) continue;
    ++n_valid;
    for (int j = i + 1; j < kNumJoints; ++j)
      if (joints.valid[j]) max2 = std::max(max2, squared_distance(joints.coords[i], joints.coords[j]));
  }
  if (n_valid < 2) throw std::invalid_argument("pose context needs at least 2 valid joints");
  if (max2 <= 0.0) throw DegenerateError("all valid joints coincide");

  PoseContext pc;
  for (int i = 0; i < kNumJoints; ++i) {
    int col = 0;
    for (int j = 0; j < kNumJoints; ++j) {
      if (j == i) continue;
      if (joints.valid[i] && joints.valid[j]) {
        const Point2 a = joints.coords[i], b = joints.coords[j];
        pc.psi[i][col] = static_cast<std::uint8_t>(magnitude_bin(squared_distance(a, b), max2));
        pc.phi[i][col] = static_cast<std::uint8_t>(angle_bin(b.x - a.x, -(b.y - a.y)));
      }
      ++col;
    }
  }
  return pc;
}

double cyclic_bin_distance(int b1, int b2, int n_bins) {
  if (n_bins < 1 || b1 < 1 || b1 > n_bins || b2 < 1 || b2 > n_bins)
    throw std::out_of_range("bin index outside [1, " + std::to_string(n_bins) + "]");
  const int d = std::abs(b1 - b2);
  const int alpha = std::min(d, n_bins - d);
  return static_cast<double>(alpha * alpha);
}

PoseSimilarity pose_similarity_terms(const PoseContext& a, const PoseContext& b) {
  double sum_psi = 0.0, sum_phi = 0.0;
  int count = 0;
  for (int i = 0; i < kNumJoints; ++i)
    for (int c = 0; c < kContextCols; ++c) {
      if (a.psi[i][c] == 0 || b.psi[i][c] == 0) continue;
      sum_psi += std::exp(-std::abs(static_cast<double>(a.psi[i][c]) - b.psi[i][c]));
      sum_phi += std::exp(-cyclic_bin_distance(a.phi[i][c], b.phi[i][c]));
      ++count;
    }
  if (count == 0) throw std::invalid_argument("pose contexts share no jointly valid entries");
  return {sum_psi / count, sum_phi / count};
}

double pose_similarity(const PoseContext& a, const PoseContext& b) { return pose_similarity_terms(a, b).value(); }

double pair_similarity(const PoseContext& probe_a, const PoseContext& gallery_a, const PoseContext& probe_b,
                       const PoseContext& gallery_b) {
  return pose_similarity(probe_a, probe_b) * pose_similarity(gallery_a, gallery_b);
}

}  // namespace gct
