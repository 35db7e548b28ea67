#pragma once

#include <array>
#include <cstdint>

#include "gct/imggraph.hpp"

namespace gct {

inline constexpr int kNumJoints = 14;
inline constexpr int kContextCols = kNumJoints - 1;
inline constexpr int kPoseBins = 8;

/// Joint order: head, neck, L/R shoulder, L/R elbow, L/R wrist, L/R hip
/// (coxa), L/R knee, L/R ankle.
enum class Joint : int {
  Head, Neck, LShoulder, RShoulder, LElbow, RElbow, LWrist, RWrist,
  LHip, RHip, LKnee, RKnee, LAnkle, RAnkle
};

struct JointSet {
  std::array<Point2, kNumJoints> coords{};
  std::array<bool, kNumJoints> valid{};

  static JointSet all_valid(const std::array<Point2, kNumJoints>& coords);
};

/// Row i describes the other 13 joints (ascending index, i skipped) in the
/// polar frame centered at joint i. Bins are 1..8; 0 marks an entry touching
/// an invalid joint.
struct PoseContext {
  using Codes = std::array<std::array<std::uint8_t, kContextCols>, kNumJoints>;
  Codes psi{};  // magnitude bins
  Codes phi{};  // angle bins

  friend bool operator==(const PoseContext&, const PoseContext&) = default;
};

/// Magnitudes are normalized by the largest pairwise distance among valid
/// joints and binned uniformly on [0,1] (1.0 lands in the last bin). Angles are
/// counterclockwise from +x as seen on screen (image y points down), with
/// 45-degree bins starting at 0.
PoseContext compute_pose_context(const JointSet& joints);

/// Squared number of steps between two bins on a circle of n_bins.
double cyclic_bin_distance(int b1, int b2, int n_bins = kPoseBins);

struct PoseSimilarity {
  double s_psi = 0.0;
  double s_phi = 0.0;
  double value() const { return s_psi * s_phi; }
};

/// Image-level similarity, averaged over entries valid in both descriptors.
PoseSimilarity pose_similarity_terms(const PoseContext& a, const PoseContext& b);
double pose_similarity(const PoseContext& a, const PoseContext& b);

/// Pair-level similarity: probe-vs-probe times gallery-vs-gallery.
double pair_similarity(const PoseContext& probe_a, const PoseContext& gallery_a, const PoseContext& probe_b,
                       const PoseContext& gallery_b);

}  // namespace gct
