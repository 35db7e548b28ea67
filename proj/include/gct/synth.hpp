#pragma once

#include <cstdint>
#include <filesystem>

#include "gct/dataset.hpp"
#include "gct/image.hpp"

namespace gct {

struct SynthParams {
  int n_identities = 40;
  int shift_max_px = 24;
  std::uint64_t seed = 0;
  int width = 48;
  int height = 128;
};

/// One synthetic identity: camera-0 view, camera-1 view, and their joints.
struct SynthPerson {
  Image view_a;
  Image view_b;
  JointSet joints_a;
  JointSet joints_b;
  int shift_px = 0;
};

/// Banded clothing texture seen by two cameras. The second view is the first
/// moved down by a seeded shift in [0, shift_max] with mild color jitter. The
/// skeleton moves with the content, and its arm articulation in the second
/// view follows the shift (a crouching or leaning subject both drops in the
/// frame and changes pose), so pose similarity carries alignment information.
SynthPerson synth_person(const SynthParams& params, int identity);

/// Writes images/<id>_c<cam>.ppm and manifest.json under `out_dir` and
/// returns the index (paths absolute).
DatasetIndex write_synthetic_dataset(const std::filesystem::path& out_dir, const SynthParams& params);

/// In-memory equivalent of write_synthetic_dataset followed by load_dataset.
Dataset synthetic_dataset(const SynthParams& params, const Config& config);

}  // namespace gct
