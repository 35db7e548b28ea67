#include "gct/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "gct/formats.hpp"
#include "gct/random.hpp"

namespace gct {

namespace {

using Color = std::array<int, 3>;

// Small shared palette: identities differ by band layout, not by color set.
constexpr std::array<Color, 4> kPalette = {{{200, 30, 30}, {30, 160, 40}, {40, 60, 200}, {230, 210, 40}}};

int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

std::uint8_t clamp_u8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

// Skeleton in view coordinates. `arm_deg` lifts both arms away from the body.
std::array<Point2, kNumJoints> skeleton(double cx, double top, double arm_deg, double leg_spread) {
  const double rad = arm_deg * std::numbers::pi / 180.0;
  const double upper = 10.0, fore = 9.0;
  std::array<Point2, kNumJoints> j{};
  j[0] = {cx, top};                 // head
  j[1] = {cx, top + 12};            // neck
  j[2] = {cx - 9, top + 15};        // shoulders
  j[3] = {cx + 9, top + 15};
  j[4] = {j[2].x - upper * std::sin(rad), j[2].y + upper * std::cos(rad)};  // elbows
  j[5] = {j[3].x + upper * std::sin(rad), j[3].y + upper * std::cos(rad)};
  j[6] = {j[4].x - fore * std::sin(1.5 * rad), j[4].y + fore * std::cos(1.5 * rad)};  // wrists
  j[7] = {j[5].x + fore * std::sin(1.5 * rad), j[5].y + fore * std::cos(1.5 * rad)};
  j[8] = {cx - 5, top + 46};        // hips
  j[9] = {cx + 5, top + 46};
  j[10] = {cx - 5 - leg_spread / 2, top + 66};  // knees
  j[11] = {cx + 5 + leg_spread / 2, top + 66};
  j[12] = {cx - 5 - leg_spread, top + 86};      // ankles
  j[13] = {cx + 5 + leg_spread, top + 86};
  return j;
}

JointSet place(const std::array<Point2, kNumJoints>& coords, int w, int h) {
  JointSet js;
  for (int i = 0; i < kNumJoints; ++i) {
    js.coords[i] = {std::round(coords[i].x * 4) / 4, std::round(coords[i].y * 4) / 4};
    js.valid[i] = js.coords[i].x >= 0 && js.coords[i].x < w && js.coords[i].y >= 0 && js.coords[i].y < h;
  }
  return js;
}

}  // namespace

SynthPerson synth_person(const SynthParams& params, int identity) {
  const int W = params.width, H = params.height, S = params.shift_max_px;
  Rng rng(derive_seed(params.seed, SeedStream::Synth, static_cast<std::uint64_t>(identity)));

  // Tall canvas of horizontal bands; each band splits into left/right colors.
  const int canvas_h = H + S;
  Image canvas(W, canvas_h);
  for (int y = 0; y < canvas_h;) {
    const int band = uniform_int(rng, 6, 16);
    const Color left = kPalette[uniform_index(rng, kPalette.size())];
    const Color right = uniform01(rng) < 0.5 ? left : kPalette[uniform_index(rng, kPalette.size())];
    const int split = uniform_int(rng, W / 4, 3 * W / 4);
    for (int yy = y; yy < std::min(canvas_h, y + band); ++yy)
      for (int x = 0; x < W; ++x)
        for (int c = 0; c < 3; ++c) canvas.at(x, yy, c) = clamp_u8((x < split ? left : right)[c] + uniform_int(rng, -10, 10));
    y += band;
  }

  SynthPerson p;
  p.shift_px = S > 0 ? uniform_int(rng, 0, S) : 0;

  // View A takes the bottom H rows, view B starts shift_px rows higher, so
  // its content appears shift_px lower.
  p.view_a = Image(W, H);
  p.view_b = Image(W, H);
  Color gain{};
  for (int c = 0; c < 3; ++c) gain[c] = uniform_int(rng, -6, 6);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < 3; ++c) {
        p.view_a.at(x, y, c) = canvas.at(x, y + S, c);
        p.view_b.at(x, y, c) = clamp_u8(canvas.at(x, y + S - p.shift_px, c) + gain[c] + uniform_int(rng, -3, 3));
      }

  const double cx = W / 2.0 + uniform01(rng) * 4 - 2;
  const double top = 8 + uniform01(rng) * 4;
  const double arm_a = 10 + uniform01(rng) * 6;
  const double legs = 2 + uniform01(rng) * 3;
  const double arm_b = 10 + 110.0 * p.shift_px / std::max(S, 1) + uniform01(rng) * 6;
  p.joints_a = place(skeleton(cx, top, arm_a, legs), W, H);
  p.joints_b = place(skeleton(cx, top + p.shift_px, arm_b, legs), W, H);
  return p;
}

DatasetIndex write_synthetic_dataset(const std::filesystem::path& out_dir, const SynthParams& params) {
  if (params.n_identities < 2) throw std::invalid_argument("synthetic dataset needs at least 2 identities");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "images");
  DatasetIndex index;
  for (int id = 0; id < params.n_identities; ++id) {
    const SynthPerson p = synth_person(params, id);
    for (int cam = 0; cam < 2; ++cam) {
      char name[64];
      std::snprintf(name, sizeof name, "p%03d_c%d", id, cam);
      const fs::path img_path = out_dir / "images" / (std::string(name) + ".ppm");
      write_ppm(img_path, cam == 0 ? p.view_a : p.view_b);
      index.entries.push_back({name, id, cam, img_path.string(), "", 0, 0, cam == 0 ? p.joints_a : p.joints_b});
    }
  }
  std::ofstream(out_dir / "manifest.json", std::ios::binary) << manifest_to_json_text(index, out_dir);
  return index;
}

Dataset synthetic_dataset(const SynthParams& params, const Config& config) {
  if (params.n_identities < 2) throw std::invalid_argument("synthetic dataset needs at least 2 identities");
  const auto& P = config.patch;
  const PatchLayout layout =
      decompose_into_patches(params.width, params.height, P.w, P.h, P.stride_w, P.stride_h, P.n_stripes);
  Dataset d;
  for (int id = 0; id < params.n_identities; ++id) {
    const SynthPerson p = synth_person(params, id);
    for (int cam = 0; cam < 2; ++cam) {
      const Image& img = cam == 0 ? p.view_a : p.view_b;
      const JointSet& js = cam == 0 ? p.joints_a : p.joints_b;
      char name[64];
      std::snprintf(name, sizeof name, "p%03d_c%d", id, cam);
      d.index.entries.push_back({name, id, cam, "", "", params.width, params.height, js});
      d.images.push_back({build_graph(layout, extract_builtin_features(img, layout, P.bins_per_channel)),
                          compute_pose_context(js)});
    }
  }
  return d;
}

}  // namespace gct
