#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mftrack/image.hpp"
#include "mftrack/types.hpp"

namespace mft {

struct ObjectScript {
  int entry = 0;
  int exit = 0;  // inclusive
  BoundingBox initial{0.0, 0.0, 1.0, 1.0};
  double vx = 0.0;
  double vy = 0.0;
  uint8_t red = 200, green = 200, blue = 200;
  ClassLabel label;

  BoundingBox box_at(int frame) const {
    const double dt = frame - entry;
    return initial.translated(vx * dt, vy * dt);
  }
};

struct SyntheticScene {
  int width = 0;
  int height = 0;
  int frame_count = 0;
  int noise_amplitude = 0;  // uniform per-channel pixel noise in [-a, a]
  uint64_t seed = 0;
  std::vector<ObjectScript> objects;

  void validate() const;
};

/// Scene script: flat `key = value` lines for width/height/frames/noise/seed
/// plus one `object = entry=.. exit=.. box=x0,y0,x1,y1 [vel=vx,vy]
/// [color=r,g,b] [label=name]` line per object.
SyntheticScene load_scene(const std::string& path);

struct SceneOutput {
  std::vector<Image> frames;
  std::vector<TrackedBox> gt;  // ids are 1-based script indices
};

/// Deterministic rendering: seeded textured background, solid rectangles in
/// script order, then seeded per-frame pixel noise.
SceneOutput generate_scene(const SyntheticScene& scene);

}  // namespace mft
