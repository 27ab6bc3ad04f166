#include "mftrack/synth.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "mftrack/rng.hpp"
#include "mftrack/text.hpp"

namespace mft {

void SyntheticScene::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("scene dimensions must be positive");
  if (frame_count <= 0) throw std::invalid_argument("scene frame count must be positive");
  if (noise_amplitude < 0 || noise_amplitude > 127) {
    throw std::invalid_argument("noise amplitude must be in [0, 127]");
  }
  for (size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    const std::string name = "object " + std::to_string(i + 1);
    if (o.entry < 0 || o.exit >= frame_count || o.entry > o.exit) {
      throw std::invalid_argument(name + ": entry/exit must satisfy 0 <= entry <= exit < frames");
    }
    for (int f = o.entry; f <= o.exit; ++f) {
      const BoundingBox b = o.box_at(f);
      if (b.x_min < 0.0 || b.y_min < 0.0 || b.x_max > width || b.y_max > height) {
        throw std::invalid_argument(name + " leaves the frame bounds at frame " +
                                    std::to_string(f));
      }
    }
  }
}

namespace {

[[noreturn]] void fail_at(const std::string& path, int line_no, const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + message);
}

uint8_t parse_byte(const std::string& field) {
  const long v = parse_int_field(field);
  if (v < 0 || v > 255) throw std::invalid_argument("value out of byte range: " + field);
  return static_cast<uint8_t>(v);
}

ObjectScript parse_object(const std::string& value, const std::string& path, int line_no) {
  ObjectScript obj;
  bool have_entry = false, have_exit = false, have_box = false;
  for (const auto& token : split_fields(value, ' ')) {
    if (token.empty()) continue;
    const size_t eq = token.find('=');
    if (eq == std::string::npos) fail_at(path, line_no, "expected key=value token: " + token);
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    try {
      if (key == "entry") {
        obj.entry = static_cast<int>(parse_int_field(val));
        have_entry = true;
      } else if (key == "exit") {
        obj.exit = static_cast<int>(parse_int_field(val));
        have_exit = true;
      } else if (key == "box") {
        const auto f = split_fields(val);
        if (f.size() != 4) fail_at(path, line_no, "box needs 4 coordinates");
        obj.initial = BoundingBox(parse_double_field(f[0]), parse_double_field(f[1]),
                                  parse_double_field(f[2]), parse_double_field(f[3]));
        have_box = true;
      } else if (key == "vel") {
        const auto f = split_fields(val);
        if (f.size() != 2) fail_at(path, line_no, "vel needs 2 components");
        obj.vx = parse_double_field(f[0]);
        obj.vy = parse_double_field(f[1]);
      } else if (key == "color") {
        const auto f = split_fields(val);
        if (f.size() != 3) fail_at(path, line_no, "color needs 3 components");
        obj.red = parse_byte(f[0]);
        obj.green = parse_byte(f[1]);
        obj.blue = parse_byte(f[2]);
      } else if (key == "label") {
        if (val.empty()) fail_at(path, line_no, "label must not be empty");
        obj.label = val;
      } else {
        fail_at(path, line_no, "unknown object key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail_at(path, line_no, e.what());
    }
  }
  if (!have_entry || !have_exit || !have_box) {
    fail_at(path, line_no, "object needs entry=, exit= and box=");
  }
  return obj;
}

}  // namespace

SyntheticScene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  SyntheticScene scene;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const size_t eq = content.find('=');
    if (eq == std::string::npos) fail_at(path, line_no, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    try {
      if (key == "width") {
        scene.width = static_cast<int>(parse_int_field(value));
      } else if (key == "height") {
        scene.height = static_cast<int>(parse_int_field(value));
      } else if (key == "frames") {
        scene.frame_count = static_cast<int>(parse_int_field(value));
      } else if (key == "noise") {
        scene.noise_amplitude = static_cast<int>(parse_int_field(value));
      } else if (key == "seed") {
        scene.seed = static_cast<uint64_t>(parse_int_field(value));
      } else if (key == "object") {
        scene.objects.push_back(parse_object(value, path, line_no));
      } else {
        fail_at(path, line_no, "unknown scene key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail_at(path, line_no, e.what());
    }
  }
  try {
    scene.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return scene;
}

SceneOutput generate_scene(const SyntheticScene& scene) {
  scene.validate();
  std::mt19937_64 engine(scene.seed);

  // Static textured background: coarse checkerboard plus per-pixel speckle.
  Image background(scene.width, scene.height);
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      const int base = 96 + ((x / 16 + y / 16) % 2) * 24;
      for (int c = 0; c < 3; ++c) {
        const int speckle = static_cast<int>(uniform_below(engine, 17)) - 8;
        background.set(x, y, c, static_cast<uint8_t>(std::clamp(base + speckle, 0, 255)));
      }
    }
  }

  SceneOutput out;
  out.frames.reserve(static_cast<size_t>(scene.frame_count));
  for (int f = 0; f < scene.frame_count; ++f) {
    Image img = background;
    for (size_t i = 0; i < scene.objects.size(); ++i) {
      const auto& o = scene.objects[i];
      if (f < o.entry || f > o.exit) continue;
      const BoundingBox box = o.box_at(f);
      const PixelRect rect = clip_box_to_image(box, scene.width, scene.height);
      for (int y = rect.y0; y < rect.y1; ++y) {
        for (int x = rect.x0; x < rect.x1; ++x) {
          img.set_rgb(x, y, o.red, o.green, o.blue);
        }
      }
      out.gt.push_back({f, static_cast<int>(i) + 1, box, o.label, 1.0});
    }
    if (scene.noise_amplitude > 0) {
      const uint64_t span = 2 * static_cast<uint64_t>(scene.noise_amplitude) + 1;
      for (auto& value : img.data) {
        const int noise = static_cast<int>(uniform_below(engine, span)) - scene.noise_amplitude;
        value = static_cast<uint8_t>(std::clamp(static_cast<int>(value) + noise, 0, 255));
      }
    }
    out.frames.push_back(std::move(img));
  }
  return out;
}

}  // namespace mft
