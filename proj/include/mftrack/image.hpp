#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mftrack/geometry.hpp"

namespace mft {

/// Interleaved 8-bit RGB image, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // size = width * height * 3

  Image() = default;

  Image(int w, int h, uint8_t fill = 0) : width(w), height(h) {
    if (w <= 0 || h <= 0) {
      throw std::invalid_argument("Image: dimensions must be positive");
    }
    data.assign(static_cast<size_t>(w) * static_cast<size_t>(h) * 3, fill);
  }

  uint8_t at(int x, int y, int channel) const {
    return data[(static_cast<size_t>(y) * width + x) * 3 + channel];
  }

  void set(int x, int y, int channel, uint8_t value) {
    data[(static_cast<size_t>(y) * width + x) * 3 + channel] = value;
  }

  void set_rgb(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
    const size_t i = (static_cast<size_t>(y) * width + x) * 3;
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
  }
};

/// Integer pixel range covered by a box, clipped to image bounds.
/// A pixel (x, y) is covered when its unit cell intersects the box.
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open [x0, x1) x [y0, y1)

  bool empty() const { return x0 >= x1 || y0 >= y1; }
  long long pixel_count() const {
    return empty() ? 0 : static_cast<long long>(x1 - x0) * (y1 - y0);
  }
};

PixelRect clip_box_to_image(const BoundingBox& box, int width, int height);

/// Binary PPM (P6) and PGM (P5, replicated to RGB) readers; P6 writer.
Image read_image(const std::string& path);
void write_image(const Image& image, const std::string& path);

/// Image files in a directory (.ppm/.pgm), ordered by zero-padded numeric
/// filename. Throws when the directory is missing or holds no frames.
std::vector<std::string> list_frame_files(const std::string& directory);

}  // namespace mft
