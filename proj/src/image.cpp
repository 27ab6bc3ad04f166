#include "mftrack/image.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace mft {

PixelRect clip_box_to_image(const BoundingBox& box, int width, int height) {
  PixelRect r;
  r.x0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
  r.y0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
  r.x1 = std::min(width, static_cast<int>(std::ceil(box.x_max)));
  r.y1 = std::min(height, static_cast<int>(std::ceil(box.y_max)));
  return r;
}

namespace {

// Skips whitespace and '#' comment lines between PNM header tokens.
int read_pnm_int(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) {
    throw std::runtime_error("read_image: malformed header in " + path);
  }
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = in.get();
  }
  return value;
}

}  // namespace

Image read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_image: cannot open " + path);
  }
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '6' && magic[1] != '5')) {
    throw std::runtime_error("read_image: unsupported format in " + path + " (expect binary PPM/PGM)");
  }
  const bool gray = magic[1] == '5';
  const int width = read_pnm_int(in, path);
  const int height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (width <= 0 || height <= 0 || maxval != 255) {
    throw std::runtime_error("read_image: unsupported dimensions or depth in " + path);
  }

  Image img(width, height);
  const size_t pixels = static_cast<size_t>(width) * height;
  if (gray) {
    std::vector<uint8_t> buf(pixels);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
    if (!in) throw std::runtime_error("read_image: truncated data in " + path);
    for (size_t i = 0; i < pixels; ++i) {
      img.data[i * 3] = img.data[i * 3 + 1] = img.data[i * 3 + 2] = buf[i];
    }
  } else {
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(pixels * 3));
    if (!in) throw std::runtime_error("read_image: truncated data in " + path);
  }
  return img;
}

void write_image(const Image& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_image: cannot open " + path);
  }
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size()));
  if (!out) {
    throw std::runtime_error("write_image: failed writing " + path);
  }
}

std::vector<std::string> list_frame_files(const std::string& directory) {
  if (!fs::is_directory(directory)) {
    throw std::runtime_error("list_frame_files: not a directory: " + directory);
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".ppm" || ext == ".pgm") {
      names.push_back(entry.path().filename().string());
    }
  }
  if (names.empty()) {
    throw std::runtime_error("list_frame_files: no .ppm/.pgm frames in " + directory);
  }
  std::sort(names.begin(), names.end());
  std::vector<std::string> paths;
  paths.reserve(names.size());
  for (const auto& n : names) {
    paths.push_back((fs::path(directory) / n).string());
  }
  return paths;
}

}  // namespace mft
