#include "mftrack/detect.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

#include "mftrack/geometry.hpp"
#include "mftrack/rng.hpp"
#include "mftrack/text.hpp"

namespace mft {

namespace {

[[noreturn]] void fail_at(const std::string& path, int line_no, const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + message);
}

// Calls fn once per content line, skipping blanks and # comments.
template <typename Fn>
void for_each_row(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    fn(content, line_no);
  }
}

ClassLabel parse_label(const std::string& field) {
  if (field == "null") return std::nullopt;
  return field;
}

std::string label_text(const ClassLabel& label) { return label ? *label : "null"; }

}  // namespace

void DetectionFilterConfig::validate() const {
  if (min_confidence < 0.0 || min_confidence > 1.0) {
    throw std::invalid_argument("min_confidence must be in [0, 1]");
  }
  if (min_area < 0.0) throw std::invalid_argument("min_area must be non-negative");
}

std::vector<Detection> load_detections(const std::string& path, DetectionFileFormat fmt) {
  std::vector<Detection> dets;
  for_each_row(path, [&](const std::string& row, int line_no) {
    const auto fields = split_fields(row);
    try {
      if (fmt == DetectionFileFormat::csv) {
        if (fields.size() != 7) fail_at(path, line_no, "expected 7 fields");
        const int frame = static_cast<int>(parse_int_field(fields[0]));
        const BoundingBox box(parse_double_field(fields[1]), parse_double_field(fields[2]),
                              parse_double_field(fields[3]), parse_double_field(fields[4]));
        dets.emplace_back(frame, box, parse_label(fields[6]), parse_double_field(fields[5]));
      } else {
        if (fields.size() < 7) fail_at(path, line_no, "expected at least 7 fields");
        const int frame = static_cast<int>(parse_int_field(fields[0])) - 1;  // 1-based
        const double x = parse_double_field(fields[2]);
        const double y = parse_double_field(fields[3]);
        const double w = parse_double_field(fields[4]);
        const double h = parse_double_field(fields[5]);
        const double conf = std::clamp(parse_double_field(fields[6]), 0.0, 1.0);
        dets.emplace_back(frame, BoundingBox(x, y, x + w, y + h), std::nullopt, conf);
      }
    } catch (const std::invalid_argument& e) {
      fail_at(path, line_no, e.what());
    }
  });
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
  return dets;
}

void save_detections(const std::string& path, const std::vector<Detection>& dets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& d : dets) {
    out << d.frame << ',' << format_double(d.box.x_min) << ',' << format_double(d.box.y_min)
        << ',' << format_double(d.box.x_max) << ',' << format_double(d.box.y_max) << ','
        << format_double(d.confidence) << ',' << label_text(d.label) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

void load_reid_sidecar(const std::string& path, std::vector<Detection>& dets) {
  std::map<int, std::vector<size_t>> rows_by_frame;
  for (size_t i = 0; i < dets.size(); ++i) rows_by_frame[dets[i].frame].push_back(i);

  long dim = -1;
  std::vector<char> seen(dets.size(), 0);
  for_each_row(path, [&](const std::string& row, int line_no) {
    if (dim < 0) {
      if (row.rfind("dim=", 0) != 0) fail_at(path, line_no, "expected header 'dim=D'");
      try {
        dim = parse_int_field(row.substr(4));
      } catch (const std::invalid_argument& e) {
        fail_at(path, line_no, e.what());
      }
      if (dim < 1) fail_at(path, line_no, "embedding dimension must be positive");
      return;
    }
    const auto fields = split_fields(row);
    if (fields.size() != static_cast<size_t>(dim) + 2) {
      fail_at(path, line_no,
              "expected " + std::to_string(dim + 2) + " fields, got " +
                  std::to_string(fields.size()));
    }
    try {
      const int frame = static_cast<int>(parse_int_field(fields[0]));
      const long det_row = parse_int_field(fields[1]);
      const auto it = rows_by_frame.find(frame);
      if (it == rows_by_frame.end() || det_row < 0 ||
          det_row >= static_cast<long>(it->second.size())) {
        fail_at(path, line_no, "no detection at frame " + std::to_string(frame) + ", row " +
                                   std::to_string(det_row));
      }
      const size_t target = it->second[static_cast<size_t>(det_row)];
      if (seen[target]) fail_at(path, line_no, "duplicate embedding row");
      seen[target] = 1;
      ReidEmbedding emb;
      emb.values.reserve(static_cast<size_t>(dim));
      for (long v = 0; v < dim; ++v) {
        emb.values.push_back(parse_double_field(fields[static_cast<size_t>(v) + 2]));
      }
      dets[target].embedding = emb.unit();
    } catch (const std::invalid_argument& e) {
      fail_at(path, line_no, e.what());
    }
  });
  if (dim < 0) throw std::runtime_error(path + ": missing 'dim=D' header");
}

std::vector<TrackedBox> load_ground_truth(const std::string& path) {
  std::vector<TrackedBox> rows;
  for_each_row(path, [&](const std::string& row, int line_no) {
    const auto fields = split_fields(row);
    if (fields.size() != 8) fail_at(path, line_no, "expected 8 fields");
    try {
      TrackedBox tb{static_cast<int>(parse_int_field(fields[0])),
                    static_cast<int>(parse_int_field(fields[1])),
                    BoundingBox(parse_double_field(fields[2]), parse_double_field(fields[3]),
                                parse_double_field(fields[4]), parse_double_field(fields[5])),
                    parse_label(fields[7]), parse_double_field(fields[6])};
      if (tb.frame < 0) fail_at(path, line_no, "frame index must be non-negative");
      rows.push_back(std::move(tb));
    } catch (const std::invalid_argument& e) {
      fail_at(path, line_no, e.what());
    }
  });
  std::stable_sort(rows.begin(), rows.end(), [](const TrackedBox& a, const TrackedBox& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.id < b.id;
  });
  return rows;
}

void save_ground_truth(const std::string& path, const std::vector<TrackedBox>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : rows) {
    out << r.frame << ',' << r.id << ',' << format_double(r.box.x_min) << ','
        << format_double(r.box.y_min) << ',' << format_double(r.box.x_max) << ','
        << format_double(r.box.y_max) << ',' << format_double(r.confidence) << ','
        << label_text(r.label) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         const DetectionFilterConfig& cfg, DetectionPath path) {
  cfg.validate();
  std::vector<Detection> out;
  for (const auto& d : dets) {
    const bool keep = path == DetectionPath::supervised ? d.confidence >= cfg.min_confidence
                                                        : d.box.area() > cfg.min_area;
    if (keep) out.push_back(d);
  }
  return out;
}

BackgroundModel learn_background(const std::vector<Image>& frames, int k, uint64_t seed,
                                 double diff_threshold) {
  if (frames.empty()) throw std::invalid_argument("learn_background: no frames");
  if (k < 1 || k > static_cast<int>(frames.size())) {
    throw std::invalid_argument("learn_background: k must be in [1, frame count]");
  }
  const int w = frames[0].width;
  const int h = frames[0].height;
  for (const auto& f : frames) {
    if (f.width != w || f.height != h) {
      throw std::invalid_argument("learn_background: frame dimensions differ");
    }
  }

  std::mt19937_64 engine(seed);
  BackgroundModel model;
  model.diff_threshold = diff_threshold;
  model.learned_from = sample_without_replacement(engine, static_cast<int>(frames.size()), k);
  model.median = Image(w, h);

  std::vector<uint8_t> samples(static_cast<size_t>(k));
  for (size_t i = 0; i < model.median.data.size(); ++i) {
    for (int s = 0; s < k; ++s) {
      samples[static_cast<size_t>(s)] = frames[static_cast<size_t>(model.learned_from[s])].data[i];
    }
    auto mid = samples.begin() + (k - 1) / 2;
    std::nth_element(samples.begin(), mid, samples.end());
    model.median.data[i] = *mid;
  }
  return model;
}

std::vector<Detection> detect_foreground(const Image& frame, const BackgroundModel& model,
                                         double min_area, int frame_index) {
  const int w = frame.width;
  const int h = frame.height;
  if (w != model.median.width || h != model.median.height) {
    throw std::invalid_argument("detect_foreground: frame does not match background dimensions");
  }

  std::vector<char> mask(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int diff = 0;
      for (int c = 0; c < 3; ++c) {
        diff = std::max(diff, std::abs(static_cast<int>(frame.at(x, y, c)) -
                                       static_cast<int>(model.median.at(x, y, c))));
      }
      mask[static_cast<size_t>(y) * w + x] = diff > model.diff_threshold ? 1 : 0;
    }
  }

  std::vector<Detection> out;
  std::vector<int> stack;
  std::vector<char> visited(mask.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int start = y * w + x;
      if (!mask[static_cast<size_t>(start)] || visited[static_cast<size_t>(start)]) continue;
      int min_x = x, max_x = x, min_y = y, max_y = y;
      visited[static_cast<size_t>(start)] = 1;
      stack.assign(1, start);
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int px = p % w;
        const int py = p / w;
        min_x = std::min(min_x, px);
        max_x = std::max(max_x, px);
        min_y = std::min(min_y, py);
        max_y = std::max(max_y, py);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx;
            const int ny = py + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const int n = ny * w + nx;
            if (mask[static_cast<size_t>(n)] && !visited[static_cast<size_t>(n)]) {
              visited[static_cast<size_t>(n)] = 1;
              stack.push_back(n);
            }
          }
        }
      }
      const BoundingBox box(min_x, min_y, max_x + 1, max_y + 1);
      if (box.area() > min_area) out.emplace_back(frame_index, box);
    }
  }
  return out;
}

std::vector<Detection> transfer_labels(const std::vector<Detection>& unsup,
                                       const std::vector<Detection>& sup) {
  for (const auto& u : unsup) {
    for (const auto& s : sup) {
      if (u.frame != s.frame) {
        throw std::invalid_argument("transfer_labels: lists span different frames");
      }
    }
  }

  std::vector<Detection> out = unsup;
  for (auto& u : out) {
    int best = -1;
    double best_iou = 0.0;
    for (size_t i = 0; i < sup.size(); ++i) {
      const double overlap = iou(u.box, sup[i].box);
      if (overlap <= 0.0) continue;
      const bool better =
          overlap > best_iou ||
          (overlap == best_iou && best >= 0 &&
           sup[i].confidence > sup[static_cast<size_t>(best)].confidence);
      if (best < 0 || better) {
        best = static_cast<int>(i);
        best_iou = overlap;
      }
    }
    if (best >= 0) {
      u.label = sup[static_cast<size_t>(best)].label;
      u.confidence = sup[static_cast<size_t>(best)].confidence;
    }
  }
  return out;
}

}  // namespace mft
