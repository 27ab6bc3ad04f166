#include "mftrack/costs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mft {

void CostConfig::validate() const {
  const double weights[] = {weight_spatial, weight_color, weight_label, weight_reid};
  const char* names[] = {"weight_spatial", "weight_color", "weight_label", "weight_reid"};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (weights[i] < 0.0) {
      throw std::invalid_argument(std::string("CostConfig: ") + names[i] + " must be >= 0");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("CostConfig: fusion weights must sum to 1");
  }
  if (!(max_box_distance > 0.0)) {
    throw std::invalid_argument("CostConfig: max_box_distance must be positive");
  }
  if (null_label_cost < 0.0 || null_label_cost > 1.0) {
    throw std::invalid_argument("CostConfig: null_label_cost must be in [0, 1]");
  }
  if (histogram_bins < 1 || histogram_bins > 256) {
    throw std::invalid_argument("CostConfig: histogram_bins must be in [1, 256]");
  }
}

ColorHistogram extract_histogram(const Image& frame, const BoundingBox& box, int bins) {
  const PixelRect r = clip_box_to_image(box, frame.width, frame.height);
  if (r.empty()) {
    throw std::invalid_argument("extract_histogram: empty region (box outside the image)");
  }
  ColorHistogram hist(bins);
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      for (int c = 0; c < 3; ++c) {
        const int bin = frame.at(x, y, c) * bins / 256;
        hist.counts[static_cast<size_t>(c)][static_cast<size_t>(bin)] += 1.0;
      }
    }
  }
  return hist;
}

double mean_box_distance(const BoundingBox& a, const BoundingBox& b) {
  return (std::abs(a.x_min - b.x_min) + std::abs(a.y_min - b.y_min) +
          std::abs(a.x_max - b.x_max) + std::abs(a.y_max - b.y_max)) /
         4.0;
}

double spatial_cost(const BoundingBox& detection, const BoundingBox& tracked,
                    double max_distance) {
  if (!(max_distance > 0.0)) {
    throw std::invalid_argument("spatial_cost: max_distance must be positive");
  }
  const double mean_dist = mean_box_distance(detection, tracked);
  return 1.0 - std::max(0.0, (max_distance - mean_dist) / max_distance);
}

namespace {

// Bhattacharyya cost of one channel; the radicand is clamped to [0, 1]
// to absorb floating-point drift.
double channel_bhattacharyya(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double mean_a = 0.0;
  double mean_b = 0.0;
  double cross = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
    cross += std::sqrt(a[i] * b[i]);
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  if (mean_a <= 0.0 || mean_b <= 0.0) {
    throw std::invalid_argument("color_cost: empty histogram");
  }
  const double norm = std::sqrt(mean_a * mean_b * static_cast<double>(n) * static_cast<double>(n));
  const double radicand = std::clamp(1.0 - cross / norm, 0.0, 1.0);
  return std::sqrt(radicand);
}

}  // namespace

double color_cost(const ColorHistogram& detection, const ColorHistogram& tracked) {
  if (detection.bins != tracked.bins) {
    throw std::invalid_argument("color_cost: histograms have different bin counts");
  }
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    total += channel_bhattacharyya(detection.counts[static_cast<size_t>(c)],
                                   tracked.counts[static_cast<size_t>(c)]);
  }
  return total / 3.0;
}

double label_cost(const ClassLabel& label_a, double confidence_a, const ClassLabel& label_b,
                  double confidence_b, double null_label_cost) {
  if (!label_a.has_value() || !label_b.has_value()) {
    return null_label_cost;
  }
  if (*label_a != *label_b) {
    return 1.0;
  }
  return 1.0 - (confidence_a + confidence_b) / 2.0;
}

double reid_cost(const ReidEmbedding& a, const ReidEmbedding& b, ReidMode mode) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("reid_cost: embedding lengths differ");
  }
  double sq = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sq += d * d;
  }
  const double dist = std::sqrt(sq);
  if (mode == ReidMode::verbatim) {
    return std::clamp(1.0 - dist, 0.0, 1.0);
  }
  if (!a.normalized || !b.normalized) {
    throw std::invalid_argument("reid_cost: corrected mode requires unit-normalized embeddings");
  }
  return std::min(1.0, dist / 2.0);
}

double final_cost(double c_spatial, double c_color, double c_label, double c_reid,
                  const CostConfig& cfg) {
  return cfg.weight_spatial * c_spatial + cfg.weight_color * c_color +
         cfg.weight_label * c_label + cfg.weight_reid * c_reid;
}

double fused_cost(double c_spatial, std::optional<double> c_color, double c_label,
                  std::optional<double> c_reid, const CostConfig& cfg) {
  double numerator = cfg.weight_spatial * c_spatial + cfg.weight_label * c_label;
  double denominator = cfg.weight_spatial + cfg.weight_label;
  if (c_color.has_value()) {
    numerator += cfg.weight_color * *c_color;
    denominator += cfg.weight_color;
  }
  if (c_reid.has_value()) {
    numerator += cfg.weight_reid * *c_reid;
    denominator += cfg.weight_reid;
  }
  if (denominator <= 0.0) {
    throw std::invalid_argument("fused_cost: no usable cost components (all weights zero)");
  }
  return numerator / denominator;
}

}  // namespace mft
