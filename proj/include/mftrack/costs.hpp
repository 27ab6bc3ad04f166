#pragma once

#include <optional>

#include "mftrack/image.hpp"
#include "mftrack/types.hpp"

namespace mft {

enum class ReidMode {
  corrected,  // distance-based: identical embeddings cost 0 (default)
  verbatim,   // one minus Euclidean distance, clamped
};

/// Fusion weights and feature knobs shared by every pairwise cost.
struct CostConfig {
  double weight_spatial = 0.7;
  double weight_color = 0.1;
  double weight_label = 0.1;
  double weight_reid = 0.1;
  /// Corner-distance at which the spatial cost saturates to 1, in pixels.
  double max_box_distance = 64.0;
  ReidMode reid_mode = ReidMode::corrected;
  /// Cost used when either label is unavailable.
  double null_label_cost = 0.5;
  int histogram_bins = 256;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Per-channel count histograms of the pixels inside the box (clipped to the
/// image). Throws "empty region" when the box misses the image entirely.
ColorHistogram extract_histogram(const Image& frame, const BoundingBox& box, int bins = 256);

/// Mean absolute corner-coordinate difference of two boxes.
double mean_box_distance(const BoundingBox& a, const BoundingBox& b);

/// Spatial cost in [0, 1]: 0 for identical boxes, saturating to 1 once the
/// mean corner distance reaches max_distance.
double spatial_cost(const BoundingBox& detection, const BoundingBox& tracked, double max_distance);

/// Mean per-channel Bhattacharyya cost of two histograms, in [0, 1].
double color_cost(const ColorHistogram& detection, const ColorHistogram& tracked);

/// Label agreement cost: matching labels are discounted by the mean
/// confidence, differing labels cost 1, a missing label costs null_label_cost.
double label_cost(const ClassLabel& label_a, double confidence_a, const ClassLabel& label_b,
                  double confidence_b, double null_label_cost);

/// Re-identification cost from embedding Euclidean distance, in [0, 1].
double reid_cost(const ReidEmbedding& a, const ReidEmbedding& b, ReidMode mode);

/// Weighted fusion of the four component costs.
double final_cost(double c_spatial, double c_color, double c_label, double c_reid,
                  const CostConfig& cfg);

/// Fusion tolerating missing color/re-ID components: absent components are
/// dropped and the remaining weights renormalized to sum to 1.
double fused_cost(double c_spatial, std::optional<double> c_color, double c_label,
                  std::optional<double> c_reid, const CostConfig& cfg);

}  // namespace mft
