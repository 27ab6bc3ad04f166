#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mftrack/geometry.hpp"
#include "mftrack/kalman.hpp"

namespace mft {

/// Object category; empty optional means "no label available".
using ClassLabel = std::optional<std::string>;

/// Per-channel count histograms over 8-bit pixel values.
struct ColorHistogram {
  int bins = 256;
  std::array<std::vector<double>, 3> counts;

  ColorHistogram() = default;

  explicit ColorHistogram(int bins_per_channel) : bins(bins_per_channel) {
    if (bins < 1 || bins > 256) {
      throw std::invalid_argument("ColorHistogram: bins must be in [1, 256]");
    }
    for (auto& channel : counts) {
      channel.assign(static_cast<size_t>(bins), 0.0);
    }
  }

  double channel_total(int channel) const {
    double total = 0.0;
    for (double v : counts[static_cast<size_t>(channel)]) total += v;
    return total;
  }
};

/// Fixed-length appearance vector compared by Euclidean distance.
struct ReidEmbedding {
  std::vector<double> values;
  bool normalized = false;

  double norm() const {
    double sq = 0.0;
    for (double v : values) sq += v * v;
    return std::sqrt(sq);
  }

  /// Scaled copy with unit Euclidean norm.
  ReidEmbedding unit() const {
    const double n = norm();
    if (n <= 0.0) {
      throw std::invalid_argument("ReidEmbedding: cannot normalize a zero vector");
    }
    ReidEmbedding out;
    out.values.reserve(values.size());
    for (double v : values) out.values.push_back(v / n);
    out.normalized = true;
    return out;
  }
};

/// One candidate object in one frame.
struct Detection {
  int frame = 0;
  BoundingBox box;
  ClassLabel label;
  double confidence = 0.0;  // 0 when unknown
  std::optional<ReidEmbedding> embedding;
  std::optional<ColorHistogram> histogram;

  Detection(int frame_index, BoundingBox b, ClassLabel l = std::nullopt,
            double conf = 0.0)
      : frame(frame_index), box(b), label(std::move(l)), confidence(conf) {
    if (frame < 0) {
      throw std::invalid_argument("Detection: frame index must be non-negative");
    }
    if (confidence < 0.0 || confidence > 1.0) {
      throw std::invalid_argument("Detection: confidence must be in [0, 1]");
    }
  }
};

enum class ObservationSource { matched, predicted };

struct Observation {
  int frame;
  BoundingBox box;
  ObservationSource source;
};

enum class TrackStatus { active, occluded, terminated };

/// A tracked object's identity across frames.
struct Track {
  int id = 0;
  std::vector<Observation> observations;
  ClassLabel label;
  double label_confidence = 0.0;
  std::optional<ColorHistogram> histogram;  // from the last matched detection
  std::optional<ReidEmbedding> embedding;   // from the last matched detection
  KalmanState kalman;
  int missed_count = 0;
  int matched_count = 0;
  TrackStatus status = TrackStatus::active;
};

/// One identified box in one frame; the unit of ground truth, emitted
/// trajectories and evaluation.
struct TrackedBox {
  int frame;
  int id;
  BoundingBox box;
  ClassLabel label;
  double confidence = 0.0;
};

}  // namespace mft
