#include "mftrack/tracker.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace mft {

void TrackerConfig::validate() const {
  cost.validate();
  if (!(tau_match > 0.0 && tau_match <= 1.0)) {
    throw std::invalid_argument("tau_match must lie in (0, 1]");
  }
  if (max_missed < 1) throw std::invalid_argument("max_missed must be at least 1");
  if (min_hits < 1) throw std::invalid_argument("min_hits must be at least 1");
  if (frame_width < 0.0 || frame_height < 0.0) {
    throw std::invalid_argument("frame bounds must be non-negative");
  }
}

namespace {

bool center_left_frame(const KalmanState& s, const TrackerConfig& cfg) {
  if (cfg.frame_width <= 0.0 || cfg.frame_height <= 0.0) return false;
  const double cx = s.mean(0);
  const double cy = s.mean(1);
  return cx < 0.0 || cy < 0.0 || cx > cfg.frame_width || cy > cfg.frame_height;
}

}  // namespace

CostMatrix build_cost_matrix(const TrackSet& tracks, const std::vector<Detection>& detections,
                             const TrackerConfig& cfg) {
  CostMatrix m(static_cast<int>(tracks.live.size()), static_cast<int>(detections.size()));
  for (int i = 0; i < m.rows; ++i) {
    const Track& t = tracks.live[i];
    const BoundingBox predicted = kalman_to_box(t.kalman);
    for (int j = 0; j < m.cols; ++j) {
      const Detection& d = detections[j];
      const double c_spatial = spatial_cost(d.box, predicted, cfg.cost.max_box_distance);
      if (c_spatial >= 1.0) {
        m.at(i, j) = CostMatrix::forbidden();
        continue;
      }
      std::optional<double> c_color;
      if (t.histogram && d.histogram) c_color = color_cost(*d.histogram, *t.histogram);
      const double c_label = label_cost(d.label, d.confidence, t.label, t.label_confidence,
                                        cfg.cost.null_label_cost);
      std::optional<double> c_reid;
      if (t.embedding && d.embedding) c_reid = reid_cost(*d.embedding, *t.embedding, cfg.cost.reid_mode);
      m.at(i, j) = fused_cost(c_spatial, c_color, c_label, c_reid, cfg.cost);
    }
  }
  return m;
}

void step(TrackSet& tracks, const std::vector<Detection>& detections, int frame_index,
          const TrackerConfig& cfg, const Image* frame_pixels) {
  cfg.validate();
  if (frame_index <= tracks.last_frame) {
    throw std::invalid_argument("step: frame index must be strictly increasing");
  }
  for (const auto& d : detections) {
    if (d.frame != frame_index) {
      throw std::invalid_argument("step: detection frame does not match frame index");
    }
  }

  std::vector<Detection> dets = detections;
  if (frame_pixels) {
    for (auto& d : dets) {
      if (!d.histogram) d.histogram = extract_histogram(*frame_pixels, d.box, cfg.cost.histogram_bins);
    }
  }

  for (auto& t : tracks.live) t.kalman = kalman_predict(t.kalman, cfg.kalman);

  const CostMatrix m = build_cost_matrix(tracks, dets, cfg);
  const Assignment assignment = gate_assignment(solve_assignment(m), cfg.tau_match);

  for (const auto& p : assignment.matched) {
    Track& t = tracks.live[p.track];
    const Detection& d = dets[p.detection];
    t.kalman = kalman_update(t.kalman, d.box, cfg.kalman);
    if (d.histogram) t.histogram = d.histogram;
    if (d.embedding) t.embedding = d.embedding;
    if (d.label && (!t.label || d.confidence > t.label_confidence)) {
      t.label = d.label;
      t.label_confidence = d.confidence;
    }
    t.observations.push_back({frame_index, d.box, ObservationSource::matched});
    t.missed_count = 0;
    ++t.matched_count;
    t.status = TrackStatus::active;
  }

  for (int idx : assignment.unmatched_tracks) {
    Track& t = tracks.live[idx];
    t.observations.push_back({frame_index, kalman_to_box(t.kalman), ObservationSource::predicted});
    ++t.missed_count;
    t.status = TrackStatus::occluded;
  }

  for (int j : assignment.unmatched_detections) {
    const Detection& d = dets[j];
    Track t;
    t.id = tracks.next_id++;
    t.observations.push_back({frame_index, d.box, ObservationSource::matched});
    t.label = d.label;
    t.label_confidence = d.label ? d.confidence : 0.0;
    t.histogram = d.histogram;
    t.embedding = d.embedding;
    t.kalman = kalman_init(d.box, cfg.kalman);
    t.missed_count = 0;
    t.matched_count = 1;
    t.status = TrackStatus::active;
    tracks.live.push_back(std::move(t));
  }

  std::vector<Track> survivors;
  survivors.reserve(tracks.live.size());
  for (auto& t : tracks.live) {
    const bool gone = t.status == TrackStatus::occluded &&
                      (t.missed_count > cfg.max_missed || center_left_frame(t.kalman, cfg));
    if (gone) {
      t.status = TrackStatus::terminated;
      tracks.terminated.push_back(std::move(t));
    } else {
      survivors.push_back(std::move(t));
    }
  }
  tracks.live = std::move(survivors);
  tracks.last_frame = frame_index;
}

std::vector<Track> finalize(TrackSet& tracks, const TrackerConfig& cfg) {
  cfg.validate();
  for (auto& t : tracks.live) {
    t.status = TrackStatus::terminated;
    tracks.terminated.push_back(std::move(t));
  }
  tracks.live.clear();

  std::vector<Track> out;
  for (const auto& t : tracks.terminated) {
    if (t.matched_count < cfg.min_hits) continue;
    Track kept = t;
    while (!kept.observations.empty() &&
           kept.observations.back().source == ObservationSource::predicted) {
      kept.observations.pop_back();
    }
    out.push_back(std::move(kept));
  }
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  return out;
}

std::vector<TrackedBox> to_tracked_boxes(const std::vector<Track>& tracks) {
  std::vector<TrackedBox> rows;
  for (const auto& t : tracks) {
    for (const auto& o : t.observations) {
      const double conf = o.source == ObservationSource::matched ? 1.0 : 0.0;
      rows.push_back({o.frame, t.id, o.box, t.label, conf});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const TrackedBox& a, const TrackedBox& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.id < b.id;
  });
  return rows;
}

}  // namespace mft
