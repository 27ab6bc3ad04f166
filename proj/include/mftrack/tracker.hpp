#pragma once

#include <vector>

#include "mftrack/assignment.hpp"
#include "mftrack/costs.hpp"
#include "mftrack/image.hpp"
#include "mftrack/kalman.hpp"
#include "mftrack/types.hpp"

namespace mft {

struct TrackerConfig {
  CostConfig cost;
  KalmanConfig kalman;
  double tau_match = 0.8;
  int max_missed = 10;
  int min_hits = 3;
  // Frame bounds in pixels for the exit rule; 0 leaves the scene unbounded.
  double frame_width = 0.0;
  double frame_height = 0.0;

  void validate() const;
};

struct TrackSet {
  std::vector<Track> live;  // active and occluded, in creation order
  std::vector<Track> terminated;
  int next_id = 1;
  int last_frame = -1;
};

/// Fused cost of every live track (at its predicted box, with its stored
/// appearance) against every detection. Pairs beyond the spatial horizon
/// are forbidden outright.
CostMatrix build_cost_matrix(const TrackSet& tracks, const std::vector<Detection>& detections,
                             const TrackerConfig& cfg);

/// Advances the tracker by one frame: predict, associate, update matched
/// tracks, spawn tracks for unmatched detections, coast unmatched tracks on
/// their predictions, and terminate tracks that exceeded max_missed or left
/// the frame. When frame_pixels is given, detections lacking a histogram get
/// one extracted from it.
void step(TrackSet& tracks, const std::vector<Detection>& detections, int frame_index,
          const TrackerConfig& cfg, const Image* frame_pixels = nullptr);

/// Terminates everything, drops tracks with fewer than min_hits matches, and
/// trims trailing predicted-only observations. Result is sorted by id.
std::vector<Track> finalize(TrackSet& tracks, const TrackerConfig& cfg);

/// Flattens finalized tracks into per-frame rows sorted by (frame, id).
/// Matched observations carry confidence 1, coasted predictions 0.
std::vector<TrackedBox> to_tracked_boxes(const std::vector<Track>& tracks);

}  // namespace mft
