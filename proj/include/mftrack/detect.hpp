#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mftrack/image.hpp"
#include "mftrack/types.hpp"

namespace mft {

enum class DetectionFileFormat { csv, mot };

enum class DetectionPath { supervised, unsupervised };

struct DetectionFilterConfig {
  double min_confidence = 0.4;
  double min_area = 2000.0;

  void validate() const;
};

/// Loads `frame,x_min,y_min,x_max,y_max,confidence,label` rows (label may be
/// the literal `null`), or MOTChallenge `frame,id,x,y,w,h,conf,...` rows with
/// 1-based frames when fmt is mot. Result is stably ordered by frame.
std::vector<Detection> load_detections(const std::string& path, DetectionFileFormat fmt);

void save_detections(const std::string& path, const std::vector<Detection>& dets);

/// Attaches unit-normalized embeddings from a sidecar file: one `dim=D`
/// header, then `frame,det_row_index,v0,...,v{D-1}` rows indexing into that
/// frame's detections in file order.
void load_reid_sidecar(const std::string& path, std::vector<Detection>& dets);

/// Ground-truth / track rows: `frame,object_id,x_min,y_min,x_max,y_max,confidence,label`.
std::vector<TrackedBox> load_ground_truth(const std::string& path);

void save_ground_truth(const std::string& path, const std::vector<TrackedBox>& rows);

/// Supervised detections are kept when confidence >= min_confidence;
/// unsupervised ones when box area > min_area.
std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         const DetectionFilterConfig& cfg, DetectionPath path);

struct BackgroundModel {
  Image median;
  double diff_threshold = 30.0;
  std::vector<int> learned_from;
};

/// Per-pixel per-channel median over k frames sampled uniformly without
/// replacement from the sequence.
BackgroundModel learn_background(const std::vector<Image>& frames, int k, uint64_t seed,
                                 double diff_threshold = 30.0);

/// Foreground mask (max-channel absolute difference > diff_threshold),
/// 8-connected components, tight boxes; boxes with area <= min_area dropped.
/// Resulting detections carry null labels and confidence 0.
std::vector<Detection> detect_foreground(const Image& frame, const BackgroundModel& model,
                                         double min_area, int frame_index);

/// Copies label and confidence onto each unsupervised detection from the
/// supervised detection of maximal IoU among those overlapping it; ties go to
/// higher confidence, then lower index. Boxes are never altered.
std::vector<Detection> transfer_labels(const std::vector<Detection>& unsup,
                                       const std::vector<Detection>& sup);

}  // namespace mft
