#pragma once

#include <string>
#include <vector>

#include "mftrack/types.hpp"

namespace mft {

struct FrameTally {
  int frame = 0;
  int matches = 0;
  int misses = 0;
  int false_positives = 0;
  int mismatches = 0;
  int gt = 0;
};

struct MotReport {
  std::vector<FrameTally> frames;
  long long matches = 0;
  long long misses = 0;
  long long false_positives = 0;
  long long mismatches = 0;
  long long gt_count = 0;
  double mota = 0.0;
  double motp = 0.0;  // mean IoU over matched pairs; 0 when nothing matched
};

/// CLEAR MOT tally: per frame, correspondences from the previous frame that
/// still overlap at or above the threshold persist; the remainder is matched
/// by minimum-cost assignment on (1 - IoU) restricted to pairs at or above
/// the threshold. A mismatch is counted whenever a ground-truth id's matched
/// hypothesis id differs from its last matched hypothesis id.
MotReport evaluate(const std::vector<TrackedBox>& gt, const std::vector<TrackedBox>& hyp,
                   double iou_threshold);

struct AggregateReport {
  double mean_mota = 0.0;  // unweighted per-video averages
  double mean_motp = 0.0;
  MotReport pooled;  // counts summed, rates recomputed from the pooled counts
};

AggregateReport aggregate_reports(const std::vector<MotReport>& reports);

/// `MOTA=<v> MOTP=<v> FN=<n> FP=<n> IDSW=<n> GT=<n>` with six-decimal rates.
std::string summary_line(const MotReport& report);
std::string summary_line(double mota, double motp, long long fn, long long fp, long long idsw,
                         long long gt);

/// Per-frame tallies followed by the summary block.
void write_report(const std::string& path, const MotReport& report);

}  // namespace mft
