#include "mftrack/eval.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "mftrack/assignment.hpp"
#include "mftrack/geometry.hpp"

namespace mft {

namespace {

using FrameBoxes = std::map<int, std::map<int, BoundingBox>>;  // frame -> id -> box

FrameBoxes group_rows(const std::vector<TrackedBox>& rows, const char* side) {
  FrameBoxes out;
  for (const auto& r : rows) {
    const auto [it, inserted] = out[r.frame].emplace(r.id, r.box);
    (void)it;
    if (!inserted) {
      throw std::runtime_error(std::string("duplicate ") + side + " row for frame " +
                               std::to_string(r.frame) + ", id " + std::to_string(r.id));
    }
  }
  return out;
}

}  // namespace

MotReport evaluate(const std::vector<TrackedBox>& gt, const std::vector<TrackedBox>& hyp,
                   double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw std::invalid_argument("iou_threshold must lie in (0, 1)");
  }
  if (gt.empty()) throw std::invalid_argument("evaluate: ground truth is empty");

  const FrameBoxes gt_frames = group_rows(gt, "ground-truth");
  const FrameBoxes hyp_frames = group_rows(hyp, "hypothesis");

  std::set<int> frame_ids;
  for (const auto& [f, boxes] : gt_frames) frame_ids.insert(f);
  for (const auto& [f, boxes] : hyp_frames) frame_ids.insert(f);

  MotReport report;
  double iou_sum = 0.0;
  std::map<int, int> prev;  // previous frame's correspondence, gt id -> hyp id
  std::map<int, int> last;  // last matched hypothesis id per gt id, across gaps

  static const std::map<int, BoundingBox> kNoBoxes;
  for (int f : frame_ids) {
    const auto git = gt_frames.find(f);
    const auto hit = hyp_frames.find(f);
    const auto& g_boxes = git != gt_frames.end() ? git->second : kNoBoxes;
    const auto& h_boxes = hit != hyp_frames.end() ? hit->second : kNoBoxes;

    std::map<int, int> pairs;
    std::set<int> used_hyp;
    for (const auto& [g, h] : prev) {
      const auto gb = g_boxes.find(g);
      const auto hb = h_boxes.find(h);
      if (gb == g_boxes.end() || hb == h_boxes.end()) continue;
      const double overlap = iou(gb->second, hb->second);
      if (overlap >= iou_threshold) {
        pairs.emplace(g, h);
        used_hyp.insert(h);
        iou_sum += overlap;
      }
    }

    std::vector<int> g_rest, h_rest;
    for (const auto& [g, box] : g_boxes) {
      if (!pairs.count(g)) g_rest.push_back(g);
    }
    for (const auto& [h, box] : h_boxes) {
      if (!used_hyp.count(h)) h_rest.push_back(h);
    }
    CostMatrix m(static_cast<int>(g_rest.size()), static_cast<int>(h_rest.size()));
    for (int i = 0; i < m.rows; ++i) {
      for (int j = 0; j < m.cols; ++j) {
        const double overlap = iou(g_boxes.at(g_rest[static_cast<size_t>(i)]),
                                   h_boxes.at(h_rest[static_cast<size_t>(j)]));
        m.at(i, j) = overlap >= iou_threshold ? 1.0 - overlap : CostMatrix::forbidden();
      }
    }
    for (const auto& p : solve_assignment(m).matched) {
      const int g = g_rest[static_cast<size_t>(p.track)];
      const int h = h_rest[static_cast<size_t>(p.detection)];
      pairs.emplace(g, h);
      iou_sum += iou(g_boxes.at(g), h_boxes.at(h));
    }

    FrameTally tally;
    tally.frame = f;
    tally.gt = static_cast<int>(g_boxes.size());
    tally.matches = static_cast<int>(pairs.size());
    tally.misses = static_cast<int>(g_boxes.size() - pairs.size());
    tally.false_positives = static_cast<int>(h_boxes.size() - pairs.size());
    for (const auto& [g, h] : pairs) {
      const auto it = last.find(g);
      if (it != last.end() && it->second != h) ++tally.mismatches;
      last[g] = h;
    }
    report.frames.push_back(tally);
    report.matches += tally.matches;
    report.misses += tally.misses;
    report.false_positives += tally.false_positives;
    report.mismatches += tally.mismatches;
    report.gt_count += tally.gt;
    prev = std::move(pairs);
  }

  report.mota = 1.0 - static_cast<double>(report.misses + report.false_positives +
                                          report.mismatches) /
                          static_cast<double>(report.gt_count);
  report.motp = report.matches > 0 ? iou_sum / static_cast<double>(report.matches) : 0.0;
  return report;
}

AggregateReport aggregate_reports(const std::vector<MotReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate_reports: no reports");
  AggregateReport agg;
  double iou_weighted = 0.0;
  for (const auto& r : reports) {
    agg.mean_mota += r.mota;
    agg.mean_motp += r.motp;
    agg.pooled.matches += r.matches;
    agg.pooled.misses += r.misses;
    agg.pooled.false_positives += r.false_positives;
    agg.pooled.mismatches += r.mismatches;
    agg.pooled.gt_count += r.gt_count;
    iou_weighted += r.motp * static_cast<double>(r.matches);
  }
  agg.mean_mota /= static_cast<double>(reports.size());
  agg.mean_motp /= static_cast<double>(reports.size());
  agg.pooled.mota = 1.0 - static_cast<double>(agg.pooled.misses + agg.pooled.false_positives +
                                              agg.pooled.mismatches) /
                              static_cast<double>(agg.pooled.gt_count);
  agg.pooled.motp = agg.pooled.matches > 0
                        ? iou_weighted / static_cast<double>(agg.pooled.matches)
                        : 0.0;
  return agg;
}

std::string summary_line(double mota, double motp, long long fn, long long fp, long long idsw,
                         long long gt) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "MOTA=%.6f MOTP=%.6f FN=%lld FP=%lld IDSW=%lld GT=%lld", mota,
                motp, fn, fp, idsw, gt);
  return buf;
}

std::string summary_line(const MotReport& report) {
  return summary_line(report.mota, report.motp, report.misses, report.false_positives,
                      report.mismatches, report.gt_count);
}

void write_report(const std::string& path, const MotReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# per-frame tallies\n";
  for (const auto& t : report.frames) {
    out << "frame=" << t.frame << " matches=" << t.matches << " misses=" << t.misses
        << " fp=" << t.false_positives << " idsw=" << t.mismatches << " gt=" << t.gt << '\n';
  }
  out << "# summary\n" << summary_line(report) << '\n';
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

}  // namespace mft
