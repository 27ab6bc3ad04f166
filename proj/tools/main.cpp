#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mftrack/config.hpp"
#include "mftrack/detect.hpp"
#include "mftrack/eval.hpp"
#include "mftrack/synth.hpp"
#include "mftrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace mft;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  uint64_t seed = 0;
  bool seed_set = false;
};

RunConfig make_config(const CommonOpts& common) {
  RunConfig cfg;
  if (!common.config_path.empty()) cfg = load_run_config(common.config_path);
  for (const auto& item : common.overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects key=value, got '" + item + "'");
    }
    apply_config_value(cfg, item.substr(0, eq), item.substr(eq + 1));
  }
  if (common.seed_set) cfg.seed = common.seed;
  cfg.validate();
  return cfg;
}

std::vector<Image> load_frames(const std::string& dir) {
  std::vector<Image> frames;
  for (const auto& path : list_frame_files(dir)) frames.push_back(read_image(path));
  return frames;
}

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d.ppm", index);
  return buf;
}

std::map<int, std::vector<Detection>> group_detections(const std::vector<Detection>& dets) {
  std::map<int, std::vector<Detection>> by_frame;
  for (const auto& d : dets) by_frame[d.frame].push_back(d);
  return by_frame;
}

void draw_box(Image& img, const BoundingBox& box, uint8_t r, uint8_t g, uint8_t b) {
  const PixelRect rect = clip_box_to_image(box, img.width, img.height);
  if (rect.empty()) return;
  for (int t = 0; t < 2; ++t) {
    for (int x = rect.x0; x < rect.x1; ++x) {
      if (rect.y0 + t < rect.y1) img.set_rgb(x, rect.y0 + t, r, g, b);
      if (rect.y1 - 1 - t >= rect.y0) img.set_rgb(x, rect.y1 - 1 - t, r, g, b);
    }
    for (int y = rect.y0; y < rect.y1; ++y) {
      if (rect.x0 + t < rect.x1) img.set_rgb(rect.x0 + t, y, r, g, b);
      if (rect.x1 - 1 - t >= rect.x0) img.set_rgb(rect.x1 - 1 - t, y, r, g, b);
    }
  }
}

void write_overlays(const std::vector<Image>& frames, const std::vector<TrackedBox>& rows,
                    const std::string& dir) {
  static const uint8_t palette[8][3] = {{230, 60, 60},   {60, 200, 60},  {70, 110, 240},
                                        {230, 200, 50},  {200, 70, 220}, {60, 210, 210},
                                        {240, 140, 40},  {160, 160, 160}};
  fs::create_directories(dir);
  auto by_frame = std::map<int, std::vector<const TrackedBox*>>{};
  for (const auto& r : rows) by_frame[r.frame].push_back(&r);
  for (size_t f = 0; f < frames.size(); ++f) {
    Image img = frames[f];
    const auto it = by_frame.find(static_cast<int>(f));
    if (it != by_frame.end()) {
      for (const TrackedBox* r : it->second) {
        const auto& c = palette[static_cast<size_t>(r->id) % 8];
        draw_box(img, r->box, c[0], c[1], c[2]);
      }
    }
    write_image(img, dir + "/" + frame_file_name(static_cast<int>(f)));
  }
}

struct TrackOpts {
  CommonOpts common;
  std::string detections;
  std::string format = "csv";
  std::string reid;
  bool unsupervised = false;
  bool bgsub = false;
  std::string frames_dir;
  int k = 0;
  std::string output;
  std::string overlay_dir;
};

void run_track(const TrackOpts& opts) {
  const RunConfig cfg = make_config(opts.common);
  if (opts.detections.empty() == !opts.bgsub) {
    throw std::runtime_error("exactly one of --detections or --bgsub is required");
  }

  std::vector<Image> frames;
  if (!opts.frames_dir.empty()) frames = load_frames(opts.frames_dir);

  TrackerConfig tcfg = cfg.tracker;
  if (!frames.empty()) {
    tcfg.frame_width = frames[0].width;
    tcfg.frame_height = frames[0].height;
    if (tcfg.cost.max_box_distance == 0.0) {
      tcfg.cost.max_box_distance = 0.1 * std::max(frames[0].width, frames[0].height);
    }
  } else if (tcfg.cost.max_box_distance == 0.0) {
    throw std::runtime_error("t_d is automatic (0) but no --frames were given; set t_d explicitly");
  }
  if (tcfg.cost.weight_color > 0.0 && frames.empty()) {
    throw std::runtime_error("color cost enabled (beta > 0) requires --frames");
  }
  tcfg.validate();

  std::vector<Detection> dets;
  if (opts.bgsub) {
    if (frames.empty()) throw std::runtime_error("--bgsub requires --frames");
    if (opts.k < 1) throw std::runtime_error("--bgsub requires --k (background sample count)");
    const BackgroundModel model =
        learn_background(frames, opts.k, cfg.seed, cfg.diff_threshold);
    for (size_t f = 0; f < frames.size(); ++f) {
      auto found = detect_foreground(frames[f], model, cfg.filter.min_area, static_cast<int>(f));
      dets.insert(dets.end(), found.begin(), found.end());
    }
  } else {
    const auto fmt = opts.format == "mot" ? DetectionFileFormat::mot : DetectionFileFormat::csv;
    dets = load_detections(opts.detections, fmt);
    if (!opts.reid.empty()) load_reid_sidecar(opts.reid, dets);
    dets = filter_detections(dets, cfg.filter,
                             opts.unsupervised ? DetectionPath::unsupervised
                                               : DetectionPath::supervised);
  }

  int last_frame = static_cast<int>(frames.size()) - 1;
  for (const auto& d : dets) {
    if (!frames.empty() && d.frame > last_frame) {
      throw std::runtime_error("detection at frame " + std::to_string(d.frame) +
                               " is beyond the " + std::to_string(frames.size()) +
                               " frames in " + opts.frames_dir);
    }
    last_frame = std::max(last_frame, d.frame);
  }

  const auto by_frame = group_detections(dets);
  static const std::vector<Detection> kNone;
  TrackSet tracks;
  for (int f = 0; f <= last_frame; ++f) {
    const auto it = by_frame.find(f);
    step(tracks, it != by_frame.end() ? it->second : kNone, f, tcfg,
         frames.empty() ? nullptr : &frames[static_cast<size_t>(f)]);
  }
  const auto finalized = finalize(tracks, tcfg);
  const auto rows = to_tracked_boxes(finalized);
  save_ground_truth(opts.output, rows);
  if (!opts.overlay_dir.empty() && !frames.empty()) write_overlays(frames, rows, opts.overlay_dir);
  std::cout << "wrote " << opts.output << ": " << finalized.size() << " tracks, " << rows.size()
            << " rows\n";
}

struct DetectOpts {
  CommonOpts common;
  std::string frames_dir;
  int k = 0;
  std::string transfer;
  std::string format = "csv";
  std::string output;
};

void run_detect(const DetectOpts& opts) {
  const RunConfig cfg = make_config(opts.common);
  const std::vector<Image> frames = load_frames(opts.frames_dir);
  const BackgroundModel model = learn_background(frames, opts.k, cfg.seed, cfg.diff_threshold);

  std::map<int, std::vector<Detection>> sup;
  if (!opts.transfer.empty()) {
    const auto fmt = opts.format == "mot" ? DetectionFileFormat::mot : DetectionFileFormat::csv;
    // The area filter has already shaped the unsupervised boxes; the
    // supervised side is confidence-filtered before labels are transferred.
    sup = group_detections(
        filter_detections(load_detections(opts.transfer, fmt), cfg.filter,
                          DetectionPath::supervised));
  }

  static const std::vector<Detection> kNone;
  std::vector<Detection> all;
  for (size_t f = 0; f < frames.size(); ++f) {
    auto found = detect_foreground(frames[f], model, cfg.filter.min_area, static_cast<int>(f));
    if (!opts.transfer.empty()) {
      const auto it = sup.find(static_cast<int>(f));
      found = transfer_labels(found, it != sup.end() ? it->second : kNone);
    }
    all.insert(all.end(), found.begin(), found.end());
  }
  save_detections(opts.output, all);
  std::cout << "wrote " << opts.output << ": " << all.size() << " detections over "
            << frames.size() << " frames\n";
}

struct EvalOpts {
  CommonOpts common;
  std::vector<std::string> gt;
  std::vector<std::string> tracks;
  double iou_threshold = 0.0;
  bool iou_set = false;
  std::string output;
};

void run_eval(const EvalOpts& opts) {
  const RunConfig cfg = make_config(opts.common);
  const double threshold = opts.iou_set ? opts.iou_threshold : cfg.eval_iou;
  if (opts.gt.size() != opts.tracks.size()) {
    throw std::runtime_error("--gt and --tracks must be given the same number of times");
  }

  std::vector<MotReport> reports;
  for (size_t i = 0; i < opts.gt.size(); ++i) {
    reports.push_back(
        evaluate(load_ground_truth(opts.gt[i]), load_ground_truth(opts.tracks[i]), threshold));
  }

  std::ofstream report_file;
  if (!opts.output.empty()) {
    report_file.open(opts.output);
    if (!report_file) throw std::runtime_error("cannot write " + opts.output);
  }

  if (reports.size() == 1) {
    std::cout << summary_line(reports[0]) << '\n';
    if (report_file.is_open()) {
      report_file << "# per-frame tallies\n";
      for (const auto& t : reports[0].frames) {
        report_file << "frame=" << t.frame << " matches=" << t.matches << " misses=" << t.misses
                    << " fp=" << t.false_positives << " idsw=" << t.mismatches << " gt=" << t.gt
                    << '\n';
      }
      report_file << "# summary\n" << summary_line(reports[0]) << '\n';
    }
  } else {
    const AggregateReport agg = aggregate_reports(reports);
    for (size_t i = 0; i < reports.size(); ++i) {
      std::cout << "video=" << i + 1 << " " << summary_line(reports[i]) << '\n';
    }
    std::cout << "pooled " << summary_line(agg.pooled) << '\n';
    // Headline: per-video averaged rates over the pooled counts.
    std::cout << summary_line(agg.mean_mota, agg.mean_motp, agg.pooled.misses,
                              agg.pooled.false_positives, agg.pooled.mismatches,
                              agg.pooled.gt_count)
              << '\n';
    if (report_file.is_open()) {
      for (size_t i = 0; i < reports.size(); ++i) {
        report_file << "# video " << i + 1 << "\n";
        for (const auto& t : reports[i].frames) {
          report_file << "frame=" << t.frame << " matches=" << t.matches
                      << " misses=" << t.misses << " fp=" << t.false_positives
                      << " idsw=" << t.mismatches << " gt=" << t.gt << '\n';
        }
        report_file << summary_line(reports[i]) << '\n';
      }
      report_file << "# aggregate\n";
      report_file << "pooled " << summary_line(agg.pooled) << '\n';
      report_file << summary_line(agg.mean_mota, agg.mean_motp, agg.pooled.misses,
                                  agg.pooled.false_positives, agg.pooled.mismatches,
                                  agg.pooled.gt_count)
                  << '\n';
    }
  }
  if (report_file.is_open() && !report_file.flush()) {
    throw std::runtime_error("failed writing " + opts.output);
  }
}

struct SynthOpts {
  CommonOpts common;
  std::string scene;
  std::string frames_dir;
  std::string output;
};

void run_synth(const SynthOpts& opts) {
  SyntheticScene scene = load_scene(opts.scene);
  if (opts.common.seed_set) scene.seed = opts.common.seed;
  const SceneOutput out = generate_scene(scene);

  fs::create_directories(opts.frames_dir);
  for (size_t f = 0; f < out.frames.size(); ++f) {
    write_image(out.frames[f], opts.frames_dir + "/" + frame_file_name(static_cast<int>(f)));
  }
  save_ground_truth(opts.output, out.gt);
  std::cout << "wrote " << out.frames.size() << " frames to " << opts.frames_dir << ", "
            << out.gt.size() << " gt rows to " << opts.output << '\n';
}

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--config", common.config_path, "configuration file (flat key = value lines)");
  cmd->add_option("--set", common.overrides, "override one config key, e.g. --set alpha=0.6")
      ->type_name("KEY=VALUE");
  cmd->add_option("--seed", common.seed, "RNG seed (overrides the config value)");
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mftrack: multi-feature multiple-object tracking"};
  app.require_subcommand(1);

  TrackOpts track_opts;
  auto* track = app.add_subcommand("track", "associate detections into tracks");
  add_common(track, track_opts.common);
  track->add_option("--detections", track_opts.detections, "detection file (supervised path)");
  track->add_option("--format", track_opts.format, "detection file format")
      ->check(CLI::IsMember({"csv", "mot"}));
  track->add_option("--reid", track_opts.reid, "re-ID embedding sidecar file");
  track->add_flag("--unsupervised", track_opts.unsupervised,
                  "treat --detections as unsupervised output (area filter instead of confidence)");
  track->add_flag("--bgsub", track_opts.bgsub, "detect via background subtraction (needs --frames)");
  track->add_option("--frames", track_opts.frames_dir, "directory of .ppm/.pgm frames");
  track->add_option("--k", track_opts.k, "background-learning sample count (with --bgsub)");
  track->add_option("--output", track_opts.output, "output track file")->required();
  track->add_option("--overlay", track_opts.overlay_dir, "write frames with drawn boxes here");

  DetectOpts detect_opts;
  auto* detect = app.add_subcommand("detect", "unsupervised background-subtraction detector");
  add_common(detect, detect_opts.common);
  detect->add_option("--frames", detect_opts.frames_dir, "directory of .ppm/.pgm frames")
      ->required();
  detect->add_option("--k", detect_opts.k, "background-learning sample count")->required();
  detect->add_option("--transfer", detect_opts.transfer,
                     "supervised detection file whose labels are transferred onto overlapping boxes");
  detect->add_option("--format", detect_opts.format, "format of the --transfer file")
      ->check(CLI::IsMember({"csv", "mot"}));
  detect->add_option("--output", detect_opts.output, "output detection file")->required();

  EvalOpts eval_opts;
  auto* eval = app.add_subcommand("eval", "CLEAR MOT evaluation");
  add_common(eval, eval_opts.common);
  eval->add_option("--gt", eval_opts.gt, "ground-truth file (repeat for multiple videos)")
      ->required();
  eval->add_option("--tracks", eval_opts.tracks, "track file (repeat to match --gt)")->required();
  eval->add_option("--iou", eval_opts.iou_threshold, "IoU threshold (default from config: 0.3)");
  eval->add_option("--output", eval_opts.output, "write the full report here");

  SynthOpts synth_opts;
  auto* synth = app.add_subcommand("synth", "render a scripted synthetic scene");
  add_common(synth, synth_opts.common);
  synth->add_option("--scene", synth_opts.scene, "scene script file")->required();
  synth->add_option("--frames", synth_opts.frames_dir, "output frame directory")->required();
  synth->add_option("--output", synth_opts.output, "output ground-truth file")->required();

  CLI11_PARSE(app, argc, argv);

  track_opts.common.seed_set = track->count("--seed") > 0;
  detect_opts.common.seed_set = detect->count("--seed") > 0;
  eval_opts.common.seed_set = eval->count("--seed") > 0;
  synth_opts.common.seed_set = synth->count("--seed") > 0;
  eval_opts.iou_set = eval->count("--iou") > 0;

  if (*track) return guarded([&] { run_track(track_opts); });
  if (*detect) return guarded([&] { run_detect(detect_opts); });
  if (*eval) return guarded([&] { run_eval(eval_opts); });
  return guarded([&] { run_synth(synth_opts); });
}
