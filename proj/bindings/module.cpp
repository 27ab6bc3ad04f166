#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mftrack/assignment.hpp"
#include "mftrack/costs.hpp"
#include "mftrack/detect.hpp"
#include "mftrack/eval.hpp"
#include "mftrack/kalman.hpp"
#include "mftrack/tracker.hpp"

namespace py = pybind11;
using namespace mft;

namespace {

using Box = std::array<double, 4>;
using DetRow = std::tuple<int, double, double, double, double, double, std::optional<std::string>>;
using TrackRow =
    std::tuple<int, int, double, double, double, double, double, std::optional<std::string>>;
using EvalRow = std::tuple<int, int, double, double, double, double>;

BoundingBox to_box(const Box& b) { return BoundingBox(b[0], b[1], b[2], b[3]); }

Box from_box(const BoundingBox& b) { return {b.x_min, b.y_min, b.x_max, b.y_max}; }

using ByteArray = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>;

Image to_image(const ByteArray& arr) {
  if (arr.ndim() != 3 || arr.shape(2) != 3) {
    throw std::invalid_argument("expected an image array of shape (height, width, 3)");
  }
  Image img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  std::copy(arr.data(), arr.data() + arr.size(), img.data.begin());
  return img;
}

py::array_t<uint8_t> from_image(const Image& img) {
  py::array_t<uint8_t> arr({img.height, img.width, 3});
  std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
  return arr;
}

ColorHistogram to_histogram(const std::vector<std::vector<double>>& channels) {
  if (channels.size() != 3) throw std::invalid_argument("expected 3 channel histograms");
  if (channels[1].size() != channels[0].size() || channels[2].size() != channels[0].size()) {
    throw std::invalid_argument("channel histograms must share one bin count");
  }
  ColorHistogram h(static_cast<int>(channels[0].size()));
  for (size_t c = 0; c < 3; ++c) h.counts[c] = channels[c];
  return h;
}

CostConfig make_cost_config(double alpha, double beta, double gamma, double lam, double t_d,
                            double null_label_cost) {
  CostConfig cfg;
  cfg.weight_spatial = alpha;
  cfg.weight_color = beta;
  cfg.weight_label = gamma;
  cfg.weight_reid = lam;
  cfg.max_box_distance = t_d;
  cfg.null_label_cost = null_label_cost;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_mftrack, m) {
  m.doc() = "Multi-feature multiple-object tracking: costs, assignment, Kalman, tracking, CLEAR MOT";
  m.attr("__version__") = "0.1.0";

  m.def(
      "iou", [](const Box& a, const Box& b) { return iou(to_box(a), to_box(b)); }, py::arg("a"),
      py::arg("b"), "Intersection over union of two (x_min, y_min, x_max, y_max) boxes.");

  m.def(
      "mean_box_distance",
      [](const Box& a, const Box& b) { return mean_box_distance(to_box(a), to_box(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "spatial_cost",
      [](const Box& d, const Box& t, double t_d) { return spatial_cost(to_box(d), to_box(t), t_d); },
      py::arg("detection"), py::arg("tracked"), py::arg("t_d"));

  m.def(
      "color_cost",
      [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
        return color_cost(to_histogram(a), to_histogram(b));
      },
      py::arg("detection"), py::arg("tracked"),
      "Mean per-channel Bhattacharyya cost of two 3-channel histograms.");

  m.def(
      "label_cost",
      [](const std::optional<std::string>& a, double wa, const std::optional<std::string>& b,
         double wb, double null_label_cost) { return label_cost(a, wa, b, wb, null_label_cost); },
      py::arg("label_a"), py::arg("confidence_a"), py::arg("label_b"), py::arg("confidence_b"),
      py::arg("null_label_cost") = 0.5);

  m.def(
      "reid_cost",
      [](std::vector<double> a, std::vector<double> b, const std::string& mode) {
        ReidEmbedding ea{std::move(a)};
        ReidEmbedding eb{std::move(b)};
        if (mode == "corrected") return reid_cost(ea.unit(), eb.unit(), ReidMode::corrected);
        if (mode == "verbatim") return reid_cost(ea, eb, ReidMode::verbatim);
        throw std::invalid_argument("mode must be 'corrected' or 'verbatim'");
      },
      py::arg("a"), py::arg("b"), py::arg("mode") = "corrected",
      "Embedding cost; corrected mode unit-normalizes its inputs first.");

  m.def(
      "extract_histogram",
      [](const ByteArray& image, const Box& box, int bins) {
        const ColorHistogram h = extract_histogram(to_image(image), to_box(box), bins);
        return std::vector<std::vector<double>>{h.counts[0], h.counts[1], h.counts[2]};
      },
      py::arg("image"), py::arg("box"), py::arg("bins") = 256);

  m.def(
      "final_cost",
      [](double c_spatial, double c_color, double c_label, double c_reid, double alpha,
         double beta, double gamma, double lam, double t_d) {
        return final_cost(c_spatial, c_color, c_label, c_reid,
                          make_cost_config(alpha, beta, gamma, lam, t_d, 0.5));
      },
      py::arg("c_spatial"), py::arg("c_color"), py::arg("c_label"), py::arg("c_reid"),
      py::arg("alpha") = 0.7, py::arg("beta") = 0.1, py::arg("gamma") = 0.1, py::arg("lam") = 0.1,
      py::arg("t_d") = 64.0);

  m.def(
      "fused_cost",
      [](double c_spatial, std::optional<double> c_color, double c_label,
         std::optional<double> c_reid, double alpha, double beta, double gamma, double lam,
         double t_d) {
        return fused_cost(c_spatial, c_color, c_label, c_reid,
                          make_cost_config(alpha, beta, gamma, lam, t_d, 0.5));
      },
      py::arg("c_spatial"), py::arg("c_color"), py::arg("c_label"), py::arg("c_reid") = py::none(),
      py::arg("alpha") = 0.7, py::arg("beta") = 0.1, py::arg("gamma") = 0.1, py::arg("lam") = 0.1,
      py::arg("t_d") = 64.0,
      "Weighted fusion; missing color/re-ID components renormalize the rest.");

  m.def(
      "solve_assignment",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& matrix) {
        if (matrix.ndim() != 2) throw std::invalid_argument("expected a 2-D cost matrix");
        CostMatrix cm(static_cast<int>(matrix.shape(0)), static_cast<int>(matrix.shape(1)));
        const auto view = matrix.unchecked<2>();
        for (int r = 0; r < cm.rows; ++r) {
          for (int c = 0; c < cm.cols; ++c) cm.at(r, c) = view(r, c);
        }
        const Assignment a = solve_assignment(cm);
        std::vector<std::tuple<int, int, double>> matched;
        for (const auto& p : a.matched) matched.emplace_back(p.track, p.detection, p.cost);
        py::dict out;
        out["matched"] = matched;
        out["unmatched_tracks"] = a.unmatched_tracks;
        out["unmatched_detections"] = a.unmatched_detections;
        return out;
      },
      py::arg("cost_matrix"),
      "Min-cost max-cardinality matching; +inf entries are forbidden pairs.");

  py::class_<KalmanState>(m, "KalmanState")
      .def_property_readonly("mean", [](const KalmanState& s) { return s.mean; })
      .def_property_readonly("covariance", [](const KalmanState& s) { return s.covariance; });

  m.def(
      "kalman_init", [](const Box& box) { return kalman_init(to_box(box), KalmanConfig{}); },
      py::arg("box"));
  m.def(
      "kalman_predict", [](const KalmanState& s) { return kalman_predict(s, KalmanConfig{}); },
      py::arg("state"));
  m.def(
      "kalman_update",
      [](const KalmanState& s, const Box& box) {
        return kalman_update(s, to_box(box), KalmanConfig{});
      },
      py::arg("state"), py::arg("box"));
  m.def(
      "kalman_box", [](const KalmanState& s) { return from_box(kalman_to_box(s)); },
      py::arg("state"), "The state's (x_min, y_min, x_max, y_max) box.");

  m.def(
      "track_sequence",
      [](const std::vector<DetRow>& rows, double t_d, double tau_match, int max_missed,
         int min_hits, double alpha, double beta, double gamma, double lam,
         double null_label_cost) {
        TrackerConfig cfg;
        cfg.cost = make_cost_config(alpha, beta, gamma, lam, t_d, null_label_cost);
        cfg.tau_match = tau_match;
        cfg.max_missed = max_missed;
        cfg.min_hits = min_hits;
        cfg.validate();

        std::map<int, std::vector<Detection>> by_frame;
        int last = -1;
        for (const auto& [frame, x0, y0, x1, y1, conf, label] : rows) {
          by_frame[frame].emplace_back(frame, BoundingBox(x0, y0, x1, y1), label, conf);
          last = std::max(last, frame);
        }
        static const std::vector<Detection> kNone;
        TrackSet tracks;
        for (int f = 0; f <= last; ++f) {
          const auto it = by_frame.find(f);
          step(tracks, it != by_frame.end() ? it->second : kNone, f, cfg);
        }
        std::vector<TrackRow> out;
        for (const auto& row : to_tracked_boxes(finalize(tracks, cfg))) {
          out.emplace_back(row.frame, row.id, row.box.x_min, row.box.y_min, row.box.x_max,
                           row.box.y_max, row.confidence, row.label);
        }
        return out;
      },
      py::arg("detections"), py::arg("t_d") = 64.0, py::arg("tau_match") = 0.8,
      py::arg("max_missed") = 10, py::arg("min_hits") = 3, py::arg("alpha") = 0.7,
      py::arg("beta") = 0.1, py::arg("gamma") = 0.1, py::arg("lam") = 0.1,
      py::arg("null_label_cost") = 0.5,
      "Runs the tracker over (frame, x_min, y_min, x_max, y_max, confidence, label) rows and "
      "returns finalized (frame, id, x_min, y_min, x_max, y_max, confidence, label) rows.");

  m.def(
      "evaluate",
      [](const std::vector<EvalRow>& gt, const std::vector<EvalRow>& hyp, double iou_threshold) {
        auto to_rows = [](const std::vector<EvalRow>& items) {
          std::vector<TrackedBox> rows;
          for (const auto& [frame, id, x0, y0, x1, y1] : items) {
            rows.push_back({frame, id, BoundingBox(x0, y0, x1, y1), std::nullopt, 1.0});
          }
          return rows;
        };
        const MotReport r = mft::evaluate(to_rows(gt), to_rows(hyp), iou_threshold);
        py::dict out;
        out["mota"] = r.mota;
        out["motp"] = r.motp;
        out["matches"] = r.matches;
        out["fn"] = r.misses;
        out["fp"] = r.false_positives;
        out["idsw"] = r.mismatches;
        out["gt"] = r.gt_count;
        return out;
      },
      py::arg("gt"), py::arg("hyp"), py::arg("iou_threshold") = 0.3,
      "CLEAR MOT metrics over (frame, id, x_min, y_min, x_max, y_max) rows.");

  m.def(
      "learn_background",
      [](const std::vector<ByteArray>& frames, int k, uint64_t seed, double diff_threshold) {
        std::vector<Image> imgs;
        imgs.reserve(frames.size());
        for (const auto& f : frames) imgs.push_back(to_image(f));
        return from_image(learn_background(imgs, k, seed, diff_threshold).median);
      },
      py::arg("frames"), py::arg("k"), py::arg("seed") = 0, py::arg("diff_threshold") = 30.0,
      "Per-pixel median over k frames sampled without replacement; returns the background image.");

  m.def(
      "detect_foreground",
      [](const ByteArray& frame, const ByteArray& background, double diff_threshold,
         double min_area, int frame_index) {
        BackgroundModel model;
        model.median = to_image(background);
        model.diff_threshold = diff_threshold;
        std::vector<Box> out;
        for (const auto& d : detect_foreground(to_image(frame), model, min_area, frame_index)) {
          out.push_back(from_box(d.box));
        }
        return out;
      },
      py::arg("frame"), py::arg("background"), py::arg("diff_threshold") = 30.0,
      py::arg("min_area") = 2000.0, py::arg("frame_index") = 0,
      "Connected foreground components as (x_min, y_min, x_max, y_max) boxes.");
}
