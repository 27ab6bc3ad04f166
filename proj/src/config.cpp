#include "mftrack/config.hpp"

#include <fstream>
#include <stdexcept>

#include "mftrack/text.hpp"

namespace mft {

void RunConfig::validate() const {
  TrackerConfig t = tracker;
  if (t.cost.max_box_distance == 0.0) t.cost.max_box_distance = 1.0;  // auto, resolved at run time
  t.validate();
  filter.validate();
  if (diff_threshold < 0.0) throw std::invalid_argument("diff_threshold must be non-negative");
  if (!(eval_iou > 0.0 && eval_iou < 1.0)) {
    throw std::invalid_argument("eval_iou must lie in (0, 1)");
  }
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&] { return parse_double_field(value); };
  auto as_int = [&] { return static_cast<int>(parse_int_field(value)); };

  if (key == "alpha") {
    cfg.tracker.cost.weight_spatial = as_double();
  } else if (key == "beta") {
    cfg.tracker.cost.weight_color = as_double();
  } else if (key == "gamma") {
    cfg.tracker.cost.weight_label = as_double();
  } else if (key == "lambda") {
    cfg.tracker.cost.weight_reid = as_double();
  } else if (key == "t_d") {
    cfg.tracker.cost.max_box_distance = as_double();
  } else if (key == "reid_mode") {
    if (value == "corrected") {
      cfg.tracker.cost.reid_mode = ReidMode::corrected;
    } else if (value == "verbatim") {
      cfg.tracker.cost.reid_mode = ReidMode::verbatim;
    } else {
      throw std::invalid_argument("reid_mode must be 'corrected' or 'verbatim'");
    }
  } else if (key == "null_label_cost") {
    cfg.tracker.cost.null_label_cost = as_double();
  } else if (key == "histogram_bins") {
    cfg.tracker.cost.histogram_bins = as_int();
  } else if (key == "tau_match") {
    cfg.tracker.tau_match = as_double();
  } else if (key == "max_missed") {
    cfg.tracker.max_missed = as_int();
  } else if (key == "min_hits") {
    cfg.tracker.min_hits = as_int();
  } else if (key == "position_std_weight") {
    cfg.tracker.kalman.position_std_weight = as_double();
  } else if (key == "velocity_std_weight") {
    cfg.tracker.kalman.velocity_std_weight = as_double();
  } else if (key == "min_confidence") {
    cfg.filter.min_confidence = as_double();
  } else if (key == "min_area") {
    cfg.filter.min_area = as_double();
  } else if (key == "diff_threshold") {
    cfg.diff_threshold = as_double();
  } else if (key == "eval_iou") {
    cfg.eval_iou = as_double();
  } else if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(parse_int_field(value));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const size_t eq = content.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_config_value(cfg, trim(content.substr(0, eq)), trim(content.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return cfg;
}

}  // namespace mft
