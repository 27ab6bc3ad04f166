#pragma once

#include <cstdint>
#include <string>

#include "mftrack/detect.hpp"
#include "mftrack/tracker.hpp"

namespace mft {

/// Everything the CLI commands consume, loadable from a flat `key = value`
/// file; t_d = 0 means "resolve to 0.1 * max(frame dimension) at run time".
struct RunConfig {
  TrackerConfig tracker;
  DetectionFilterConfig filter;
  double diff_threshold = 30.0;
  double eval_iou = 0.3;
  uint64_t seed = 0;

  void validate() const;
};

RunConfig load_run_config(const std::string& path);

/// Applies one `key=value` override (the --set flag); throws on unknown keys
/// or unparseable values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace mft
