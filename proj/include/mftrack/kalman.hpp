#pragma once

#include <Eigen/Dense>

#include "mftrack/geometry.hpp"

namespace mft {

/// Constant-velocity box filter state.
/// Mean layout: (cx, cy, w, h, vcx, vcy, vw, vh), pixels and pixels/frame.
struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Identity();
};

/// Noise scales are relative to the current box height so the filter
/// transfers across object sizes.
struct KalmanConfig {
  double position_std_weight = 1.0 / 20.0;   // measurement std per coordinate, fraction of height
  double velocity_std_weight = 1.0 / 160.0;  // process std for velocities, fraction of height
  double init_position_factor = 2.0;         // initial position/size std multiplier
  double init_velocity_factor = 10.0;        // initial velocity std multiplier
  double min_size = 1.0;                     // floor for w/h means after update
};

/// New state from a first observation: zero velocities, diagonal covariance.
KalmanState kalman_init(const BoundingBox& box, const KalmanConfig& cfg = {});

/// Advance one frame under constant velocity; covariance F P F^T + Q.
KalmanState kalman_predict(const KalmanState& state, const KalmanConfig& cfg = {});

/// Standard gain correction with measurement (cx, cy, w, h) from the box.
KalmanState kalman_update(const KalmanState& state, const BoundingBox& observed,
                          const KalmanConfig& cfg = {});

/// Corner box reconstructed from the mean; throws on a collapsed state.
BoundingBox kalman_to_box(const KalmanState& state);

}  // namespace mft
