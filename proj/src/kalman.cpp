#include "mftrack/kalman.hpp"

#include <stdexcept>

namespace mft {

namespace {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Vec4 = Eigen::Matrix<double, 4, 1>;

Mat8 transition_matrix() {
  Mat8 f = Mat8::Identity();
  for (int i = 0; i < 4; ++i) {
    f(i, i + 4) = 1.0;
  }
  return f;
}

}  // namespace

KalmanState kalman_init(const BoundingBox& box, const KalmanConfig& cfg) {
  KalmanState s;
  const Point c = box.center();
  s.mean << c.x, c.y, box.width(), box.height(), 0.0, 0.0, 0.0, 0.0;

  const double h = box.height();
  const double pos_std = cfg.init_position_factor * cfg.position_std_weight * h;
  const double vel_std = cfg.init_velocity_factor * cfg.velocity_std_weight * h;
  Vec8 diag;
  diag << pos_std, pos_std, pos_std, pos_std, vel_std, vel_std, vel_std, vel_std;
  s.covariance = diag.array().square().matrix().asDiagonal();
  return s;
}

KalmanState kalman_predict(const KalmanState& state, const KalmanConfig& cfg) {
  const Mat8 f = transition_matrix();
  const double h = state.mean(3);
  const double vel_std = cfg.velocity_std_weight * h;

  Mat8 q = Mat8::Zero();
  for (int i = 4; i < 8; ++i) {
    q(i, i) = vel_std * vel_std;
  }

  KalmanState out;
  out.mean = f * state.mean;
  out.covariance = f * state.covariance * f.transpose() + q;
  out.covariance = ((out.covariance + out.covariance.transpose()) / 2.0).eval();
  if (out.mean(2) < cfg.min_size) out.mean(2) = cfg.min_size;
  if (out.mean(3) < cfg.min_size) out.mean(3) = cfg.min_size;
  return out;
}

KalmanState kalman_update(const KalmanState& state, const BoundingBox& observed,
                          const KalmanConfig& cfg) {
  const Point c = observed.center();
  Vec4 z;
  z << c.x, c.y, observed.width(), observed.height();

  // Measurement picks the first four components.
  Eigen::Matrix<double, 4, 8> hm = Eigen::Matrix<double, 4, 8>::Zero();
  hm.block<4, 4>(0, 0) = Mat4::Identity();

  const double h = state.mean(3);
  const double meas_std = cfg.position_std_weight * h;
  const Mat4 r = Mat4::Identity() * (meas_std * meas_std);

  const Vec4 innovation = z - hm * state.mean;
  const Mat4 s = hm * state.covariance * hm.transpose() + r;
  const Eigen::Matrix<double, 8, 4> gain =
      state.covariance * hm.transpose() * s.inverse();

  KalmanState out;
  out.mean = state.mean + gain * innovation;

  // Joseph form keeps the covariance positive-definite over long runs.
  const Mat8 ikh = Mat8::Identity() - gain * hm;
  out.covariance = ikh * state.covariance * ikh.transpose() + gain * r * gain.transpose();
  out.covariance = ((out.covariance + out.covariance.transpose()) / 2.0).eval();

  if (out.mean(2) < cfg.min_size) out.mean(2) = cfg.min_size;
  if (out.mean(3) < cfg.min_size) out.mean(3) = cfg.min_size;
  return out;
}

BoundingBox kalman_to_box(const KalmanState& state) {
  const double w = state.mean(2);
  const double h = state.mean(3);
  if (w <= 0.0 || h <= 0.0) {
    throw std::runtime_error("kalman_to_box: collapsed state (non-positive size)");
  }
  return BoundingBox::from_center_size(state.mean(0), state.mean(1), w, h);
}

}  // namespace mft
