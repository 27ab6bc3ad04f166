#pragma once

#include <stdexcept>

namespace mft {

struct Point {
  double x{0.0};
  double y{0.0};
};

/// Axis-aligned box in continuous pixel coordinates, corner representation.
/// Degenerate boxes (zero or negative extent) are rejected at construction.
struct BoundingBox {
  double x_min;
  double y_min;
  double x_max;
  double y_max;

  BoundingBox(double x0, double y0, double x1, double y1)
      : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {
    if (!(x_min < x_max) || !(y_min < y_max)) {
      throw std::invalid_argument("BoundingBox: degenerate box (requires x_min < x_max and y_min < y_max)");
    }
  }

  static BoundingBox from_center_size(double cx, double cy, double w, double h) {
    return BoundingBox(cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0);
  }

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Point center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }

  BoundingBox translated(double dx, double dy) const {
    return BoundingBox(x_min + dx, y_min + dy, x_max + dx, y_max + dy);
  }

  bool operator==(const BoundingBox& other) const = default;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

Point center(const BoundingBox& b);

}  // namespace mft
