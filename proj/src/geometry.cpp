#include "mftrack/geometry.hpp"

#include <algorithm>

namespace mft {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix0 = std::max(a.x_min, b.x_min);
  const double iy0 = std::max(a.y_min, b.y_min);
  const double ix1 = std::min(a.x_max, b.x_max);
  const double iy1 = std::min(a.y_max, b.y_max);
  const double iw = ix1 - ix0;
  const double ih = iy1 - iy0;
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

Point center(const BoundingBox& b) { return b.center(); }

}  // namespace mft
