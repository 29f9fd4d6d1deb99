#include "core/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ott {

double iou(const BoundingBox& a, const BoundingBox& b) {
  require_valid(a, "iou");
  require_valid(b, "iou");
  const double ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

double bilinear_sample(const MotionField& field, double x, double y, int channel) {
  // Interpolation cell; at the right/bottom edge step back one so the
  // (x0, x0+1) pair stays in range. A 1-wide axis collapses to weight 0.
  int x0 = int(std::floor(x));
  int y0 = int(std::floor(y));
  x0 = std::clamp(x0, 0, std::max(field.width - 2, 0));
  y0 = std::clamp(y0, 0, std::max(field.height - 2, 0));
  const int x1 = std::min(x0 + 1, field.width - 1);
  const int y1 = std::min(y0 + 1, field.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;

  const double v00 = field.at(x0, y0, channel);
  const double v10 = field.at(x1, y0, channel);
  const double v01 = field.at(x0, y1, channel);
  const double v11 = field.at(x1, y1, channel);
  return (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 +
         (1.0 - fx) * fy * v01 + fx * fy * v11;
}

BoundingBox warp_box(const BoundingBox& box, const MotionField& motion) {
  require_valid(box, "warp_box");
  if (motion.channels != 1 && motion.channels != 2) {
    fail(ErrorCode::InvalidArgument, "warp_box: motion field must have 1 or 2 channels");
  }
  const double cx = box.center_x();
  const double cy = box.center_y();
  if (!motion.contains(cx, cy)) {
    fail(ErrorCode::CenterOutOfField, "warp_box: box center outside the motion grid");
  }
  double dx, dy;
  if (motion.channels == 2) {
    dx = bilinear_sample(motion, cx, cy, 0);
    dy = bilinear_sample(motion, cx, cy, 1);
  } else {
    dx = -bilinear_sample(motion, cx, cy, 0);
    dy = 0.0;
  }
  return box.translated(dx, dy);
}

std::vector<Detection> nms(const std::vector<Detection>& detections, double iou_threshold) {
  if (iou_threshold < 0.0 || iou_threshold > 1.0) {
    fail(ErrorCode::InvalidArgument, "nms: iou_threshold must lie in [0,1]");
  }
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (detections[i].confidence != detections[j].confidence) {
      return detections[i].confidence > detections[j].confidence;
    }
    return i < j;
  });

  std::vector<Detection> kept;
  kept.reserve(detections.size());
  for (const std::size_t idx : order) {
    const Detection& cand = detections[idx];
    bool suppressed = false;
    for (const Detection& survivor : kept) {
      if (iou(cand.box, survivor.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

MotionField warp_grid(const MotionField& src, const MotionField& disp) {
  if (src.channels != 1 || disp.channels != 1) {
    fail(ErrorCode::DimensionMismatch, "warp_grid: both grids must be 1-channel");
  }
  if (src.width != disp.width || src.height != disp.height) {
    fail(ErrorCode::DimensionMismatch, "warp_grid: grid dimensions differ");
  }
  MotionField out = MotionField::disparity(src.width, src.height);
  const float invalid = std::numeric_limits<float>::quiet_NaN();
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      const double sx = x - double(disp.at(x, y, 0));
      if (!src.contains(sx, y)) {
        out.at(x, y, 0) = invalid;
      } else {
        out.at(x, y, 0) = float(bilinear_sample(src, sx, y, 0));
      }
    }
  }
  return out;
}

}  // namespace ott
