#pragma once

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace ott {

/// Dense per-pixel grid of motion values: 2 channels for optical flow
/// (dx then dy) or 1 channel for disparity, row-major, channel-interleaved.
struct MotionField {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> values;

  static MotionField flow(int width, int height) {
    return {width, height, 2, std::vector<float>(std::size_t(width) * height * 2, 0.0f)};
  }
  static MotionField disparity(int width, int height) {
    return {width, height, 1, std::vector<float>(std::size_t(width) * height, 0.0f)};
  }

  float& at(int x, int y, int c) {
    return values[(std::size_t(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c) const {
    return values[(std::size_t(y) * width + x) * channels + c];
  }

  /// Bilinear-interpolation domain: samples live on integer pixel centers,
  /// so (x, y) must fall in [0, width-1] x [0, height-1].
  bool contains(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x <= width - 1.0 && y <= height - 1.0;
  }
};

double iou(const BoundingBox& a, const BoundingBox& b);

/// Bilinear sample of channel c at continuous (x, y). Caller must ensure the
/// point is inside the field (see MotionField::contains).
double bilinear_sample(const MotionField& field, double x, double y, int channel);

/// Translates the box by the motion vector sampled at its center. A 1-channel
/// field is read as disparity d and applied as a horizontal shift of -d.
/// Throws CenterOutOfField when the center lies outside the grid.
BoundingBox warp_box(const BoundingBox& box, const MotionField& motion);

/// Greedy non-maximum suppression in descending confidence order, ties broken
/// by input index. A box is suppressed when its IoU with an already kept box
/// exceeds the threshold.
std::vector<Detection> nms(const std::vector<Detection>& detections, double iou_threshold);

/// output(x, y) = bilinear sample of src at (x - disp(x,y), y). Samples that
/// fall outside src are marked invalid with a quiet NaN.
MotionField warp_grid(const MotionField& src, const MotionField& disp);

}  // namespace ott
