#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core/geometry.hpp"
#include "core/types.hpp"

namespace ott {

/// Association supervision for one frame pair, plus discard statistics.
struct PseudoLabelSet {
  /// (ref index, tgt index) pairs into the caller's detection lists; a
  /// partial bijection.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t discarded_low_iou = 0;
  std::size_t dropped_occluded = 0;
  std::size_t dropped_out_of_field = 0;
};

/// Binary per-pixel grid, 1 = occluded.
struct OcclusionMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(int x, int y) const { return bits[std::size_t(y) * width + x]; }
  void set(int x, int y, std::uint8_t v) { bits[std::size_t(y) * width + x] = v; }
};

/// Confidence and area thresholds followed by NMS.
std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         double min_conf, double min_area,
                                         double nms_iou);

/// Warp reference boxes along the motion field, match against targets on IoU
/// with the Hungarian solver, and discard matches below min_match_iou.
/// Reference boxes whose (pre- or post-warp) center leaves the grid are
/// dropped before matching rather than failing the call.
PseudoLabelSet generate_pseudo_labels(const std::vector<Detection>& ref,
                                      const std::vector<Detection>& tgt,
                                      const MotionField& motion,
                                      double min_match_iou);

/// Cross-view disparity consistency: warp d_near into the far view and mark
/// pixels whose absolute disparity difference reaches tau_occ. Samples that
/// left the grid during warping are marked occluded.
OcclusionMask occlusion_mask(const MotionField& d_near, const MotionField& d_far,
                             double tau_occ);

/// Removes detections whose box covers more than max_ratio occluded pixel
/// cells.
std::vector<Detection> drop_occluded(const std::vector<Detection>& dets,
                                     const OcclusionMask& mask, double max_ratio);

/// Fraction of integer pixel cells covered by the box that are occluded.
double occluded_fraction(const BoundingBox& box, const OcclusionMask& mask);

}  // namespace ott
