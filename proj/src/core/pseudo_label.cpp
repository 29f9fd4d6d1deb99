#include "core/pseudo_label.hpp"

#include <algorithm>
#include <cmath>

#include "core/assignment.hpp"
#include "core/cost.hpp"

namespace ott {

std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         double min_conf, double min_area,
                                         double nms_iou) {
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const Detection& d : dets) {
    if (d.confidence < min_conf) continue;
    if (d.box.area() < min_area) continue;
    kept.push_back(d);
  }
  return nms(kept, nms_iou);
}

PseudoLabelSet generate_pseudo_labels(const std::vector<Detection>& ref,
                                      const std::vector<Detection>& tgt,
                                      const MotionField& motion,
                                      double min_match_iou) {
  PseudoLabelSet labels;

  std::vector<BoundingBox> warped;
  std::vector<std::size_t> ref_index;
  warped.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    BoundingBox moved;
    try {
      moved = warp_box(ref[i].box, motion);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CenterOutOfField) {
        ++labels.dropped_out_of_field;
        continue;
      }
      throw;
    }
    if (!motion.contains(moved.center_x(), moved.center_y())) {
      ++labels.dropped_out_of_field;
      continue;
    }
    warped.push_back(moved);
    ref_index.push_back(i);
  }

  std::vector<BoundingBox> targets;
  targets.reserve(tgt.size());
  for (const Detection& d : tgt) targets.push_back(d.box);

  const CostMatrix costs = iou_cost(warped, targets);
  const HardAssignment assignment = hungarian(costs);
  for (const auto& [wi, j] : assignment.matches) {
    const double overlap = 1.0 - costs.at(wi, j);
    if (overlap < min_match_iou) {
      ++labels.discarded_low_iou;
      continue;
    }
    labels.pairs.emplace_back(ref_index[wi], j);
  }
  std::sort(labels.pairs.begin(), labels.pairs.end());
  return labels;
}

OcclusionMask occlusion_mask(const MotionField& d_near, const MotionField& d_far,
                             double tau_occ) {
  if (!(tau_occ > 0.0)) {
    fail(ErrorCode::InvalidArgument, "occlusion_mask: tau_occ must be positive");
  }
  if (d_near.width != d_far.width || d_near.height != d_far.height ||
      d_near.channels != 1 || d_far.channels != 1) {
    fail(ErrorCode::DimensionMismatch, "occlusion_mask: disparity grids must match");
  }
  const MotionField warped = warp_grid(d_near, d_far);
  OcclusionMask mask;
  mask.width = d_near.width;
  mask.height = d_near.height;
  mask.bits.assign(std::size_t(mask.width) * mask.height, 0);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const float w = warped.at(x, y, 0);
      const bool occluded =
          !std::isfinite(w) || std::abs(double(w) - double(d_far.at(x, y, 0))) >= tau_occ;
      mask.set(x, y, occluded ? 1 : 0);
    }
  }
  return mask;
}

double occluded_fraction(const BoundingBox& box, const OcclusionMask& mask) {
  require_valid(box, "occluded_fraction");
  // Every integer pixel cell [cx, cx+1) x [cy, cy+1) that intersects the box.
  const int x_begin = std::max(int(std::floor(box.x1)), 0);
  const int x_end = std::min(int(std::ceil(box.x2)), mask.width);
  const int y_begin = std::max(int(std::floor(box.y1)), 0);
  const int y_end = std::min(int(std::ceil(box.y2)), mask.height);
  std::size_t covered = 0, occluded = 0;
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = x_begin; x < x_end; ++x) {
      ++covered;
      if (mask.at(x, y)) ++occluded;
    }
  }
  if (covered == 0) return 0.0;
  return double(occluded) / double(covered);
}

std::vector<Detection> drop_occluded(const std::vector<Detection>& dets,
                                     const OcclusionMask& mask, double max_ratio) {
  if (!(max_ratio >= 0.0 && max_ratio <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "drop_occluded: max_ratio must lie in [0,1]");
  }
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const Detection& d : dets) {
    if (occluded_fraction(d.box, mask) > max_ratio) continue;
    kept.push_back(d);
  }
  return kept;
}

}  // namespace ott
