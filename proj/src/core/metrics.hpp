#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace ott {

/// Result of per-frame box matching between a prediction and ground truth.
struct FrameMatches {
  struct TruePositive {
    int64_t frame;
    int64_t pred_id;
    int64_t gt_id;
  };
  std::vector<TruePositive> tps;  // ordered by frame, then by match order
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t pred_total = 0;
  std::size_t gt_total = 0;
};

/// Per-frame Hungarian matching on 1-IoU, restricted to pairs with
/// IoU >= iou_thresh.
FrameMatches match_frames(const TrackOutput& pred, const TrackOutput& gt,
                          double iou_thresh);

/// Identity F1 under the globally optimal pred-id to gt-id bipartite mapping.
double idf1(const TrackOutput& pred, const TrackOutput& gt, double iou_thresh);

/// Count of matched ground-truth objects whose predicted id changed relative
/// to that object's previously matched id.
std::size_t id_switches(const TrackOutput& pred, const TrackOutput& gt,
                        double iou_thresh);

/// Pairwise association precision/recall over same-identity TP pairs.
std::pair<double, double> assoc_pr(const TrackOutput& pred, const TrackOutput& gt,
                                   double iou_thresh);

struct MetricReport {
  double idf1 = 0.0;
  std::size_t id_switches = 0;
  double assoc_precision = 0.0;
  double assoc_recall = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

MetricReport evaluate(const TrackOutput& pred, const TrackOutput& gt, double iou_thresh);

}  // namespace ott
