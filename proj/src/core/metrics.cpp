#include "core/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "core/assignment.hpp"
#include "core/geometry.hpp"

namespace ott {

namespace {

// Larger than any achievable 1-IoU total, so infeasible pairs are only
// selected when a side cannot be left unmatched; they are filtered afterward.
constexpr double kInfeasible = 1e9;

using FrameIndex = std::map<int64_t, std::vector<std::pair<int64_t, BoundingBox>>>;

FrameIndex group_by_frame(const TrackOutput& records) {
  FrameIndex index;
  for (const TrackRecord& r : records) index[r.frame].emplace_back(r.track_id, r.box);
  return index;
}

std::size_t pairs_of(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace

FrameMatches match_frames(const TrackOutput& pred, const TrackOutput& gt,
                          double iou_thresh) {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "match_frames: iou_thresh must lie in (0,1]");
  }
  const FrameIndex pred_by_frame = group_by_frame(pred);
  const FrameIndex gt_by_frame = group_by_frame(gt);

  FrameMatches out;
  out.pred_total = pred.size();
  out.gt_total = gt.size();

  std::set<int64_t> frames;
  for (const auto& [f, _] : pred_by_frame) frames.insert(f);
  for (const auto& [f, _] : gt_by_frame) frames.insert(f);

  for (const int64_t frame : frames) {
    const auto pit = pred_by_frame.find(frame);
    const auto git = gt_by_frame.find(frame);
    const std::size_t np = pit == pred_by_frame.end() ? 0 : pit->second.size();
    const std::size_t ng = git == gt_by_frame.end() ? 0 : git->second.size();
    if (np == 0 || ng == 0) {
      out.false_positives += np;
      out.false_negatives += ng;
      continue;
    }
    const auto& preds = pit->second;
    const auto& gts = git->second;
    Matrix cost(np, ng);
    Matrix overlap(np, ng);
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t j = 0; j < ng; ++j) {
        const double v = iou(preds[i].second, gts[j].second);
        overlap(i, j) = v;
        cost(i, j) = v >= iou_thresh ? 1.0 - v : kInfeasible;
      }
    }
    const HardAssignment assignment = solve_assignment(cost);
    std::size_t tp_here = 0;
    for (const auto& [i, j] : assignment.matches) {
      if (overlap(i, j) >= iou_thresh) {
        out.tps.push_back({frame, preds[i].first, gts[j].first});
        ++tp_here;
      }
    }
    out.false_positives += np - tp_here;
    out.false_negatives += ng - tp_here;
  }
  return out;
}

double idf1(const TrackOutput& pred, const TrackOutput& gt, double iou_thresh) {
  const FrameMatches fm = match_frames(pred, gt, iou_thresh);
  if (fm.pred_total == 0 && fm.gt_total == 0) return 1.0;

  std::map<int64_t, std::size_t> pred_idx, gt_idx;
  for (const auto& tp : fm.tps) {
    pred_idx.emplace(tp.pred_id, pred_idx.size());
    gt_idx.emplace(tp.gt_id, gt_idx.size());
  }
  std::size_t idtp = 0;
  if (!fm.tps.empty()) {
    Matrix counts(pred_idx.size(), gt_idx.size());
    for (const auto& tp : fm.tps) {
      counts(pred_idx[tp.pred_id], gt_idx[tp.gt_id]) += 1.0;
    }
    Matrix negated(counts.rows(), counts.cols());
    for (std::size_t i = 0; i < counts.rows(); ++i) {
      for (std::size_t j = 0; j < counts.cols(); ++j) negated(i, j) = -counts(i, j);
    }
    const HardAssignment assignment = solve_assignment(negated);
    for (const auto& [i, j] : assignment.matches) idtp += std::size_t(counts(i, j));
  }
  const std::size_t idfp = fm.pred_total - idtp;
  const std::size_t idfn = fm.gt_total - idtp;
  const double denom = double(2 * idtp + idfp + idfn);
  return denom == 0.0 ? 1.0 : 2.0 * double(idtp) / denom;
}

std::size_t id_switches(const TrackOutput& pred, const TrackOutput& gt,
                        double iou_thresh) {
  const FrameMatches fm = match_frames(pred, gt, iou_thresh);
  std::map<int64_t, int64_t> last_pred_of_gt;
  std::size_t switches = 0;
  for (const auto& tp : fm.tps) {  // tps are ordered by frame
    const auto it = last_pred_of_gt.find(tp.gt_id);
    if (it != last_pred_of_gt.end() && it->second != tp.pred_id) ++switches;
    last_pred_of_gt[tp.gt_id] = tp.pred_id;
  }
  return switches;
}

std::pair<double, double> assoc_pr(const TrackOutput& pred, const TrackOutput& gt,
                                   double iou_thresh) {
  const FrameMatches fm = match_frames(pred, gt, iou_thresh);
  std::map<int64_t, std::size_t> per_gt, per_pred;
  std::map<std::pair<int64_t, int64_t>, std::size_t> per_pair;
  for (const auto& tp : fm.tps) {
    ++per_gt[tp.gt_id];
    ++per_pred[tp.pred_id];
    ++per_pair[{tp.pred_id, tp.gt_id}];
  }
  std::size_t both = 0, gt_pairs = 0, pred_pairs = 0;
  for (const auto& [_, n] : per_pair) both += pairs_of(n);
  for (const auto& [_, n] : per_gt) gt_pairs += pairs_of(n);
  for (const auto& [_, n] : per_pred) pred_pairs += pairs_of(n);
  const double precision = pred_pairs == 0 ? 1.0 : double(both) / double(pred_pairs);
  const double recall = gt_pairs == 0 ? 1.0 : double(both) / double(gt_pairs);
  return {precision, recall};
}

MetricReport evaluate(const TrackOutput& pred, const TrackOutput& gt,
                      double iou_thresh) {
  const FrameMatches fm = match_frames(pred, gt, iou_thresh);
  MetricReport report;
  report.idf1 = idf1(pred, gt, iou_thresh);
  report.id_switches = id_switches(pred, gt, iou_thresh);
  const auto [precision, recall] = assoc_pr(pred, gt, iou_thresh);
  report.assoc_precision = precision;
  report.assoc_recall = recall;
  report.tp = fm.tps.size();
  report.fp = fm.false_positives;
  report.fn = fm.false_negatives;
  return report;
}

}  // namespace ott
