#include "core/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "core/formats.hpp"
#include "core/tracker.hpp"

namespace ott {

TrackRunSummary run_track_pipeline(const std::string& dets_path,
                                   const std::string& embs_path,
                                   const Config& config,
                                   const std::string& out_path) {
  const std::vector<Detection> dets = read_detections(dets_path);
  const std::vector<Embedding> embs = read_embeddings(embs_path);
  if (dets.size() != embs.size()) {
    fail(ErrorCode::CountMismatch,
         embs_path + ": " + std::to_string(embs.size()) + " embedding rows for " +
             std::to_string(dets.size()) + " detections");
  }
  const TrackOutput tracks = run_sequence(dets, embs, config);
  write_tracks(out_path, tracks);

  TrackRunSummary summary;
  summary.detections = dets.size();
  std::set<int64_t> frames, ids;
  for (const TrackRecord& r : tracks) {
    frames.insert(r.frame);
    ids.insert(r.track_id);
  }
  summary.frames = frames.size();
  summary.tracks_created = ids.size();
  return summary;
}

PseudoRunSummary run_pseudolabel_pipeline(
    const std::string& ref_path, const std::string& tgt_path,
    const std::string& grid_path, const Config& config,
    const std::string& out_labels,
    const std::optional<std::string>& out_report,
    const std::optional<std::string>& occl_ref_path,
    const std::optional<std::string>& occl_tgt_path) {
  // read_detections tags each record with its original index via
  // embedding_row, which filtering preserves.
  std::vector<Detection> ref = read_detections(ref_path);
  std::vector<Detection> tgt = read_detections(tgt_path);
  const MotionField motion = read_grid(grid_path);

  ref = filter_detections(ref, config.min_conf, config.min_area, config.nms_iou);
  tgt = filter_detections(tgt, config.min_conf, config.min_area, config.nms_iou);

  std::size_t dropped_occluded = 0;
  if (occl_ref_path) {
    const OcclusionMask mask = grid_to_mask(read_grid(*occl_ref_path));
    const std::size_t before = ref.size();
    ref = drop_occluded(ref, mask, config.occlusion_max_ratio);
    dropped_occluded += before - ref.size();
  }
  if (occl_tgt_path) {
    const OcclusionMask mask = grid_to_mask(read_grid(*occl_tgt_path));
    const std::size_t before = tgt.size();
    tgt = drop_occluded(tgt, mask, config.occlusion_max_ratio);
    dropped_occluded += before - tgt.size();
  }

  PseudoLabelSet labels = generate_pseudo_labels(ref, tgt, motion, config.min_match_iou);
  labels.dropped_occluded = dropped_occluded;

  std::vector<std::pair<std::size_t, std::size_t>> original_pairs;
  original_pairs.reserve(labels.pairs.size());
  for (const auto& [ri, ti] : labels.pairs) {
    original_pairs.emplace_back(ref[ri].embedding_row.value_or(ri),
                                tgt[ti].embedding_row.value_or(ti));
  }
  std::sort(original_pairs.begin(), original_pairs.end());
  write_labels(out_labels, original_pairs);

  PseudoRunSummary summary;
  summary.pairs = original_pairs.size();
  summary.discarded_low_iou = labels.discarded_low_iou;
  summary.dropped_occluded = labels.dropped_occluded;
  summary.dropped_out_of_field = labels.dropped_out_of_field;
  summary.ref_used = ref.size();
  summary.tgt_used = tgt.size();

  if (out_report) {
    write_report(*out_report,
                 {{"pairs", std::to_string(summary.pairs)},
                  {"discarded_low_iou", std::to_string(summary.discarded_low_iou)},
                  {"dropped_occluded", std::to_string(summary.dropped_occluded)},
                  {"dropped_out_of_field", std::to_string(summary.dropped_out_of_field)},
                  {"ref_used", std::to_string(summary.ref_used)},
                  {"tgt_used", std::to_string(summary.tgt_used)}});
  }
  return summary;
}

void run_occlusion_pipeline(const std::string& left_path, const std::string& right_path,
                            const Config& config, const std::string& out_left,
                            const std::string& out_right) {
  const MotionField d_left = read_grid(left_path);
  const MotionField d_right = read_grid(right_path);
  const OcclusionMask om_right = occlusion_mask(d_left, d_right, config.tau_occ);
  const OcclusionMask om_left = occlusion_mask(d_right, d_left, config.tau_occ);
  write_grid(out_left, mask_to_grid(om_left));
  write_grid(out_right, mask_to_grid(om_right));
}

MetricReport run_eval_pipeline(const std::string& pred_path, const std::string& gt_path,
                               const Config& config,
                               const std::optional<std::string>& out_report) {
  const TrackOutput pred = read_tracks(pred_path);
  const TrackOutput gt = read_tracks(gt_path);
  const MetricReport report = evaluate(pred, gt, config.iou_thresh_eval);
  if (out_report) {
    write_report(*out_report,
                 {{"idf1", format_number(report.idf1)},
                  {"id_switches", std::to_string(report.id_switches)},
                  {"assoc_precision", format_number(report.assoc_precision)},
                  {"assoc_recall", format_number(report.assoc_recall)},
                  {"tp", std::to_string(report.tp)},
                  {"fp", std::to_string(report.fp)},
                  {"fn", std::to_string(report.fn)}});
  }
  return report;
}

namespace {

void paint_disparity(MotionField& grid, const BoundingBox& box, float value) {
  const int x_begin = std::max(int(std::ceil(box.x1)), 0);
  const int x_end = std::min(int(std::floor(box.x2)), grid.width - 1);
  const int y_begin = std::max(int(std::ceil(box.y1)), 0);
  const int y_end = std::min(int(std::floor(box.y2)), grid.height - 1);
  for (int y = y_begin; y <= y_end; ++y) {
    for (int x = x_begin; x <= x_end; ++x) grid.at(x, y, 0) = value;
  }
}

}  // namespace

void run_synth_pipeline(const std::string& out_dir, std::uint64_t seed,
                        const SynthSpec& spec) {
  if (spec.pair_a < 0 || spec.pair_b < 0 || spec.pair_a >= spec.scenario.num_frames ||
      spec.pair_b >= spec.scenario.num_frames) {
    fail(ErrorCode::InvalidArgument, "synth: frame pair out of range");
  }
  std::filesystem::create_directories(out_dir);
  const Scenario s = generate(spec.scenario, seed);
  const auto dir = std::filesystem::path(out_dir);

  const auto [dets, embs] = s.stream();
  write_detections((dir / "dets.txt").string(), dets);
  write_embeddings((dir / "embs.bin").string(), embs);
  write_tracks((dir / "gt.txt").string(), s.ground_truth());

  write_detections((dir / "ref_dets.txt").string(), s.detections(spec.pair_a));
  write_detections((dir / "tgt_dets.txt").string(), s.detections(spec.pair_b));
  write_grid((dir / "motion.grid").string(), exact_motion(s, spec.pair_a, spec.pair_b));

  if (spec.stereo) {
    // A toy but self-consistent stereo pair: constant background disparity
    // plus one disparity plane per object, right-view boxes shifted left.
    MotionField left = MotionField::disparity(s.config.image_width, s.config.image_height);
    MotionField right = MotionField::disparity(s.config.image_width, s.config.image_height);
    std::fill(left.values.begin(), left.values.end(), 1.0f);
    std::fill(right.values.begin(), right.values.end(), 1.0f);
    for (std::size_t k = 0; k < s.objects.size(); ++k) {
      if (!s.objects[k].visible[spec.pair_a]) continue;
      const float disparity = 2.0f + 2.0f * float(k);
      const BoundingBox& box = s.objects[k].boxes[spec.pair_a];
      paint_disparity(left, box, disparity);
      paint_disparity(right, box.translated(-disparity, 0.0), disparity);
    }
    write_grid((dir / "disp_left.grid").string(), left);
    write_grid((dir / "disp_right.grid").string(), right);
  }
}

}  // namespace ott
