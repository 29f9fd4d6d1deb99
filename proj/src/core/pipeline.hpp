#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "core/config.hpp"
#include "core/metrics.hpp"
#include "core/pseudo_label.hpp"
#include "core/synthetic.hpp"

namespace ott {

struct TrackRunSummary {
  std::size_t detections = 0;
  std::size_t frames = 0;
  std::size_t tracks_created = 0;
};

/// Detections + embeddings -> track file.
TrackRunSummary run_track_pipeline(const std::string& dets_path,
                                   const std::string& embs_path,
                                   const Config& config,
                                   const std::string& out_path);

struct PseudoRunSummary {
  std::size_t pairs = 0;
  std::size_t discarded_low_iou = 0;
  std::size_t dropped_occluded = 0;
  std::size_t dropped_out_of_field = 0;
  std::size_t ref_used = 0;
  std::size_t tgt_used = 0;
};

/// Reference/target detections + motion grid -> label file (+ sidecar
/// report). Detections are filtered per config first; optional occlusion
/// masks drop heavily occluded detections on each side. Emitted indices refer
/// to the original detection records.
PseudoRunSummary run_pseudolabel_pipeline(
    const std::string& ref_path, const std::string& tgt_path,
    const std::string& grid_path, const Config& config,
    const std::string& out_labels,
    const std::optional<std::string>& out_report,
    const std::optional<std::string>& occl_ref_path,
    const std::optional<std::string>& occl_tgt_path);

/// Left/right disparity grids -> occlusion masks for both views as 0/1 grids.
void run_occlusion_pipeline(const std::string& left_path, const std::string& right_path,
                            const Config& config, const std::string& out_left,
                            const std::string& out_right);

/// Predicted + ground-truth track files -> metric report.
MetricReport run_eval_pipeline(const std::string& pred_path, const std::string& gt_path,
                               const Config& config,
                               const std::optional<std::string>& out_report);

struct SynthSpec {
  ScenarioConfig scenario;
  int pair_a = 0;
  int pair_b = 1;
  bool stereo = false;
};

/// Emits a scenario in the engine's file formats under out_dir:
/// dets.txt, embs.bin, gt.txt, ref_dets.txt, tgt_dets.txt, motion.grid and,
/// with stereo set, disp_left.grid / disp_right.grid.
void run_synth_pipeline(const std::string& out_dir, std::uint64_t seed,
                        const SynthSpec& spec);

}  // namespace ott
