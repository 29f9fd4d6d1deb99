#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/config.hpp"
#include "core/types.hpp"

namespace ott {

/// Persistent state of one tracked object.
struct Track {
  int64_t id = 0;
  BoundingBox last_box;
  Embedding last_embedding;
  int64_t last_seen_frame = 0;
  int64_t age = 0;  // frames since last match
};

/// Online tracker: associates per-frame detections to live tracks with the
/// combined appearance/IoU cost and the configured matcher, then manages
/// track ids. Single-owner mutable state; do not step one instance
/// concurrently.
class Tracker {
 public:
  explicit Tracker(const Config& config) : config_(config) {}

  /// Associates one frame's detections (one embedding per detection, same
  /// order) and returns a record per detection. Frames must be strictly
  /// increasing across calls.
  std::vector<TrackRecord> step(int64_t frame, const std::vector<Detection>& detections,
                                const std::vector<Embedding>& embeddings);

  const std::vector<Track>& live_tracks() const { return live_; }
  int64_t next_id() const { return next_id_; }

 private:
  Config config_;
  std::vector<Track> live_;
  int64_t next_id_ = 1;
  std::optional<int64_t> last_frame_;
};

/// Folds Tracker::step over a detection stream grouped by frame. Detections
/// reference their embedding via Detection::embedding_row (defaulting to the
/// record's position).
TrackOutput run_sequence(const std::vector<Detection>& detections,
                         const std::vector<Embedding>& embeddings,
                         const Config& config);

}  // namespace ott
