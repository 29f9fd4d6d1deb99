#include "core/tracker.hpp"

#include <algorithm>

#include "core/assignment.hpp"
#include "core/cost.hpp"
#include "core/geometry.hpp"

namespace ott {

std::vector<TrackRecord> Tracker::step(int64_t frame,
                                       const std::vector<Detection>& detections,
                                       const std::vector<Embedding>& embeddings) {
  if (last_frame_ && frame <= *last_frame_) {
    fail(ErrorCode::NonMonotonicFrame, "tracker step: frames must strictly increase");
  }
  last_frame_ = frame;
  if (detections.size() != embeddings.size()) {
    fail(ErrorCode::EmbeddingCountMismatch,
         "tracker step: one embedding per detection required");
  }

  const std::size_t n_tracks = live_.size();
  const std::size_t n_dets = detections.size();

  std::vector<int64_t> det_track(n_dets, -1);  // assigned track index per detection
  std::vector<char> track_matched(n_tracks, 0);

  if (n_tracks > 0 && n_dets > 0) {
    std::vector<Embedding> track_embs;
    track_embs.reserve(n_tracks);
    for (const Track& t : live_) track_embs.push_back(t.last_embedding);
    std::vector<Embedding> det_embs(embeddings.begin(), embeddings.end());
    const CostMatrix sim = cosine_cost(track_embs, det_embs);

    // Tracks seen last frame blend appearance with the IoU location prior.
    // A box older than one frame carries no usable location information, so
    // aged rows match on appearance alone rather than paying a stale-overlap
    // penalty against the dustbin.
    CostMatrix combined;
    combined.entries = Matrix(n_tracks, n_dets);
    for (std::size_t ti = 0; ti < n_tracks; ++ti) {
      const bool fresh_box = frame - live_[ti].last_seen_frame <= 1;
      for (std::size_t di = 0; di < n_dets; ++di) {
        if (fresh_box) {
          const double overlap_cost = 1.0 - iou(live_[ti].last_box, detections[di].box);
          combined.entries(ti, di) =
              config_.sigma * sim.at(ti, di) + (1.0 - config_.sigma) * overlap_cost;
        } else {
          combined.entries(ti, di) = sim.at(ti, di);
        }
      }
    }
    HardAssignment hard;
    if (config_.matcher == MatcherMode::Sinkhorn) {
      const CostMatrix augmented = augment_dustbin(combined, config_.gamma);
      const TransportPlan plan =
          sinkhorn(augmented, default_marginals(n_tracks, n_dets), config_.epsilon,
                   config_.sinkhorn_iters, config_.sinkhorn_tol);
      hard = decode(plan);
    } else {
      hard = hungarian(combined);
      // The dustbin cost gamma is the break-even point of the transport
      // objective; matches costlier than that open fresh tracks instead.
      std::erase_if(hard.matches, [&](const auto& match) {
        return combined.at(match.first, match.second) >= config_.gamma;
      });
    }
    for (const auto& [ti, di] : hard.matches) {
      det_track[di] = int64_t(ti);
      track_matched[ti] = 1;
    }
  }

  std::vector<TrackRecord> records;
  records.reserve(n_dets);
  for (std::size_t di = 0; di < n_dets; ++di) {
    if (det_track[di] >= 0) {
      Track& t = live_[std::size_t(det_track[di])];
      t.last_box = detections[di].box;
      t.last_embedding = embeddings[di];
      t.last_seen_frame = frame;
      t.age = 0;
      records.push_back({frame, t.id, detections[di].box});
    } else {
      Track fresh;
      fresh.id = next_id_++;
      fresh.last_box = detections[di].box;
      fresh.last_embedding = embeddings[di];
      fresh.last_seen_frame = frame;
      fresh.age = 0;
      live_.push_back(std::move(fresh));
      records.push_back({frame, live_.back().id, detections[di].box});
    }
  }

  for (std::size_t ti = 0; ti < n_tracks; ++ti) {
    if (!track_matched[ti]) live_[ti].age = frame - live_[ti].last_seen_frame;
  }
  std::erase_if(live_, [&](const Track& t) { return t.age > config_.max_age; });

  return records;
}

TrackOutput run_sequence(const std::vector<Detection>& detections,
                         const std::vector<Embedding>& embeddings,
                         const Config& config) {
  Tracker tracker(config);
  TrackOutput output;
  std::size_t i = 0;
  while (i < detections.size()) {
    const int64_t frame = detections[i].frame;
    std::vector<Detection> frame_dets;
    std::vector<Embedding> frame_embs;
    while (i < detections.size() && detections[i].frame == frame) {
      const Detection& d = detections[i];
      const std::size_t row = d.embedding_row.value_or(i);
      if (row >= embeddings.size()) {
        fail(ErrorCode::EmbeddingCountMismatch,
             "run_sequence: detection references a missing embedding row");
      }
      frame_dets.push_back(d);
      frame_embs.push_back(embeddings[row]);
      ++i;
    }
    const auto records = tracker.step(frame, frame_dets, frame_embs);
    output.insert(output.end(), records.begin(), records.end());
  }
  return output;
}

}  // namespace ott
