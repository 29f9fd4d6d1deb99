#pragma once

#include <cstdint>
#include <vector>

#include "core/assignment.hpp"
#include "core/geometry.hpp"
#include "core/types.hpp"

namespace ott {

struct ScenarioConfig {
  std::size_t num_objects = 8;
  int num_frames = 50;
  std::size_t dim = 16;
  double separation = 0.5;  // min pairwise cosine distance between latents
  double noise_sigma = 0.0;
  int image_width = 320;
  int image_height = 240;
  double min_box = 18.0;
  double max_box = 42.0;
  double max_speed = 3.0;
  int occlusion_gap = 0;          // per-object invisibility window length
  bool staggered_entry = false;   // objects enter and exit at staggered frames
  /// Lane-constrained trajectories that can never overlap; turn off to allow
  /// free 2D motion with crossings.
  bool enforce_disjoint = true;
};

struct ScenarioObject {
  Embedding latent;
  std::vector<BoundingBox> boxes;     // per frame
  std::vector<char> visible;          // per frame
  std::vector<Embedding> observed;    // per frame, normalize(latent + noise)
};

/// A fully deterministic test-bed sequence with known identities.
struct Scenario {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<ScenarioObject> objects;

  /// Visible objects of one frame in object order; embedding_row indexes the
  /// matching entry of embeddings(frame).
  std::vector<Detection> detections(int frame) const;
  std::vector<Embedding> embeddings(int frame) const;

  /// Whole-sequence detection stream plus aligned embedding rows, as a file
  /// writer or the tracker consumes them.
  std::pair<std::vector<Detection>, std::vector<Embedding>> stream() const;

  /// Ground-truth track records (gt id = object index + 1).
  TrackOutput ground_truth() const;
};

Scenario generate(const ScenarioConfig& config, std::uint64_t seed);

/// Dense flow that moves each object's pixels by its true displacement from
/// frame a to frame b; background zero; overlaps resolved by the later-listed
/// (nearer) object.
MotionField exact_motion(const Scenario& s, int frame_a, int frame_b);

/// Exhaustive minimum over all injections of the smaller index set into the
/// larger; the independent oracle for the Hungarian solver.
HardAssignment brute_force_assign(const CostMatrix& c);

}  // namespace ott
