#include "core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "core/error.hpp"

namespace ott {

namespace {

Embedding random_unit_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Embedding v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double cosine_distance(const Embedding& a, const Embedding& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return 1.0 - dot / std::sqrt(na * nb);
}

std::vector<Embedding> separated_latents(std::mt19937_64& rng, const ScenarioConfig& c) {
  std::vector<Embedding> latents;
  int attempts = 0;
  const int max_attempts = 20000;
  while (latents.size() < c.num_objects) {
    if (++attempts > max_attempts) {
      fail(ErrorCode::SeparationInfeasible,
           "could not sample latent embeddings with the requested separation");
    }
    Embedding cand = random_unit_vector(rng, c.dim);
    bool ok = true;
    for (const Embedding& prev : latents) {
      if (cosine_distance(cand, prev) < c.separation) {
        ok = false;
        break;
      }
    }
    if (ok) latents.push_back(std::move(cand));
  }
  return latents;
}

}  // namespace

std::vector<Detection> Scenario::detections(int frame) const {
  std::vector<Detection> dets;
  std::size_t row = 0;
  for (std::size_t k = 0; k < objects.size(); ++k) {
    if (!objects[k].visible[frame]) continue;
    Detection d;
    d.box = objects[k].boxes[frame];
    d.confidence = 1.0;
    d.class_id = 0;
    d.frame = frame;
    d.embedding_row = row++;
    dets.push_back(d);
  }
  return dets;
}

std::vector<Embedding> Scenario::embeddings(int frame) const {
  std::vector<Embedding> embs;
  for (const ScenarioObject& obj : objects) {
    if (obj.visible[frame]) embs.push_back(obj.observed[frame]);
  }
  return embs;
}

std::pair<std::vector<Detection>, std::vector<Embedding>> Scenario::stream() const {
  std::vector<Detection> dets;
  std::vector<Embedding> embs;
  for (int f = 0; f < config.num_frames; ++f) {
    for (std::size_t k = 0; k < objects.size(); ++k) {
      if (!objects[k].visible[f]) continue;
      Detection d;
      d.box = objects[k].boxes[f];
      d.confidence = 1.0;
      d.class_id = 0;
      d.frame = f;
      d.embedding_row = embs.size();
      dets.push_back(d);
      embs.push_back(objects[k].observed[f]);
    }
  }
  return {std::move(dets), std::move(embs)};
}

TrackOutput Scenario::ground_truth() const {
  TrackOutput out;
  for (int f = 0; f < config.num_frames; ++f) {
    for (std::size_t k = 0; k < objects.size(); ++k) {
      if (objects[k].visible[f]) out.push_back({f, int64_t(k) + 1, objects[k].boxes[f]});
    }
  }
  return out;
}

Scenario generate(const ScenarioConfig& config, std::uint64_t seed) {
  if (config.num_frames < 1 || config.image_width < 8 || config.image_height < 8) {
    fail(ErrorCode::InvalidArgument, "generate: degenerate scenario config");
  }
  std::mt19937_64 rng(seed);
  Scenario s;
  s.config = config;
  s.seed = seed;

  const auto latents = separated_latents(rng, config);
  const int frames = config.num_frames;
  const double span = double(frames - 1);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (std::size_t k = 0; k < config.num_objects; ++k) {
    ScenarioObject obj;
    obj.latent = latents[k];

    double y_lo = 1.0, y_hi = double(config.image_height - 2);
    double max_h = config.max_box;
    if (config.enforce_disjoint) {
      // One horizontal lane per object; lanes cannot intersect.
      const double lane = double(config.image_height) / double(config.num_objects);
      y_lo = lane * double(k) + 1.0;
      y_hi = lane * double(k + 1) - 1.0;
      max_h = std::min(max_h, (y_hi - y_lo) * 0.9);
    }
    const double h_cap = std::min(config.max_box, max_h);
    if (h_cap < 4.0) {
      fail(ErrorCode::InvalidArgument, "generate: too many objects for the image height");
    }
    const double h = h_cap <= config.min_box
                         ? h_cap
                         : config.min_box + (h_cap - config.min_box) * unit(rng);
    const double w_cap = std::min(config.max_box, double(config.image_width) / 4.0);
    const double w = w_cap <= config.min_box
                         ? w_cap
                         : config.min_box + (w_cap - config.min_box) * unit(rng);

    // Velocity first, then a start square that keeps the whole line inside.
    double vx = (unit(rng) * 2.0 - 1.0) * config.max_speed;
    double vy = config.enforce_disjoint
                    ? (unit(rng) * 2.0 - 1.0) * std::min(0.4, (y_hi - y_lo - h) / (2.0 * span + 1.0))
                    : (unit(rng) * 2.0 - 1.0) * config.max_speed;
    auto feasible_range = [&](double lo, double hi, double extent, double vel) {
      double a = lo + std::max(0.0, -vel * span);
      double b = hi - extent - std::max(0.0, vel * span);
      return std::pair<double, double>(a, b);
    };
    auto [x_a, x_b] = feasible_range(1.0, double(config.image_width - 2), w, vx);
    while (x_b < x_a) {
      vx *= 0.5;
      std::tie(x_a, x_b) = feasible_range(1.0, double(config.image_width - 2), w, vx);
    }
    auto [y_a, y_b] = feasible_range(y_lo, y_hi, h, vy);
    while (y_b < y_a) {
      vy *= 0.5;
      std::tie(y_a, y_b) = feasible_range(y_lo, y_hi, h, vy);
    }
    const double x0 = x_a + (x_b - x_a) * unit(rng);
    const double y0 = y_a + (y_b - y_a) * unit(rng);

    obj.boxes.resize(frames);
    for (int f = 0; f < frames; ++f) {
      const double x = x0 + vx * f;
      const double y = y0 + vy * f;
      obj.boxes[f] = {x, y, x + w, y + h};
    }

    obj.visible.assign(frames, 1);
    if (config.staggered_entry && config.num_objects > 1) {
      const int enter = int(double(k) * double(frames) / (2.0 * double(config.num_objects)));
      const int exit_at =
          frames - int(double(config.num_objects - 1 - k) * double(frames) /
                       (2.0 * double(config.num_objects)));
      for (int f = 0; f < frames; ++f) {
        obj.visible[f] = (f >= enter && f < exit_at) ? 1 : 0;
      }
    }
    if (config.occlusion_gap > 0 && frames > config.occlusion_gap + 2) {
      const int lo = 1;
      const int hi = frames - config.occlusion_gap - 1;
      const int start = lo + int(unit(rng) * double(hi - lo));
      for (int f = start; f < start + config.occlusion_gap; ++f) obj.visible[f] = 0;
    }

    obj.observed.resize(frames);
    for (int f = 0; f < frames; ++f) {
      Embedding e = obj.latent;
      if (config.noise_sigma > 0.0) {
        for (double& x : e) x += config.noise_sigma * gauss(rng);
      }
      double norm = 0.0;
      for (double x : e) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) {
        e = obj.latent;
        norm = 1.0;
      }
      for (double& x : e) x /= norm;
      obj.observed[f] = std::move(e);
    }

    s.objects.push_back(std::move(obj));
  }
  return s;
}

MotionField exact_motion(const Scenario& s, int frame_a, int frame_b) {
  if (frame_a < 0 || frame_b < 0 || frame_a >= s.config.num_frames ||
      frame_b >= s.config.num_frames) {
    fail(ErrorCode::InvalidArgument, "exact_motion: frame out of range");
  }
  MotionField field = MotionField::flow(s.config.image_width, s.config.image_height);
  for (const ScenarioObject& obj : s.objects) {
    if (!obj.visible[frame_a]) continue;
    const BoundingBox& src = obj.boxes[frame_a];
    const BoundingBox& dst = obj.boxes[frame_b];
    const float dx = float(dst.center_x() - src.center_x());
    const float dy = float(dst.center_y() - src.center_y());
    const int x_begin = std::max(int(std::ceil(src.x1)), 0);
    const int x_end = std::min(int(std::floor(src.x2)), s.config.image_width - 1);
    const int y_begin = std::max(int(std::ceil(src.y1)), 0);
    const int y_end = std::min(int(std::floor(src.y2)), s.config.image_height - 1);
    for (int y = y_begin; y <= y_end; ++y) {
      for (int x = x_begin; x <= x_end; ++x) {
        field.at(x, y, 0) = dx;
        field.at(x, y, 1) = dy;
      }
    }
  }
  return field;
}

namespace {

void enumerate_assignments(const Matrix& cost, std::size_t row, std::vector<int>& current,
                           std::vector<char>& used, double running, double& best,
                           std::vector<int>& best_assign) {
  const std::size_t n1 = cost.rows();
  const std::size_t n2 = cost.cols();
  if (row == n1) {
    if (running < best) {
      best = running;
      best_assign = current;
    }
    return;
  }
  // With more rows than columns, a row may stay unmatched.
  const std::size_t assigned =
      std::size_t(std::count_if(current.begin(), current.begin() + row,
                                [](int j) { return j >= 0; }));
  const std::size_t remaining_cols = n2 - assigned;
  const std::size_t remaining_rows = n1 - row;
  if (remaining_rows > remaining_cols) {
    current[row] = -1;
    enumerate_assignments(cost, row + 1, current, used, running, best, best_assign);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    current[row] = int(j);
    enumerate_assignments(cost, row + 1, current, used, running + cost(row, j), best,
                          best_assign);
    used[j] = 0;
    current[row] = -1;
  }
}

}  // namespace

HardAssignment brute_force_assign(const CostMatrix& c) {
  if (c.augmented) {
    fail(ErrorCode::InvalidArgument, "brute_force_assign: expects unaugmented cost");
  }
  const std::size_t n1 = c.rows();
  const std::size_t n2 = c.cols();
  if (std::min(n1, n2) > 8) {
    fail(ErrorCode::TooLarge, "brute_force_assign: smaller side must be at most 8");
  }
  double combos = 1.0;
  for (std::size_t k = 0; k < std::min(n1, n2); ++k) combos *= double(std::max(n1, n2) - k);
  if (combos > 1e8) {
    fail(ErrorCode::TooLarge, "brute_force_assign: too many injections to enumerate");
  }

  HardAssignment out;
  if (n1 == 0 || n2 == 0) {
    for (std::size_t i = 0; i < n1; ++i) out.unmatched_rows.push_back(i);
    for (std::size_t j = 0; j < n2; ++j) out.unmatched_cols.push_back(j);
    return out;
  }

  std::vector<int> current(n1, -1), best_assign;
  std::vector<char> used(n2, 0);
  double best = std::numeric_limits<double>::infinity();
  enumerate_assignments(c.entries, 0, current, used, 0.0, best, best_assign);

  std::vector<char> col_used(n2, 0);
  for (std::size_t i = 0; i < n1; ++i) {
    if (best_assign[i] >= 0) {
      out.matches.emplace_back(i, std::size_t(best_assign[i]));
      col_used[best_assign[i]] = 1;
    } else {
      out.unmatched_rows.push_back(i);
    }
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  for (const auto& [i, j] : out.matches) out.total_cost += c.at(i, j);
  return out;
}

}  // namespace ott
