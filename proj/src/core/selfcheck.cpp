#include "core/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "core/assignment.hpp"
#include "core/config.hpp"
#include "core/cost.hpp"
#include "core/formats.hpp"
#include "core/loss.hpp"
#include "core/metrics.hpp"
#include "core/pseudo_label.hpp"
#include "core/synthetic.hpp"
#include "core/tracker.hpp"

namespace ott {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

CostMatrix random_cost(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                       double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  CostMatrix c;
  c.entries = Matrix(rows, cols);
  for (double& v : c.entries.data()) v = u(rng);
  return c;
}

// ---------------------------------------------------------------------------
// 1. Hungarian totals equal exhaustive enumeration, sizes 1..7.

CheckResult check_hungarian_exactness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t trials = 0;
  for (std::size_t size = 1; size <= 7; ++size) {
    for (int t = 0; t < 1000; ++t) {
      const CostMatrix c = random_cost(rng, size, size);
      const HardAssignment fast = hungarian(c);
      const HardAssignment oracle = brute_force_assign(c);
      ++trials;
      if (fast.total_cost != oracle.total_cost) {
        return {"hungarian_exactness", false,
                "total cost mismatch at size " + std::to_string(size) + " trial " +
                    std::to_string(t)};
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {"hungarian_exactness", elapsed < 5.0,
          std::to_string(trials) + " instances, " + fmt(elapsed) + "s (< 5s required)"};
}

// ---------------------------------------------------------------------------
// 2. Sinkhorn plans are nonnegative and feasible to 1e-6 within 300 sweeps.

CheckResult check_sinkhorn_feasibility() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<std::size_t> size_dist(1, 9);
  const double epsilons[] = {0.05, 0.1, 0.5};
  const Config defaults;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n1 = size_dist(rng);
    const std::size_t n2 = size_dist(rng);
    const double eps = epsilons[t % 3];
    const CostMatrix c = augment_dustbin(random_cost(rng, n1, n2), defaults.gamma);
    const TransportPlan plan = sinkhorn(c, default_marginals(n1, n2), eps, 300, 1e-6);
    for (double v : plan.entries.data()) {
      if (!(v >= 0.0)) {
        return {"sinkhorn_feasibility", false, "negative plan entry at trial " +
                                                   std::to_string(t)};
      }
    }
    worst = std::max(worst, plan.marginal_violation);
    if (plan.marginal_violation > 1e-6) {
      return {"sinkhorn_feasibility", false,
              "violation " + fmt(plan.marginal_violation) + " > 1e-6 at trial " +
                  std::to_string(t) + " (eps " + fmt(eps) + ")"};
    }
  }
  const double elapsed = seconds_since(start);
  return {"sinkhorn_feasibility", elapsed < 5.0,
          "500 instances, worst violation " + fmt(worst) + ", " + fmt(elapsed) +
              "s (< 5s required)"};
}

// ---------------------------------------------------------------------------
// 3. decode(sinkhorn) at eps=0.01 recovers the Hungarian optimum on
//    margin-separated instances.

// Exhaustive best and second-best permutation totals of a square cost.
std::pair<double, double> best_two_permutations(const CostMatrix& c) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += c.at(i, perm[i]);
    if (total < best) {
      second = best;
      best = total;
    } else if (total < second) {
      second = total;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, second};
}

CheckResult check_annealing() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> low(0.0, 0.2), high(0.9, 1.9);
  int agree = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CostMatrix c;
    c.entries = Matrix(5, 5);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) c.entries(i, j) = j == perm[i] ? low(rng) : high(rng);
    }
    const auto [best, second] = best_two_permutations(c);
    if (!(second - best > 0.5)) {
      return {"sinkhorn_annealing", false,
              "constructed instance misses the 0.5 margin precondition"};
    }
    const CostMatrix augmented = augment_dustbin(c, 2.0);
    const TransportPlan plan =
        sinkhorn(augmented, default_marginals(5, 5), 0.01, 5000, 1e-9);
    const HardAssignment soft = decode(plan);
    const HardAssignment hard = hungarian(c);
    if (soft.matches == hard.matches) ++agree;
  }
  return {"sinkhorn_annealing", agree >= 990,
          std::to_string(agree) + "/1000 agree (>= 990 required)"};
}

// ---------------------------------------------------------------------------
// 4. Analytic training-loss gradients match central finite differences.

struct GradInstance {
  std::vector<Embedding> ref, tgt;
  double gamma = 0.5;
  LabelPairs labels;
  std::vector<Triplet> triplets;
};

std::vector<Embedding> random_embeddings(std::mt19937_64& rng, std::size_t n,
                                         std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Embedding> out(n, Embedding(dim));
  for (Embedding& e : out) {
    for (double& v : e) v = gauss(rng);
  }
  return out;
}

// Finite differences are only a valid oracle away from the hinge and L1
// kinks and where the mined hard negative is stable under the step size.
bool instance_is_smooth(const GradInstance& inst, const LossHyperparams& hp) {
  for (const Triplet& t : inst.triplets) {
    const Embedding& a = inst.ref[t.anchor];
    const Embedding& p = inst.tgt[t.positive];
    const Embedding& n = inst.tgt[t.negative];
    const double hinge = embedding_distance(a, p, hp.distance) -
                         embedding_distance(a, n, hp.distance) + hp.margin;
    if (std::abs(hinge) < 1e-3) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::abs(a[k] - p[k]) < 1e-4 || std::abs(a[k] - n[k]) < 1e-4) return false;
    }
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    for (std::size_t cand = 0; cand < inst.tgt.size(); ++cand) {
      if (cand == t.positive) continue;
      const double d = embedding_distance(a, inst.tgt[cand], hp.distance);
      if (d < best) {
        second = best;
        best = d;
      } else if (d < second) {
        second = d;
      }
    }
    if (inst.tgt.size() > 2 && second - best < 1e-3) return false;
  }
  return true;
}

GradInstance random_grad_instance(std::mt19937_64& rng, const LossHyperparams& hp,
                                  std::size_t max_side, std::size_t dim) {
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  std::uniform_real_distribution<double> u(0.3, 0.7);
  while (true) {
    GradInstance inst;
    const std::size_t n1 = side(rng);
    const std::size_t n2 = side(rng);
    inst.ref = random_embeddings(rng, n1, dim);
    inst.tgt = random_embeddings(rng, n2, dim);
    inst.gamma = u(rng);
    std::vector<std::size_t> cols(n2);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(cols.begin(), cols.end(), rng);
    const std::size_t k = std::min(n1, n2);
    for (std::size_t i = 0; i < k; ++i) inst.labels.emplace_back(i, cols[i]);
    inst.triplets = mine_triplets(inst.ref, inst.tgt, inst.labels, hp.distance);
    if (instance_is_smooth(inst, hp)) return inst;
  }
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-3});
  return std::abs(analytic - numeric) / scale;
}

CheckResult check_gradient_correctness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4004);
  LossHyperparams hp;
  hp.alpha = 1.0;
  hp.beta = 0.5;
  hp.epsilon = 0.1;
  hp.sinkhorn_iters = 60;
  const double h = 1e-5;
  double worst = 0.0;

  for (int t = 0; t < 50; ++t) {
    GradInstance inst = random_grad_instance(rng, hp, 6, 8);
    const LossGradient grad =
        loss_grad(inst.ref, inst.tgt, inst.gamma, inst.labels, inst.triplets, hp);

    auto loss_at = [&]() {
      return training_loss(inst.ref, inst.tgt, inst.gamma, inst.labels, inst.triplets,
                           hp)
          .total;
    };
    auto probe = [&](double* slot, double analytic) {
      const double saved = *slot;
      *slot = saved + h;
      const double up = loss_at();
      *slot = saved - h;
      const double down = loss_at();
      *slot = saved;
      worst = std::max(worst, relative_error(analytic, (up - down) / (2.0 * h)));
    };

    for (std::size_t i = 0; i < inst.ref.size(); ++i) {
      for (std::size_t k = 0; k < inst.ref[i].size(); ++k) {
        probe(&inst.ref[i][k], grad.d_ref[i][k]);
      }
    }
    for (std::size_t j = 0; j < inst.tgt.size(); ++j) {
      for (std::size_t k = 0; k < inst.tgt[j].size(); ++k) {
        probe(&inst.tgt[j][k], grad.d_tgt[j][k]);
      }
    }
    probe(&inst.gamma, grad.d_gamma);
    if (worst > 1e-4) {
      return {"gradient_correctness", false,
              "relative error " + fmt(worst) + " > 1e-4 at instance " + std::to_string(t)};
    }
  }
  const double elapsed = seconds_since(start);
  return {"gradient_correctness", elapsed < 30.0,
          "50 instances, worst relative error " + fmt(worst) + ", " + fmt(elapsed) +
              "s (< 30s required)"};
}

// ---------------------------------------------------------------------------
// 5. Plain gradient descent drives the decoded assignment onto the labels.

CheckResult check_descent() {
  std::mt19937_64 rng(5005);
  LossHyperparams hp;
  hp.epsilon = 0.1;
  hp.sinkhorn_iters = 50;

  std::vector<Embedding> ref = random_embeddings(rng, 5, 8);
  std::vector<Embedding> tgt = random_embeddings(rng, 5, 8);
  double gamma = 0.5;
  std::vector<std::size_t> cols(5);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(cols.begin(), cols.end(), rng);
  LabelPairs labels;
  for (std::size_t i = 0; i < 5; ++i) labels.emplace_back(i, cols[i]);

  const double rate = 0.5;
  double initial = 0.0, final_loss = 0.0;
  for (int step = 0; step < 200; ++step) {
    const auto triplets = mine_triplets(ref, tgt, labels, hp.distance);
    const LossGradient grad = loss_grad(ref, tgt, gamma, labels, triplets, hp);
    if (step == 0) initial = grad.value.total;
    final_loss = grad.value.total;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      for (std::size_t k = 0; k < ref[i].size(); ++k) ref[i][k] -= rate * grad.d_ref[i][k];
    }
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      for (std::size_t k = 0; k < tgt[j].size(); ++k) tgt[j][k] -= rate * grad.d_tgt[j][k];
    }
    gamma -= rate * grad.d_gamma;
  }

  const CostMatrix cost = augment_dustbin(cosine_cost(ref, tgt), gamma);
  const TransportPlan plan = sinkhorn(cost, default_marginals(5, 5), hp.epsilon, 200, 1e-9);
  HardAssignment decoded = decode(plan);
  LabelPairs got(decoded.matches.begin(), decoded.matches.end());
  std::sort(got.begin(), got.end());
  LabelPairs want = labels;
  std::sort(want.begin(), want.end());

  const bool reduced = final_loss < 0.1 * initial;
  const bool matched = got == want;
  return {"end_to_end_descent", reduced && matched,
          "loss " + fmt(initial) + " -> " + fmt(final_loss) +
              (matched ? ", decoded assignment equals the labels"
                       : ", decoded assignment DIFFERS from the labels")};
}

// ---------------------------------------------------------------------------
// 6. Pseudo-labels reproduce ground truth under exact motion.

CheckResult check_pseudo_labels() {
  ScenarioConfig sc;
  sc.num_objects = 6;
  sc.num_frames = 2;
  sc.dim = 8;
  sc.separation = 0.3;
  sc.image_width = 320;
  sc.image_height = 240;
  sc.enforce_disjoint = true;

  std::size_t exact_true = 0, exact_total = 0;
  std::mt19937_64 jitter_rng(6006);
  std::uniform_real_distribution<double> jitter(-2.0, 2.0);
  std::size_t jitter_true = 0, jitter_pred = 0;

  for (int t = 0; t < 100; ++t) {
    const Scenario s = generate(sc, 60000 + std::uint64_t(t));
    const auto ref = s.detections(0);
    const auto tgt = s.detections(1);
    const MotionField motion = exact_motion(s, 0, 1);

    const PseudoLabelSet labels = generate_pseudo_labels(ref, tgt, motion, 0.1);
    exact_total += ref.size();
    if (labels.pairs.size() != ref.size()) {
      return {"pseudo_label_fidelity", false,
              "exact-motion pair count off at scenario " + std::to_string(t)};
    }
    for (const auto& [i, j] : labels.pairs) {
      if (i != j) {
        return {"pseudo_label_fidelity", false,
                "wrong exact-motion pairing at scenario " + std::to_string(t)};
      }
      ++exact_true;
    }

    auto jittered = [&](const std::vector<Detection>& dets) {
      std::vector<Detection> out = dets;
      for (Detection& d : out) {
        d.box.x1 += jitter(jitter_rng);
        d.box.y1 += jitter(jitter_rng);
        d.box.x2 += jitter(jitter_rng);
        d.box.y2 += jitter(jitter_rng);
      }
      return out;
    };
    const PseudoLabelSet noisy =
        generate_pseudo_labels(jittered(ref), jittered(tgt), motion, 0.1);
    for (const auto& [i, j] : noisy.pairs) {
      ++jitter_pred;
      if (i == j) ++jitter_true;
    }
  }

  const bool exact_ok = exact_true == exact_total && exact_total > 0;
  const double precision = jitter_pred == 0 ? 0.0 : double(jitter_true) / double(jitter_pred);
  return {"pseudo_label_fidelity", exact_ok && precision >= 0.98,
          "exact motion " + std::to_string(exact_true) + "/" + std::to_string(exact_total) +
              ", jitter precision " + fmt(precision) + " (>= 0.98 required)"};
}

// ---------------------------------------------------------------------------
// 7. Occlusion masks equal a hand-computed oracle on a step-edge grid.

CheckResult check_occlusion_masks() {
  const int width = 16, height = 4;
  // Far view: constant background disparity 2. Near view: a foreground patch
  // of disparity 10 on columns [4, 12).
  MotionField d_far = MotionField::disparity(width, height);
  MotionField d_near = MotionField::disparity(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      d_far.at(x, y, 0) = 2.0f;
      d_near.at(x, y, 0) = (x >= 4 && x < 12) ? 10.0f : 2.0f;
    }
  }
  const OcclusionMask mask = occlusion_mask(d_near, d_far, 1.0);

  // Oracle by integer reasoning: sample position x-2; x<2 leaves the grid;
  // the warped value is 10 exactly when x-2 lands in [4, 12).
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int sx = x - 2;
      const bool expect = sx < 0 || (sx >= 4 && sx < 12);
      if (mask.at(x, y) != (expect ? 1 : 0)) {
        return {"occlusion_masks", false,
                "mask differs from the hand oracle at (" + std::to_string(x) + "," +
                    std::to_string(y) + ")"};
      }
    }
  }

  // Discard rule: only the fully-occluded box falls. Occluded cells are
  // {0,1} (out of grid) plus {6..13} (disparity mismatch).
  auto det = [](double x1, double x2) {
    Detection d;
    d.box = {x1, 0.0, x2, 4.0};
    return d;
  };
  const std::vector<Detection> dets = {
      det(6.0, 14.0),  // cells 6..13: fully occluded
      det(2.0, 6.0),   // cells 2..5: fully visible
      det(2.0, 10.0),  // cells 2..9: 4 of 8 occluded, exactly at the 50% edge
  };
  const auto kept = drop_occluded(dets, mask, 0.5);
  const bool ok = kept.size() == 2 && kept[0].box.x2 == 6.0 && kept[1].box.x2 == 10.0;
  return {"occlusion_masks", ok,
          ok ? "mask equals the oracle; only the fully-occluded detection dropped"
             : "discard rule dropped the wrong detections"};
}

// ---------------------------------------------------------------------------
// 8. Tracker quality ladder on seeded scenarios.

CheckResult check_tracker_ladder() {
  Config config;  // spec defaults: sigma 0.7, gamma 0.5, sinkhorn matcher

  ScenarioConfig base;
  base.num_objects = 8;
  base.num_frames = 50;
  base.dim = 16;
  base.separation = 0.5;

  // (a) noiseless, no occlusion: perfect identity preservation.
  {
    const Scenario s = generate(base, 801);
    const auto [dets, embs] = s.stream();
    const TrackOutput pred = run_sequence(dets, embs, config);
    const double score = idf1(pred, s.ground_truth(), config.iou_thresh_eval);
    const std::size_t switches = id_switches(pred, s.ground_truth(), config.iou_thresh_eval);
    if (score != 1.0 || switches != 0) {
      return {"tracker_ladder", false,
              "(a) idf1 " + fmt(score) + ", idsw " + std::to_string(switches)};
    }
  }

  // (b) embedding noise 0.1 with 3-frame occlusion gaps, max_age 10.
  double noisy_score = 0.0;
  {
    ScenarioConfig sc = base;
    sc.noise_sigma = 0.1;
    sc.occlusion_gap = 3;
    Config c = config;
    c.max_age = 10;
    const Scenario s = generate(sc, 802);
    const auto [dets, embs] = s.stream();
    const TrackOutput pred = run_sequence(dets, embs, c);
    noisy_score = idf1(pred, s.ground_truth(), c.iou_thresh_eval);
    if (noisy_score < 0.95) {
      return {"tracker_ladder", false, "(b) idf1 " + fmt(noisy_score) + " < 0.95"};
    }
  }

  // (c) staggered entry/exit: the pred-id/object relation is a bijection and
  //     every id is brand new on its first frame.
  {
    ScenarioConfig sc = base;
    sc.staggered_entry = true;
    const Scenario s = generate(sc, 803);
    const auto [dets, embs] = s.stream();
    const TrackOutput pred = run_sequence(dets, embs, config);

    std::map<int64_t, std::map<int64_t, int64_t>> by_frame;  // frame -> id -> none
    std::map<std::string, int64_t> box_to_pred;
    auto box_key = [](int64_t frame, const BoundingBox& b) {
      std::ostringstream k;
      k << frame << ':' << b.x1 << ':' << b.y1 << ':' << b.x2 << ':' << b.y2;
      return k.str();
    };
    std::map<int64_t, int64_t> first_frame_of_id;
    for (const TrackRecord& r : pred) {
      box_to_pred[box_key(r.frame, r.box)] = r.track_id;
      if (!first_frame_of_id.count(r.track_id)) first_frame_of_id[r.track_id] = r.frame;
    }
    std::map<int64_t, std::set<int64_t>> ids_of_object;
    for (const TrackRecord& g : s.ground_truth()) {
      const auto it = box_to_pred.find(box_key(g.frame, g.box));
      if (it == box_to_pred.end()) {
        return {"tracker_ladder", false, "(c) ground-truth box missing from output"};
      }
      ids_of_object[g.track_id].insert(it->second);
    }
    std::set<int64_t> all_ids;
    for (const auto& [obj, ids] : ids_of_object) {
      if (ids.size() != 1) {
        return {"tracker_ladder", false,
                "(c) object " + std::to_string(obj) + " carries " +
                    std::to_string(ids.size()) + " ids"};
      }
      if (!all_ids.insert(*ids.begin()).second) {
        return {"tracker_ladder", false, "(c) id reused across objects"};
      }
    }
    // Fresh on entry: an object's id must not predate its first visible frame.
    for (const auto& [obj, ids] : ids_of_object) {
      int64_t first_visible = -1;
      for (const TrackRecord& g : s.ground_truth()) {
        if (g.track_id == obj) {
          first_visible = g.frame;
          break;
        }
      }
      if (first_frame_of_id[*ids.begin()] != first_visible) {
        return {"tracker_ladder", false, "(c) id issued before its object entered"};
      }
    }
  }

  return {"tracker_ladder", true,
          "(a) idf1 1.0 / 0 switches, (b) idf1 " + fmt(noisy_score) +
              " >= 0.95, (c) fresh ids, zero reuse"};
}

// ---------------------------------------------------------------------------
// 9. Metric fixtures and relabeling invariance.

TrackOutput relabeled(const TrackOutput& pred, std::mt19937_64& rng) {
  std::set<int64_t> ids;
  for (const TrackRecord& r : pred) ids.insert(r.track_id);
  std::vector<int64_t> fresh(ids.size());
  std::iota(fresh.begin(), fresh.end(), 1);
  std::shuffle(fresh.begin(), fresh.end(), rng);
  std::map<int64_t, int64_t> mapping;
  std::size_t k = 0;
  for (int64_t id : ids) mapping[id] = fresh[k++] + 1000;
  TrackOutput out = pred;
  for (TrackRecord& r : out) r.track_id = mapping[r.track_id];
  return out;
}

CheckResult check_metrics() {
  // A 10-frame ground-truth track predicted as two 5-frame halves.
  TrackOutput gt, pred;
  for (int f = 0; f < 10; ++f) {
    const BoundingBox box{10.0 + f, 20.0, 30.0 + f, 40.0};
    gt.push_back({f, 7, box});
    pred.push_back({f, f < 5 ? 1 : 2, box});
  }
  const double split_idf1 = idf1(pred, gt, 0.5);
  if (split_idf1 != 0.5) {
    return {"metric_fixtures", false, "split-track idf1 " + fmt(split_idf1) + " != 0.5"};
  }
  const auto [precision, recall] = assoc_pr(pred, gt, 0.5);
  if (recall != 20.0 / 45.0 || precision != 1.0) {
    return {"metric_fixtures", false,
            "split-track assoc_pr (" + fmt(precision) + ", " + fmt(recall) + ")"};
  }

  // Relabeling invariance on a heavily fragmented tracker output (noise well
  // past what the appearance model can absorb), so the id mapping is
  // nontrivial.
  ScenarioConfig sc;
  sc.num_objects = 8;
  sc.num_frames = 50;
  sc.dim = 16;
  sc.separation = 0.5;
  sc.noise_sigma = 0.25;
  sc.occlusion_gap = 4;
  const Scenario s = generate(sc, 901);
  Config config;
  const auto [dets, embs] = s.stream();
  const TrackOutput tracked = run_sequence(dets, embs, config);
  const double reference = idf1(tracked, s.ground_truth(), 0.5);
  std::mt19937_64 rng(9009);
  for (int t = 0; t < 100; ++t) {
    const double relabeled_score = idf1(relabeled(tracked, rng), s.ground_truth(), 0.5);
    if (relabeled_score != reference) {
      return {"metric_fixtures", false,
              "idf1 changed under relabeling: " + fmt(reference) + " -> " +
                  fmt(relabeled_score)};
    }
  }
  return {"metric_fixtures", true,
          "split fixture exact, idf1 invariant over 100 relabelings"};
}

// ---------------------------------------------------------------------------
// 10. Every file format round-trips exactly.

CheckResult check_format_roundtrips() {
  namespace fs = std::filesystem;
  std::mt19937_64 rng(100100);
  const fs::path dir =
      fs::temp_directory_path() / ("ottrack_roundtrip_" + std::to_string(rng()));
  fs::create_directories(dir);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{dir};

  std::uniform_real_distribution<double> coord(0.0, 500.0), unit(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 20), count_dist(0, 12), dim_dist(1, 9);

  for (int t = 0; t < 100; ++t) {
    // Detections.
    {
      std::vector<Detection> dets;
      int64_t frame = 0;
      const int n = count_dist(rng);
      for (int i = 0; i < n; ++i) {
        frame += small(rng) % 3;
        Detection d;
        const double x = coord(rng), y = coord(rng);
        d.box = {x, y, x + 1.0 + coord(rng) / 10.0, y + 1.0 + coord(rng) / 10.0};
        d.confidence = unit(rng);
        d.class_id = small(rng);
        d.frame = frame;
        dets.push_back(d);
      }
      const std::string path = (dir / "dets.txt").string();
      write_detections(path, dets);
      const auto back = read_detections(path);
      if (back.size() != dets.size()) {
        return {"format_roundtrips", false, "detection count changed"};
      }
      for (std::size_t i = 0; i < dets.size(); ++i) {
        if (back[i].frame != dets[i].frame || back[i].box != dets[i].box ||
            back[i].confidence != dets[i].confidence ||
            back[i].class_id != dets[i].class_id) {
          return {"format_roundtrips", false, "detection record changed in round trip"};
        }
      }
    }
    // Embeddings (float payload must survive bit-exactly).
    {
      const std::size_t n = std::size_t(count_dist(rng));
      const std::size_t dim = std::size_t(dim_dist(rng));
      std::vector<Embedding> embs(n, Embedding(dim));
      std::normal_distribution<double> gauss(0.0, 2.0);
      for (Embedding& e : embs) {
        for (double& v : e) v = double(float(gauss(rng)));
      }
      const std::string path = (dir / "embs.bin").string();
      write_embeddings(path, embs);
      if (read_embeddings(path) != embs) {
        return {"format_roundtrips", false, "embedding payload changed in round trip"};
      }
    }
    // Grids.
    {
      MotionField grid;
      grid.width = 1 + small(rng);
      grid.height = 1 + small(rng);
      grid.channels = 1 + (t % 2);
      grid.values.resize(std::size_t(grid.width) * grid.height * grid.channels);
      std::normal_distribution<float> gauss(0.0f, 3.0f);
      for (float& v : grid.values) v = gauss(rng);
      const std::string path = (dir / "grid.bin").string();
      write_grid(path, grid);
      const MotionField back = read_grid(path);
      if (back.width != grid.width || back.height != grid.height ||
          back.channels != grid.channels || back.values != grid.values) {
        return {"format_roundtrips", false, "grid changed in round trip"};
      }
    }
    // Tracks.
    {
      TrackOutput tracks;
      const int n = count_dist(rng);
      int64_t frame = 0;
      for (int i = 0; i < n; ++i) {
        frame += 1 + small(rng) % 3;
        const double x = coord(rng), y = coord(rng);
        tracks.push_back({frame, 1 + small(rng), {x, y, x + 5.0, y + 5.0}});
      }
      const std::string path = (dir / "tracks.txt").string();
      write_tracks(path, tracks);
      if (read_tracks(path) != tracks) {
        return {"format_roundtrips", false, "track records changed in round trip"};
      }
    }
    // Labels.
    {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      const int n = count_dist(rng);
      for (int i = 0; i < n; ++i) pairs.emplace_back(small(rng), small(rng));
      const std::string path = (dir / "labels.txt").string();
      write_labels(path, pairs);
      if (read_labels(path) != pairs) {
        return {"format_roundtrips", false, "label pairs changed in round trip"};
      }
    }
    // Config.
    {
      Config config;
      config.sigma = unit(rng);
      config.epsilon = 0.01 + unit(rng);
      config.gamma = unit(rng);
      config.sinkhorn_iters = 1 + small(rng);
      config.max_age = small(rng);
      config.min_area = coord(rng);
      config.matcher = t % 2 ? MatcherMode::Hungarian : MatcherMode::Sinkhorn;
      const std::string path = (dir / "config.cfg").string();
      save_config(config, path);
      const Config back = load_config(path);
      for (const std::string& key : config_keys()) {
        if (config_get(back, key) != config_get(config, key)) {
          return {"format_roundtrips", false, "config key " + key + " changed"};
        }
      }
    }
  }
  return {"format_roundtrips", true, "100 seeded instances per format, all exact"};
}

}  // namespace

std::vector<CheckResult> run_selfcheck() {
  return {
      check_hungarian_exactness(),
      check_sinkhorn_feasibility(),
      check_annealing(),
      check_gradient_correctness(),
      check_descent(),
      check_pseudo_labels(),
      check_occlusion_masks(),
      check_tracker_ladder(),
      check_metrics(),
      check_format_roundtrips(),
  };
}

}  // namespace ott
