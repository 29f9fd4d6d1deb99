#include "ottrack/ottrack.h"

#include <cstdio>
#include <cstring>
#include <optional>
#include <string>

#include "core/assignment.hpp"
#include "core/config.hpp"
#include "core/geometry.hpp"
#include "core/pipeline.hpp"
#include "core/selfcheck.hpp"
#include "core/tracker.hpp"

namespace {

thread_local std::string g_last_error;

ott_status map_code(ott::ErrorCode code) {
  using ott::ErrorCode;
  switch (code) {
    case ErrorCode::ParseError: return OTT_ERR_PARSE;
    case ErrorCode::CountMismatch:
    case ErrorCode::EmbeddingCountMismatch: return OTT_ERR_COUNT_MISMATCH;
    case ErrorCode::DimensionMismatch: return OTT_ERR_DIMENSION_MISMATCH;
    case ErrorCode::ZeroNormEmbedding:
    case ErrorCode::NonFiniteCost: return OTT_ERR_NUMERIC;
    case ErrorCode::InfeasibleMarginals: return OTT_ERR_INFEASIBLE;
    case ErrorCode::TooLarge: return OTT_ERR_TOO_LARGE;
    case ErrorCode::IoError: return OTT_ERR_IO;
    case ErrorCode::InvalidArgument:
    case ErrorCode::CenterOutOfField:
    case ErrorCode::AlreadyAugmented:
    case ErrorCode::IterationMismatch:
    case ErrorCode::LabelOutOfRange:
    case ErrorCode::NonMonotonicFrame:
    case ErrorCode::SeparationInfeasible: return OTT_ERR_INVALID_ARGUMENT;
  }
  return OTT_ERR_UNKNOWN;
}

template <typename Fn>
ott_status guarded(Fn&& fn) {
  try {
    fn();
    return OTT_OK;
  } catch (const ott::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OTT_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return OTT_ERR_UNKNOWN;
  }
}

ott_status invalid(const char* message) {
  g_last_error = message;
  return OTT_ERR_INVALID_ARGUMENT;
}

std::optional<std::string> opt_path(const char* path) {
  if (path == nullptr || path[0] == '\0') return std::nullopt;
  return std::string(path);
}

const ott::Config& config_or_default(const ott_config* config);

}  // namespace

struct ott_config {
  ott::Config value;
};

struct ott_tracker {
  ott::Tracker tracker;
  explicit ott_tracker(const ott::Config& config) : tracker(config) {}
};

namespace {

const ott::Config& config_or_default(const ott_config* config) {
  static const ott::Config defaults;
  return config ? config->value : defaults;
}

}  // namespace

extern "C" {

const char* ott_status_name(ott_status status) {
  switch (status) {
    case OTT_OK: return "OK";
    case OTT_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case OTT_ERR_PARSE: return "PARSE";
    case OTT_ERR_COUNT_MISMATCH: return "COUNT_MISMATCH";
    case OTT_ERR_DIMENSION_MISMATCH: return "DIMENSION_MISMATCH";
    case OTT_ERR_NUMERIC: return "NUMERIC";
    case OTT_ERR_INFEASIBLE: return "INFEASIBLE";
    case OTT_ERR_TOO_LARGE: return "TOO_LARGE";
    case OTT_ERR_IO: return "IO";
    case OTT_ERR_CHECK_FAILED: return "CHECK_FAILED";
    case OTT_ERR_UNKNOWN: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const char* ott_last_error(void) { return g_last_error.c_str(); }

ott_config* ott_config_new(void) { return new (std::nothrow) ott_config{}; }

void ott_config_free(ott_config* config) { delete config; }

ott_status ott_config_load(ott_config* config, const char* path) {
  if (!config || !path) return invalid("config and path must be non-NULL");
  return guarded([&] { config->value = ott::load_config(path); });
}

ott_status ott_config_save(const ott_config* config, const char* path) {
  if (!config || !path) return invalid("config and path must be non-NULL");
  return guarded([&] { ott::save_config(config->value, path); });
}

ott_status ott_config_set(ott_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return invalid("config, key, value must be non-NULL");
  return guarded([&] { ott::config_set(config->value, key, value); });
}

ott_status ott_config_get(const ott_config* config, const char* key, char* buffer,
                          size_t buffer_size) {
  if (!config || !key || !buffer || buffer_size == 0) {
    return invalid("config, key, and a non-empty buffer are required");
  }
  return guarded([&] {
    const std::string value = ott::config_get(config->value, key);
    if (value.size() + 1 > buffer_size) {
      ott::fail(ott::ErrorCode::InvalidArgument, "buffer too small for value");
    }
    std::memcpy(buffer, value.c_str(), value.size() + 1);
  });
}

ott_tracker* ott_tracker_new(const ott_config* config) {
  return new (std::nothrow) ott_tracker(config_or_default(config));
}

void ott_tracker_free(ott_tracker* tracker) { delete tracker; }

ott_status ott_tracker_step(ott_tracker* tracker, int64_t frame, const double* boxes,
                            size_t n, const double* embeddings, size_t dim,
                            int64_t* track_ids_out) {
  if (!tracker) return invalid("tracker must be non-NULL");
  if (n > 0 && (!boxes || !embeddings || !track_ids_out || dim == 0)) {
    return invalid("boxes, embeddings, track_ids_out required for n > 0");
  }
  return guarded([&] {
    std::vector<ott::Detection> dets(n);
    std::vector<ott::Embedding> embs(n, ott::Embedding(dim));
    for (size_t i = 0; i < n; ++i) {
      dets[i].box = {boxes[i * 4], boxes[i * 4 + 1], boxes[i * 4 + 2], boxes[i * 4 + 3]};
      dets[i].frame = frame;
      ott::require_valid(dets[i].box, "ott_tracker_step");
      for (size_t k = 0; k < dim; ++k) embs[i][k] = embeddings[i * dim + k];
    }
    const auto records = tracker->tracker.step(frame, dets, embs);
    for (size_t i = 0; i < n; ++i) track_ids_out[i] = records[i].track_id;
  });
}

double ott_box_iou(const double box_a[4], const double box_b[4]) {
  if (!box_a || !box_b) return -1.0;
  try {
    return ott::iou({box_a[0], box_a[1], box_a[2], box_a[3]},
                    {box_b[0], box_b[1], box_b[2], box_b[3]});
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return -1.0;
  }
}

ott_status ott_hungarian(const double* cost, size_t n1, size_t n2,
                         int32_t* row_match_out, double* total_cost_out) {
  if ((n1 * n2 > 0 && !cost) || (n1 > 0 && !row_match_out)) {
    return invalid("cost and row_match_out must be non-NULL");
  }
  return guarded([&] {
    ott::Matrix m(n1, n2);
    for (size_t i = 0; i < n1 * n2; ++i) m.data()[i] = cost[i];
    const ott::HardAssignment result = ott::solve_assignment(m);
    for (size_t i = 0; i < n1; ++i) row_match_out[i] = -1;
    for (const auto& [i, j] : result.matches) row_match_out[i] = int32_t(j);
    if (total_cost_out) *total_cost_out = result.total_cost;
  });
}

ott_status ott_soft_assign(const double* cost, size_t n1, size_t n2, double gamma,
                           double epsilon, int max_iters, double tol, double* plan_out,
                           int32_t* row_match_out, double* violation_out,
                           int32_t* iterations_out) {
  if (n1 * n2 > 0 && !cost) return invalid("cost must be non-NULL");
  return guarded([&] {
    ott::CostMatrix c;
    c.entries = ott::Matrix(n1, n2);
    for (size_t i = 0; i < n1 * n2; ++i) c.entries.data()[i] = cost[i];
    const ott::CostMatrix augmented = ott::augment_dustbin(c, gamma);
    const ott::TransportPlan plan = ott::sinkhorn(
        augmented, ott::default_marginals(n1, n2), epsilon, max_iters, tol);
    if (plan_out) {
      const auto& data = plan.entries.data();
      std::memcpy(plan_out, data.data(), data.size() * sizeof(double));
    }
    if (row_match_out) {
      const ott::HardAssignment hard = ott::decode(plan);
      for (size_t i = 0; i < n1; ++i) row_match_out[i] = -1;
      for (const auto& [i, j] : hard.matches) row_match_out[i] = int32_t(j);
    }
    if (violation_out) *violation_out = plan.marginal_violation;
    if (iterations_out) *iterations_out = plan.iterations_used;
  });
}

ott_status ott_run_track(const char* dets_path, const char* embs_path,
                         const ott_config* config, const char* out_path) {
  if (!dets_path || !embs_path || !out_path) {
    return invalid("dets_path, embs_path, out_path must be non-NULL");
  }
  return guarded([&] {
    ott::run_track_pipeline(dets_path, embs_path, config_or_default(config), out_path);
  });
}

ott_status ott_run_pseudolabel(const char* ref_path, const char* tgt_path,
                               const char* grid_path, const ott_config* config,
                               const char* out_labels, const char* out_report,
                               const char* occl_ref_path, const char* occl_tgt_path) {
  if (!ref_path || !tgt_path || !grid_path || !out_labels) {
    return invalid("ref_path, tgt_path, grid_path, out_labels must be non-NULL");
  }
  return guarded([&] {
    ott::run_pseudolabel_pipeline(ref_path, tgt_path, grid_path,
                                  config_or_default(config), out_labels,
                                  opt_path(out_report), opt_path(occl_ref_path),
                                  opt_path(occl_tgt_path));
  });
}

ott_status ott_run_occlusion(const char* left_path, const char* right_path,
                             const ott_config* config, const char* out_left,
                             const char* out_right) {
  if (!left_path || !right_path || !out_left || !out_right) {
    return invalid("left, right, out_left, out_right must be non-NULL");
  }
  return guarded([&] {
    ott::run_occlusion_pipeline(left_path, right_path, config_or_default(config),
                                out_left, out_right);
  });
}

ott_status ott_run_eval(const char* pred_path, const char* gt_path,
                        const ott_config* config, const char* out_report,
                        ott_metrics* metrics_out) {
  if (!pred_path || !gt_path) return invalid("pred_path and gt_path must be non-NULL");
  return guarded([&] {
    const ott::MetricReport report = ott::run_eval_pipeline(
        pred_path, gt_path, config_or_default(config), opt_path(out_report));
    if (metrics_out) {
      metrics_out->idf1 = report.idf1;
      metrics_out->id_switches = report.id_switches;
      metrics_out->assoc_precision = report.assoc_precision;
      metrics_out->assoc_recall = report.assoc_recall;
      metrics_out->tp = report.tp;
      metrics_out->fp = report.fp;
      metrics_out->fn = report.fn;
    }
  });
}

void ott_synth_params_init(ott_synth_params* params) {
  if (!params) return;
  params->objects = 8;
  params->frames = 50;
  params->dim = 16;
  params->separation = 0.5;
  params->noise_sigma = 0.0;
  params->image_width = 320;
  params->image_height = 240;
  params->occlusion_gap = 0;
  params->staggered_entry = 0;
  params->allow_overlap = 0;
  params->pair_a = 0;
  params->pair_b = 1;
  params->stereo = 0;
}

ott_status ott_run_synth(const char* out_dir, uint64_t seed,
                         const ott_synth_params* params) {
  if (!out_dir) return invalid("out_dir must be non-NULL");
  ott_synth_params defaults;
  ott_synth_params_init(&defaults);
  const ott_synth_params& p = params ? *params : defaults;
  return guarded([&] {
    ott::SynthSpec spec;
    spec.scenario.num_objects = p.objects;
    spec.scenario.num_frames = int(p.frames);
    spec.scenario.dim = p.dim;
    spec.scenario.separation = p.separation;
    spec.scenario.noise_sigma = p.noise_sigma;
    spec.scenario.image_width = int(p.image_width);
    spec.scenario.image_height = int(p.image_height);
    spec.scenario.occlusion_gap = int(p.occlusion_gap);
    spec.scenario.staggered_entry = p.staggered_entry != 0;
    spec.scenario.enforce_disjoint = p.allow_overlap == 0;
    spec.pair_a = p.pair_a;
    spec.pair_b = p.pair_b;
    spec.stereo = p.stereo != 0;
    ott::run_synth_pipeline(out_dir, seed, spec);
  });
}

ott_status ott_run_selfcheck(int verbose, int32_t* failures_out) {
  int32_t failures = 0;
  const ott_status status = guarded([&] {
    const auto results = ott::run_selfcheck();
    for (const auto& r : results) {
      if (!r.passed) ++failures;
      if (verbose) {
        std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.details.c_str());
      }
    }
    if (verbose) std::fflush(stdout);
  });
  if (failures_out) *failures_out = failures;
  if (status != OTT_OK) return status;
  if (failures > 0) {
    g_last_error = std::to_string(failures) + " selfcheck(s) failed";
    return OTT_ERR_CHECK_FAILED;
  }
  return OTT_OK;
}

}  // extern "C"
