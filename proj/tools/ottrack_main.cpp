// ottrack command line: tracking, pseudo-label generation, occlusion masks,
// evaluation, synthetic scenarios, and the selfcheck battery, all through the
// shared-library C API.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ottrack/ottrack.h"

namespace {

int status_to_exit(ott_status status) {
  switch (status) {
    case OTT_OK: return 0;
    case OTT_ERR_PARSE:
    case OTT_ERR_DIMENSION_MISMATCH: return 2;
    case OTT_ERR_COUNT_MISMATCH: return 3;
    default: return 1;
  }
}

int report_failure(const std::string& what, ott_status status) {
  std::cerr << "ottrack: " << what << " failed (" << ott_status_name(status)
            << "): " << ott_last_error() << "\n";
  return status_to_exit(status);
}

using ConfigPtr = std::unique_ptr<ott_config, decltype(&ott_config_free)>;

// --config file first, then --set overrides in order.
int build_config(ConfigPtr& config, const std::string& config_path,
                 const std::vector<std::string>& overrides) {
  config = ConfigPtr(ott_config_new(), &ott_config_free);
  if (!config) {
    std::cerr << "ottrack: out of memory\n";
    return 1;
  }
  if (!config_path.empty()) {
    const ott_status status = ott_config_load(config.get(), config_path.c_str());
    if (status != OTT_OK) return report_failure("loading config", status);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "ottrack: --set expects key=value, got '" << kv << "'\n";
      return 2;
    }
    const ott_status status = ott_config_set(config.get(), kv.substr(0, eq).c_str(),
                                             kv.substr(eq + 1).c_str());
    if (status != OTT_OK) return report_failure("applying --set " + kv, status);
  }
  return 0;
}

struct BatchJob {
  std::string dets, embs, out;
};

int run_track_batch(const std::string& batch_path, int jobs, const ott_config* config) {
  std::ifstream in(batch_path);
  if (!in) {
    std::cerr << "ottrack: cannot open batch file '" << batch_path << "'\n";
    return 1;
  }
  std::vector<BatchJob> batch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    BatchJob job;
    if (!(fields >> job.dets >> job.embs >> job.out)) {
      std::cerr << "ottrack: " << batch_path << ":" << line_no
                << ": expected 'dets embs out'\n";
      return 2;
    }
    batch.push_back(std::move(job));
  }

  std::vector<ott_status> results(batch.size(), OTT_OK);
  std::vector<std::string> messages(batch.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= batch.size()) return;
      const BatchJob& job = batch[idx];
      const ott_status status =
          ott_run_track(job.dets.c_str(), job.embs.c_str(), config, job.out.c_str());
      results[idx] = status;
      if (status != OTT_OK) messages[idx] = ott_last_error();
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, int(batch.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  int exit_code = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (results[i] == OTT_OK) {
      std::cout << batch[i].dets << " -> " << batch[i].out << "\n";
    } else {
      std::cerr << "ottrack: sequence '" << batch[i].dets << "' failed ("
                << ott_status_name(results[i]) << "): " << messages[i] << "\n";
      exit_code = std::max(exit_code, status_to_exit(results[i]));
    }
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-object tracking association engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key=value config file")->envname("OTTRACK_CONFIG");
  app.add_option("--set", overrides, "override one config key (key=value), repeatable");

  // track
  auto* track = app.add_subcommand("track", "associate detections into tracks");
  std::string dets, embs, out, batch;
  int jobs = 1;
  track->add_option("--dets", dets, "detection file");
  track->add_option("--embs", embs, "embedding file");
  track->add_option("--out", out, "output track file");
  track->add_option("--batch", batch, "file of 'dets embs out' lines, one sequence each");
  track->add_option("--jobs", jobs, "parallel sequences for --batch")->default_val(1);

  // pseudolabel
  auto* pseudo = app.add_subcommand("pseudolabel", "motion-aligned association labels");
  std::string ref, tgt, motion, labels_out, report_out, occl_ref, occl_tgt;
  pseudo->add_option("--ref", ref, "reference-frame detection file")->required();
  pseudo->add_option("--tgt", tgt, "target-frame detection file")->required();
  pseudo->add_option("--motion", motion, "motion grid file (flow or disparity)")->required();
  pseudo->add_option("--out", labels_out, "output label file")->required();
  pseudo->add_option("--report", report_out, "sidecar discard-statistics report");
  pseudo->add_option("--occl-ref", occl_ref, "occlusion-mask grid for the reference view");
  pseudo->add_option("--occl-tgt", occl_tgt, "occlusion-mask grid for the target view");

  // occlusion
  auto* occl = app.add_subcommand("occlusion", "stereo-consistency occlusion masks");
  std::string left, right, out_left, out_right;
  occl->add_option("--left", left, "left-view disparity grid")->required();
  occl->add_option("--right", right, "right-view disparity grid")->required();
  occl->add_option("--out-left", out_left, "output left-view mask grid")->required();
  occl->add_option("--out-right", out_right, "output right-view mask grid")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "association metrics against ground truth");
  std::string pred, gt, eval_report;
  eval->add_option("--pred", pred, "predicted track file")->required();
  eval->add_option("--gt", gt, "ground-truth track file")->required();
  eval->add_option("--out", eval_report, "metric report file");

  // synth
  auto* synth = app.add_subcommand("synth", "emit a synthetic scenario");
  std::string out_dir;
  uint64_t seed = 1;
  ott_synth_params params;
  ott_synth_params_init(&params);
  bool staggered = false, allow_overlap = false, stereo = false;
  synth->add_option("--out-dir", out_dir, "output directory")->required();
  synth->add_option("--seed", seed, "scenario seed")->default_val(1);
  synth->add_option("--objects", params.objects)->default_val(params.objects);
  synth->add_option("--frames", params.frames)->default_val(params.frames);
  synth->add_option("--dim", params.dim, "embedding dimension")->default_val(params.dim);
  synth->add_option("--separation", params.separation)->default_val(params.separation);
  synth->add_option("--noise", params.noise_sigma, "embedding noise sigma")
      ->default_val(params.noise_sigma);
  synth->add_option("--width", params.image_width)->default_val(params.image_width);
  synth->add_option("--height", params.image_height)->default_val(params.image_height);
  synth->add_option("--occlusion-gap", params.occlusion_gap,
                    "frames of per-object invisibility")
      ->default_val(params.occlusion_gap);
  synth->add_flag("--staggered", staggered, "objects enter and exit at staggered frames");
  synth->add_flag("--allow-overlap", allow_overlap, "free 2D motion with crossings");
  synth->add_option("--pair-a", params.pair_a, "reference frame of the emitted pair")
      ->default_val(params.pair_a);
  synth->add_option("--pair-b", params.pair_b, "target frame of the emitted pair")
      ->default_val(params.pair_b);
  synth->add_flag("--stereo", stereo, "also emit a consistent disparity pair");

  // selfcheck
  app.add_subcommand("selfcheck", "run the oracle battery");

  CLI11_PARSE(app, argc, argv);

  ConfigPtr config(nullptr, &ott_config_free);
  if (const int rc = build_config(config, config_path, overrides); rc != 0) return rc;

  if (track->parsed()) {
    if (!batch.empty()) return run_track_batch(batch, jobs, config.get());
    if (dets.empty() || embs.empty() || out.empty()) {
      std::cerr << "ottrack: track needs --dets, --embs, --out (or --batch)\n";
      return 1;
    }
    const ott_status status =
        ott_run_track(dets.c_str(), embs.c_str(), config.get(), out.c_str());
    if (status != OTT_OK) return report_failure("track", status);
    return 0;
  }

  if (pseudo->parsed()) {
    const ott_status status = ott_run_pseudolabel(
        ref.c_str(), tgt.c_str(), motion.c_str(), config.get(), labels_out.c_str(),
        report_out.empty() ? nullptr : report_out.c_str(),
        occl_ref.empty() ? nullptr : occl_ref.c_str(),
        occl_tgt.empty() ? nullptr : occl_tgt.c_str());
    if (status != OTT_OK) return report_failure("pseudolabel", status);
    return 0;
  }

  if (occl->parsed()) {
    const ott_status status = ott_run_occlusion(left.c_str(), right.c_str(), config.get(),
                                                out_left.c_str(), out_right.c_str());
    if (status != OTT_OK) return report_failure("occlusion", status);
    return 0;
  }

  if (eval->parsed()) {
    ott_metrics metrics{};
    const ott_status status =
        ott_run_eval(pred.c_str(), gt.c_str(), config.get(),
                     eval_report.empty() ? nullptr : eval_report.c_str(), &metrics);
    if (status != OTT_OK) return report_failure("eval", status);
    std::printf("idf1=%.6f\n", metrics.idf1);
    std::printf("id_switches=%llu\n", (unsigned long long)metrics.id_switches);
    std::printf("assoc_precision=%.6f\n", metrics.assoc_precision);
    std::printf("assoc_recall=%.6f\n", metrics.assoc_recall);
    std::printf("tp=%llu\nfp=%llu\nfn=%llu\n", (unsigned long long)metrics.tp,
                (unsigned long long)metrics.fp, (unsigned long long)metrics.fn);
    return 0;
  }

  if (synth->parsed()) {
    params.staggered_entry = staggered ? 1 : 0;
    params.allow_overlap = allow_overlap ? 1 : 0;
    params.stereo = stereo ? 1 : 0;
    const ott_status status = ott_run_synth(out_dir.c_str(), seed, &params);
    if (status != OTT_OK) return report_failure("synth", status);
    return 0;
  }

  // selfcheck
  int32_t failures = 0;
  const ott_status status = ott_run_selfcheck(1, &failures);
  if (status == OTT_OK) {
    std::printf("all checks passed\n");
    return 0;
  }
  if (status == OTT_ERR_CHECK_FAILED) {
    std::printf("%d check(s) failed\n", failures);
    return 1;
  }
  return report_failure("selfcheck", status);
}
