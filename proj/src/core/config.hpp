#pragma once

#include <string>
#include <vector>

#include "core/error.hpp"

namespace ott {

enum class MatcherMode { Sinkhorn, Hungarian };

/// Every tunable threshold of the engine, loadable from a flat key=value
/// file. Unknown keys are rejected.
struct Config {
  double sigma = 0.7;
  double epsilon = 0.1;
  double gamma = 0.5;
  int sinkhorn_iters = 100;
  double sinkhorn_tol = 1e-9;
  int max_age = 10;
  double nms_iou = 0.3;
  double min_conf = 0.9;
  double min_area = 100.0;
  double min_match_iou = 0.1;
  double tau_occ = 1.0;
  double occlusion_max_ratio = 0.5;
  double margin = 0.3;
  double alpha = 1.0;
  double beta = 0.5;
  MatcherMode matcher = MatcherMode::Sinkhorn;
  double iou_thresh_eval = 0.5;
};

/// Set one key from its text form; throws ParseError on an unknown key or an
/// unparseable value.
void config_set(Config& config, const std::string& key, const std::string& value);

/// Text form of one key's current value.
std::string config_get(const Config& config, const std::string& key);

const std::vector<std::string>& config_keys();

Config load_config(const std::string& path);
Config parse_config_text(const std::string& text, const std::string& origin);
void save_config(const Config& config, const std::string& path);

}  // namespace ott
