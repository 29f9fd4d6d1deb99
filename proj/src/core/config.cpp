#include "core/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ott {

namespace {

double parse_double(const std::string& value, const std::string& key) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::ParseError, "config: bad numeric value for key '" + key + "'");
  }
  return out;
}

int parse_int(const std::string& value, const std::string& key) {
  int out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::ParseError, "config: bad integer value for key '" + key + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "sigma",        "epsilon",       "gamma",
      "sinkhorn_iters", "sinkhorn_tol", "max_age",
      "nms_iou",      "min_conf",      "min_area",
      "min_match_iou", "tau_occ",      "occlusion_max_ratio",
      "margin",       "alpha",         "beta",
      "matcher",      "iou_thresh_eval"};
  return keys;
}

void config_set(Config& config, const std::string& key, const std::string& value) {
  if (key == "sigma") config.sigma = parse_double(value, key);
  else if (key == "epsilon") config.epsilon = parse_double(value, key);
  else if (key == "gamma") config.gamma = parse_double(value, key);
  else if (key == "sinkhorn_iters") config.sinkhorn_iters = parse_int(value, key);
  else if (key == "sinkhorn_tol") config.sinkhorn_tol = parse_double(value, key);
  else if (key == "max_age") config.max_age = parse_int(value, key);
  else if (key == "nms_iou") config.nms_iou = parse_double(value, key);
  else if (key == "min_conf") config.min_conf = parse_double(value, key);
  else if (key == "min_area") config.min_area = parse_double(value, key);
  else if (key == "min_match_iou") config.min_match_iou = parse_double(value, key);
  else if (key == "tau_occ") config.tau_occ = parse_double(value, key);
  else if (key == "occlusion_max_ratio") config.occlusion_max_ratio = parse_double(value, key);
  else if (key == "margin") config.margin = parse_double(value, key);
  else if (key == "alpha") config.alpha = parse_double(value, key);
  else if (key == "beta") config.beta = parse_double(value, key);
  else if (key == "iou_thresh_eval") config.iou_thresh_eval = parse_double(value, key);
  else if (key == "matcher") {
    if (value == "sinkhorn") config.matcher = MatcherMode::Sinkhorn;
    else if (value == "hungarian") config.matcher = MatcherMode::Hungarian;
    else fail(ErrorCode::ParseError, "config: matcher must be 'sinkhorn' or 'hungarian'");
  } else {
    fail(ErrorCode::ParseError, "config: unknown key '" + key + "'");
  }
}

std::string config_get(const Config& config, const std::string& key) {
  if (key == "sigma") return format_double(config.sigma);
  if (key == "epsilon") return format_double(config.epsilon);
  if (key == "gamma") return format_double(config.gamma);
  if (key == "sinkhorn_iters") return std::to_string(config.sinkhorn_iters);
  if (key == "sinkhorn_tol") return format_double(config.sinkhorn_tol);
  if (key == "max_age") return std::to_string(config.max_age);
  if (key == "nms_iou") return format_double(config.nms_iou);
  if (key == "min_conf") return format_double(config.min_conf);
  if (key == "min_area") return format_double(config.min_area);
  if (key == "min_match_iou") return format_double(config.min_match_iou);
  if (key == "tau_occ") return format_double(config.tau_occ);
  if (key == "occlusion_max_ratio") return format_double(config.occlusion_max_ratio);
  if (key == "margin") return format_double(config.margin);
  if (key == "alpha") return format_double(config.alpha);
  if (key == "beta") return format_double(config.beta);
  if (key == "matcher") return config.matcher == MatcherMode::Sinkhorn ? "sinkhorn" : "hungarian";
  if (key == "iou_thresh_eval") return format_double(config.iou_thresh_eval);
  fail(ErrorCode::ParseError, "config: unknown key '" + key + "'");
}

Config parse_config_text(const std::string& text, const std::string& origin) {
  Config config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::ParseError,
           origin + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      config_set(config, key, value);
    } catch (const Error& e) {
      fail(ErrorCode::ParseError,
           origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void save_config(const Config& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "config: cannot write '" + path + "'");
  for (const std::string& key : config_keys()) {
    out << key << "=" << config_get(config, key) << "\n";
  }
  if (!out) fail(ErrorCode::IoError, "config: write failed for '" + path + "'");
}

}  // namespace ott
