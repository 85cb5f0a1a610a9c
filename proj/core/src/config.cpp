#include "walip/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "walip/error.hpp"

namespace walip {

using nlohmann::json;

std::string_view to_string(QuantileSchedule mode) noexcept {
  return mode == QuantileSchedule::Adaptive ? "adaptive" : "discrete";
}

std::string_view to_string(ProcrustesKind kind) noexcept {
  return kind == ProcrustesKind::Robust ? "robust" : "standard";
}

QuantileSchedule parse_quantile_schedule(std::string_view text) {
  if (text == "adaptive") return QuantileSchedule::Adaptive;
  if (text == "discrete") return QuantileSchedule::Discrete;
  throw ConfigError("quantile_schedule_mode must be 'adaptive' or 'discrete', got '" +
                    std::string(text) + "'");
}

ProcrustesKind parse_procrustes_kind(std::string_view text) {
  if (text == "robust") return ProcrustesKind::Robust;
  if (text == "standard") return ProcrustesKind::Standard;
  throw ConfigError("procrustes must be 'robust' or 'standard', got '" + std::string(text) + "'");
}

namespace {

std::size_t positive_int(const json& v, const char* key, bool allow_zero = false) {
  if (!v.is_number_integer() || v.get<long long>() < (allow_zero ? 0 : 1)) {
    throw ConfigError(std::string(key) + (allow_zero ? " must be a non-negative integer"
                                                     : " must be a positive integer"));
  }
  return v.get<std::size_t>();
}

double real(const json& v, const char* key) {
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return v.get<double>();
}

}  // namespace

PipelineConfig config_from_json(std::string_view text, const PipelineConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig cfg = base;
  for (const auto& [key, v] : doc.items()) {
    if (key == "csls_k") {
      cfg.csls_k = positive_int(v, "csls_k");
    } else if (key == "align_steps") {
      cfg.align_steps = positive_int(v, "align_steps", true);
    } else if (key == "init_quantile") {
      cfg.init_quantile = real(v, "init_quantile");
    } else if (key == "robust_iters") {
      cfg.robust_iters = positive_int(v, "robust_iters");
    } else if (key == "robust_eps") {
      cfg.robust_eps = real(v, "robust_eps");
    } else if (key == "candidate_schedule") {
      if (!v.is_array()) throw ConfigError("candidate_schedule must be an array of integers");
      cfg.candidate_schedule.clear();
      for (const auto& e : v) cfg.candidate_schedule.push_back(positive_int(e, "candidate_schedule"));
    } else if (key == "quantile_schedule_mode") {
      if (!v.is_string()) throw ConfigError("quantile_schedule_mode must be a string");
      cfg.quantile_schedule_mode = parse_quantile_schedule(v.get<std::string>());
    } else if (key == "convergence_tol") {
      cfg.convergence_tol = real(v, "convergence_tol");
    } else if (key == "normalize_embeddings") {
      if (!v.is_boolean()) throw ConfigError("normalize_embeddings must be a boolean");
      cfg.normalize_embeddings = v.get<bool>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "procrustes") {
      if (!v.is_string()) throw ConfigError("procrustes must be a string");
      cfg.procrustes = parse_procrustes_kind(v.get<std::string>());
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

std::string config_to_json(const PipelineConfig& cfg) {
  json doc{
      {"csls_k", cfg.csls_k},
      {"align_steps", cfg.align_steps},
      {"init_quantile", cfg.init_quantile},
      {"robust_iters", cfg.robust_iters},
      {"robust_eps", cfg.robust_eps},
      {"candidate_schedule", cfg.candidate_schedule},
      {"quantile_schedule_mode", to_string(cfg.quantile_schedule_mode)},
      {"convergence_tol", cfg.convergence_tol},
      {"normalize_embeddings", cfg.normalize_embeddings},
      {"seed", cfg.seed},
      {"procrustes", to_string(cfg.procrustes)},
  };
  return doc.dump(2);
}

}  // namespace walip
