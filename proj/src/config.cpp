#include "mapalign/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mapalign {

using nlohmann::json;

namespace {

[[noreturn]] void unknown_key(const std::string& section, const std::string& key) {
  throw std::invalid_argument("unknown config key " + section + "." + key);
}

bool parse_bool(const json& v, const std::string& what) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) return v.get<int>() != 0;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  throw std::invalid_argument("expected boolean for " + what);
}

void parse_affinity(const json& j, AffinityParams& p) {
  for (const auto& [key, v] : j.items()) {
    if (key == "sigma") p.sigma = v.get<double>();
    else if (key == "epsilon") p.epsilon = v.get<double>();
    else if (key == "phi_min") p.phi_min = v.get<double>();
    else if (key == "phi_max") p.phi_max = v.get<double>();
    else if (key == "use_gravity") p.use_gravity = parse_bool(v, key);
    else if (key == "use_semantic") p.use_semantic = parse_bool(v, key);
    else if (key == "use_shape") p.use_shape = parse_bool(v, key);
    else if (key == "fusion") p.fusion = fusion_from_string(v.get<std::string>());
    else if (key == "n_max") p.n_max = v.get<int>();
    else unknown_key("affinity", key);
  }
}

void parse_solver(const json& j, SolverOpts& p) {
  for (const auto& [key, v] : j.items()) {
    if (key == "max_outer") p.max_outer = v.get<int>();
    else if (key == "max_inner") p.max_inner = v.get<int>();
    else if (key == "tol") p.tol = v.get<double>();
    else if (key == "homotopy_init") p.homotopy_init = v.get<double>();
    else if (key == "homotopy_mult") p.homotopy_mult = v.get<double>();
    else if (key == "restarts") p.restarts = v.get<int>();
    else if (key == "seed") p.seed = v.get<std::uint64_t>();
    else unknown_key("solver", key);
  }
}

void parse_alignment(const json& j, AlignParams& p) {
  for (const auto& [key, v] : j.items()) {
    if (key == "method") p.method = align_method_from_string(v.get<std::string>());
    else if (key == "putative") p.putative = putative_mode_from_string(v.get<std::string>());
    else if (key == "prune_threshold") p.prune_threshold = v.get<double>();
    else if (key == "min_inliers" || key == "tau") p.min_inliers = v.get<int>();
    else if (key == "reject_tilted") p.reject_tilted = parse_bool(v, key);
    else if (key == "max_tilt_deg") p.max_tilt_deg = v.get<double>();
    else if (key == "topk") p.topk = v.get<int>();
    else if (key == "ransac_iters") p.ransac_iters = v.get<int>();
    else if (key == "ransac_tol") p.ransac_tol = v.get<double>();
    else unknown_key("alignment", key);
  }
}

void parse_scenario(const json& j, ScenarioConfig& p) {
  for (const auto& [key, v] : j.items()) {
    if (key == "n_objects") p.n_objects = v.get<int>();
    else if (key == "world_extent") {
      if (!v.is_array() || v.size() != 3) {
        throw std::invalid_argument("world_extent must be a 3-array");
      }
      p.world_extent = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
    else if (key == "embedding_dim") p.embedding_dim = v.get<int>();
    else if (key == "n_semantic_classes") p.n_semantic_classes = v.get<int>();
    else if (key == "centroid_noise_sigma") p.centroid_noise_sigma = v.get<double>();
    else if (key == "embedding_noise_rad") p.embedding_noise_rad = v.get<double>();
    else if (key == "dropout_rate") p.dropout_rate = v.get<double>();
    else if (key == "clutter_rate") p.clutter_rate = v.get<double>();
    else if (key == "heading_offset_deg") p.heading_offset_deg = v.get<double>();
    else if (key == "class_spread_rad") p.class_spread_rad = v.get<double>();
    else if (key == "shape_noise") p.shape_noise = v.get<double>();
    else if (key == "traversal_step") p.traversal_step = v.get<double>();
    else if (key == "seed") p.seed = v.get<std::uint64_t>();
    else if (key == "submap_spacing") p.submap_spacing = v.get<double>();
    else if (key == "submap_radius") p.submap_radius = v.get<double>();
    else if (key == "submap_max_segments") p.submap_max_segments = v.get<int>();
    else unknown_key("scenario", key);
  }
}

void parse_eval(const json& j, EvalOpts& p) {
  for (const auto& [key, v] : j.items()) {
    if (key == "overlap_radius") p.overlap_radius = v.get<double>();
    else if (key == "min_shared") p.min_shared = v.get<int>();
    else if (key == "threads") p.threads = v.get<int>();
    else if (key == "timing") {
      const std::string s = v.get<std::string>();
      if (s == "measured") p.measured_timing = true;
      else if (s == "zero") p.measured_timing = false;
      else throw std::invalid_argument("eval.timing must be 'zero' or 'measured'");
    }
    else unknown_key("eval", key);
  }
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");

  Config cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "affinity") parse_affinity(v, cfg.align.affinity);
    else if (key == "solver") parse_solver(v, cfg.align.solver);
    else if (key == "alignment") parse_alignment(v, cfg.align);
    else if (key == "scenario") parse_scenario(v, cfg.scenario);
    else if (key == "eval") parse_eval(v, cfg.eval);
    else unknown_key("<root>", key);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const Config& cfg) {
  json j;
  j["affinity"] = {{"sigma", cfg.align.affinity.sigma},
                   {"epsilon", cfg.align.affinity.epsilon},
                   {"phi_min", cfg.align.affinity.phi_min},
                   {"phi_max", cfg.align.affinity.phi_max},
                   {"use_gravity", cfg.align.affinity.use_gravity},
                   {"use_semantic", cfg.align.affinity.use_semantic},
                   {"use_shape", cfg.align.affinity.use_shape},
                   {"fusion", to_string(cfg.align.affinity.fusion)},
                   {"n_max", cfg.align.affinity.n_max}};
  j["solver"] = {{"max_outer", cfg.align.solver.max_outer},
                 {"max_inner", cfg.align.solver.max_inner},
                 {"tol", cfg.align.solver.tol},
                 {"homotopy_init", cfg.align.solver.homotopy_init},
                 {"homotopy_mult", cfg.align.solver.homotopy_mult},
                 {"restarts", cfg.align.solver.restarts},
                 {"seed", cfg.align.solver.seed}};
  j["alignment"] = {{"method", to_string(cfg.align.method)},
                    {"putative", to_string(cfg.align.putative)},
                    {"prune_threshold", cfg.align.prune_threshold},
                    {"min_inliers", cfg.align.min_inliers},
                    {"reject_tilted", cfg.align.reject_tilted},
                    {"max_tilt_deg", cfg.align.max_tilt_deg},
                    {"topk", cfg.align.topk},
                    {"ransac_iters", cfg.align.ransac_iters},
                    {"ransac_tol", cfg.align.ransac_tol}};
  j["scenario"] = {{"n_objects", cfg.scenario.n_objects},
                   {"world_extent",
                    {cfg.scenario.world_extent.x(), cfg.scenario.world_extent.y(),
                     cfg.scenario.world_extent.z()}},
                   {"embedding_dim", cfg.scenario.embedding_dim},
                   {"n_semantic_classes", cfg.scenario.n_semantic_classes},
                   {"centroid_noise_sigma", cfg.scenario.centroid_noise_sigma},
                   {"embedding_noise_rad", cfg.scenario.embedding_noise_rad},
                   {"dropout_rate", cfg.scenario.dropout_rate},
                   {"clutter_rate", cfg.scenario.clutter_rate},
                   {"heading_offset_deg", cfg.scenario.heading_offset_deg},
                   {"class_spread_rad", cfg.scenario.class_spread_rad},
                   {"shape_noise", cfg.scenario.shape_noise},
                   {"traversal_step", cfg.scenario.traversal_step},
                   {"seed", cfg.scenario.seed},
                   {"submap_spacing", cfg.scenario.submap_spacing},
                   {"submap_radius", cfg.scenario.submap_radius},
                   {"submap_max_segments", cfg.scenario.submap_max_segments}};
  j["eval"] = {{"overlap_radius", cfg.eval.overlap_radius},
               {"min_shared", cfg.eval.min_shared},
               {"threads", cfg.eval.threads},
               {"timing", cfg.eval.measured_timing ? "measured" : "zero"}};
  return j.dump(2);
}

void apply_ablation(Config& cfg, const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("ablation entry must be key=value: " + item);
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    const auto as_double = [&]() { return std::stod(val); };
    const auto as_int = [&]() { return std::stoi(val); };
    const auto as_bool = [&]() {
      if (val == "true" || val == "1") return true;
      if (val == "false" || val == "0") return false;
      throw std::invalid_argument("expected boolean for ablation key " + key);
    };

    if (key == "fusion") cfg.align.affinity.fusion = fusion_from_string(val);
    else if (key == "use_gravity") cfg.align.affinity.use_gravity = as_bool();
    else if (key == "use_semantic") cfg.align.affinity.use_semantic = as_bool();
    else if (key == "use_shape") cfg.align.affinity.use_shape = as_bool();
    else if (key == "sigma") cfg.align.affinity.sigma = as_double();
    else if (key == "epsilon") cfg.align.affinity.epsilon = as_double();
    else if (key == "phi_min") cfg.align.affinity.phi_min = as_double();
    else if (key == "phi_max") cfg.align.affinity.phi_max = as_double();
    else if (key == "method") cfg.align.method = align_method_from_string(val);
    else if (key == "putative") cfg.align.putative = putative_mode_from_string(val);
    else if (key == "prune_threshold") cfg.align.prune_threshold = as_double();
    else if (key == "tau" || key == "min_inliers") cfg.align.min_inliers = as_int();
    else if (key == "reject_tilted") cfg.align.reject_tilted = as_bool();
    else if (key == "topk") cfg.align.topk = as_int();
    else if (key == "ransac_iters") cfg.align.ransac_iters = as_int();
    else if (key == "ransac_tol") cfg.align.ransac_tol = as_double();
    else if (key == "N") cfg.scenario.submap_max_segments = as_int();
    else if (key == "r") cfg.scenario.submap_radius = as_double();
    else if (key == "spacing") cfg.scenario.submap_spacing = as_double();
    else if (key == "preset") {
      if (val == "base") {
        cfg.scenario.submap_radius = 15.0;
        cfg.scenario.submap_max_segments = 40;
      } else if (val == "large") {
        cfg.scenario.submap_radius = 25.0;
        cfg.scenario.submap_max_segments = 60;
      } else if (val == "xlarge") {
        cfg.scenario.submap_radius = 30.0;
        cfg.scenario.submap_max_segments = 80;
      } else {
        throw std::invalid_argument("unknown preset: " + val);
      }
    }
    else if (key == "n_objects") cfg.scenario.n_objects = as_int();
    else if (key == "clutter") cfg.scenario.clutter_rate = as_double();
    else if (key == "dropout") cfg.scenario.dropout_rate = as_double();
    else if (key == "heading") cfg.scenario.heading_offset_deg = as_double();
    else if (key == "noise") cfg.scenario.centroid_noise_sigma = as_double();
    else if (key == "emb_noise") cfg.scenario.embedding_noise_rad = as_double();
    else if (key == "seed") cfg.scenario.seed = static_cast<std::uint64_t>(std::stoull(val));
    else throw std::invalid_argument("unknown ablation key: " + key);
  }
}

}  // namespace mapalign
