#include <doctest.h>

#include <json.hpp>

#include "mapalign/config.hpp"

using namespace mapalign;

TEST_SUITE("config") {

TEST_CASE("defaults round-trip through json") {
  const Config defaults;
  const std::string text = config_to_json(defaults);
  const Config parsed = parse_config(text);
  CHECK(config_to_json(parsed) == text);

  const nlohmann::json j = nlohmann::json::parse(text);
  for (const char* section : {"affinity", "solver", "alignment", "scenario", "eval"}) {
    CHECK(j.contains(section));
  }
}

TEST_CASE("partial configs keep defaults elsewhere") {
  const Config cfg = parse_config(R"({
    "affinity": {"sigma": 2.5, "fusion": "product"},
    "eval": {"timing": "measured", "threads": 3}
  })");
  CHECK(cfg.align.affinity.sigma == 2.5);
  CHECK(cfg.align.affinity.fusion == FusionMethod::Product);
  CHECK(cfg.align.affinity.epsilon == AffinityParams{}.epsilon);
  CHECK(cfg.eval.measured_timing);
  CHECK(cfg.eval.threads == 3);
  CHECK(cfg.align.min_inliers == AlignParams{}.min_inliers);
  CHECK(cfg.scenario.n_objects == ScenarioConfig{}.n_objects);
}

TEST_CASE("empty object is a valid config") {
  const Config cfg = parse_config("{}");
  CHECK(config_to_json(cfg) == config_to_json(Config{}));
}

TEST_CASE("acceptance count threshold accepts its short alias") {
  CHECK(parse_config(R"({"alignment": {"tau": 7}})").align.min_inliers == 7);
  CHECK(parse_config(R"({"alignment": {"min_inliers": 9}})").align.min_inliers == 9);
}

TEST_CASE("booleans accept several spellings") {
  CHECK(parse_config(R"({"affinity": {"use_gravity": false}})").align.affinity.use_gravity ==
        false);
  CHECK(parse_config(R"({"affinity": {"use_gravity": 0}})").align.affinity.use_gravity == false);
  CHECK(parse_config(R"({"affinity": {"use_gravity": "true"}})").align.affinity.use_gravity ==
        true);
  CHECK_THROWS_AS(parse_config(R"({"affinity": {"use_gravity": "maybe"}})"),
                  std::invalid_argument);
}

TEST_CASE("malformed configs raise") {
  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"affinity": {"sgima": 1.0}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"affnity": {}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"scenario": {"world_extent": [1, 2]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"eval": {"timing": "fast"}})"), std::invalid_argument);
}

TEST_CASE("missing config file raises") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::runtime_error);
}

TEST_CASE("ablation overrides") {
  Config cfg;
  apply_ablation(cfg, "fusion=product,use_gravity=false,N=60,tau=6,noise=0.25");
  CHECK(cfg.align.affinity.fusion == FusionMethod::Product);
  CHECK(cfg.align.affinity.use_gravity == false);
  CHECK(cfg.scenario.submap_max_segments == 60);
  CHECK(cfg.align.min_inliers == 6);
  CHECK(cfg.scenario.centroid_noise_sigma == 0.25);

  apply_ablation(cfg, "method=binary_topk,putative=prune,seed=99");
  CHECK(cfg.align.method == AlignMethod::BinaryTopK);
  CHECK(cfg.align.putative == PutativeMode::Prune);
  CHECK(cfg.scenario.seed == 99);
}

TEST_CASE("ablation presets set submap policy") {
  Config cfg;
  apply_ablation(cfg, "preset=large");
  CHECK(cfg.scenario.submap_radius == 25.0);
  CHECK(cfg.scenario.submap_max_segments == 60);
  apply_ablation(cfg, "preset=xlarge");
  CHECK(cfg.scenario.submap_radius == 30.0);
  CHECK(cfg.scenario.submap_max_segments == 80);
  apply_ablation(cfg, "preset=base");
  CHECK(cfg.scenario.submap_radius == 15.0);
  CHECK(cfg.scenario.submap_max_segments == 40);
}

TEST_CASE("ablation rejects junk") {
  Config cfg;
  CHECK_THROWS_AS(apply_ablation(cfg, "bogus=1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_ablation(cfg, "sigma"), std::invalid_argument);
  CHECK_THROWS_AS(apply_ablation(cfg, "preset=gigantic"), std::invalid_argument);
  CHECK_THROWS_AS(apply_ablation(cfg, "use_shape=perhaps"), std::invalid_argument);
  // empty entries between commas are tolerated
  apply_ablation(cfg, "sigma=1.5,,epsilon=0.4");
  CHECK(cfg.align.affinity.sigma == 1.5);
  CHECK(cfg.align.affinity.epsilon == 0.4);
}

}  // TEST_SUITE
