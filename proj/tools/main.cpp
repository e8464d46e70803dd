#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "mapalign/config.hpp"
#include "mapalign/evaluation.hpp"
#include "mapalign/io.hpp"
#include "mapalign/registration.hpp"
#include "mapalign/simulator.hpp"
#include "mapalign/solver.hpp"

namespace {

using nlohmann::json;

mapalign::Config load_or_default(const std::string& config_path) {
  if (config_path.empty()) return mapalign::Config{};
  return mapalign::load_config(config_path);
}

json pose_to_json(const mapalign::PoseSE3& p) {
  json r = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) r.push_back(p.rotation(i, k));
  }
  return {{"R", std::move(r)}, {"t", {p.translation.x(), p.translation.y(), p.translation.z()}}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_align(const std::string& file_i, const std::string& file_j, const std::string& config_path,
              const std::string& out_path) {
  const mapalign::Config cfg = load_or_default(config_path);
  const auto submaps_i = mapalign::read_submaps_file(file_i);
  const auto submaps_j = mapalign::read_submaps_file(file_j);

  std::string out;
  for (const mapalign::Submap& si : submaps_i) {
    for (const mapalign::Submap& sj : submaps_j) {
      const mapalign::AlignmentResult res = mapalign::align_submaps(si, sj, cfg.align);
      json line = {{"i", si.submap_idx},
                   {"j", sj.submap_idx},
                   {"count", res.count},
                   {"accepted", res.accepted},
                   {"density", res.solver_density}};
      if (res.transform) {
        line["transform"] = pose_to_json(*res.transform);
        line["robot_transform"] =
            pose_to_json(mapalign::chain_robot_transform(si, sj, *res.transform));
      } else {
        line["transform"] = nullptr;
      }
      out += line.dump();
      out += '\n';
    }
  }
  if (out_path.empty()) {
    std::cout << out;
  } else {
    write_text(out_path, out);
  }
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_prefix) {
  const mapalign::Config cfg = load_or_default(config_path);
  const mapalign::ScenarioPair sp = mapalign::generate_traversal_pair(cfg.scenario);
  mapalign::write_submaps_file(out_prefix + "_robot0.jsonl", sp.submaps_i);
  mapalign::write_submaps_file(out_prefix + "_robot1.jsonl", sp.submaps_j);

  json gt;
  gt["t_o1_o2"] = pose_to_json(sp.t_o1_o2);
  json pairs = json::array();
  for (const mapalign::PairGroundTruth& p : sp.pairs) {
    pairs.push_back({{"i", p.submap_i_idx},
                     {"j", p.submap_j_idx},
                     {"heading_deg", p.heading_deg},
                     {"shared_objects", p.shared_objects},
                     {"t_mi_mj", pose_to_json(p.t_mi_mj)}});
  }
  gt["pairs"] = std::move(pairs);
  write_text(out_prefix + "_gt.json", gt.dump(2));

  std::cout << "wrote " << sp.submaps_i.size() << " + " << sp.submaps_j.size() << " submaps to "
            << out_prefix << "_robot{0,1}.jsonl and ground truth to " << out_prefix
            << "_gt.json\n";
  return 0;
}

int run_evaluate(const std::string& config_path, const std::string& ablate_spec,
                 const std::string& csv_path, const std::string& json_path, int seeds) {
  mapalign::Config cfg = load_or_default(config_path);
  if (!ablate_spec.empty()) mapalign::apply_ablation(cfg, ablate_spec);

  std::string csv;
  json per_seed = json::array();
  double sum_success = 0.0, sum_auc = 0.0;
  std::string last_report_json;
  for (int s = 0; s < seeds; ++s) {
    mapalign::Config run_cfg = cfg;
    run_cfg.scenario.seed = cfg.scenario.seed + static_cast<std::uint64_t>(s);
    const mapalign::ScenarioPair sp = mapalign::generate_traversal_pair(run_cfg.scenario);
    const mapalign::EvalReport report = mapalign::run_benchmark(sp, run_cfg);

    std::string rows = mapalign::report_to_csv(report);
    if (seeds > 1) {
      // prefix pair ids with the seed index to keep rows unique
      std::string prefixed;
      size_t pos = 0, line_end;
      line_end = rows.find('\n');
      if (s == 0) prefixed = rows.substr(0, line_end + 1);
      pos = line_end + 1;
      while ((line_end = rows.find('\n', pos)) != std::string::npos) {
        prefixed += "s" + std::to_string(s) + ":" + rows.substr(pos, line_end - pos + 1);
        pos = line_end + 1;
      }
      csv += prefixed;
    } else {
      csv = std::move(rows);
    }

    sum_success += report.mean_success;
    sum_auc += report.auc;
    per_seed.push_back({{"seed", run_cfg.scenario.seed},
                        {"mean_success", report.mean_success},
                        {"auc", report.auc},
                        {"n_eligible", report.n_eligible}});
    last_report_json = mapalign::report_to_json(report);
  }

  if (!csv_path.empty()) write_text(csv_path, csv);
  if (!json_path.empty()) {
    if (seeds == 1) {
      write_text(json_path, last_report_json);
    } else {
      json agg = {{"seeds", seeds},
                  {"mean_success", sum_success / seeds},
                  {"mean_auc", sum_auc / seeds},
                  {"per_seed", std::move(per_seed)}};
      write_text(json_path, agg.dump(2));
    }
  }
  std::printf("seeds=%d mean_success=%.4f mean_auc=%.4f\n", seeds, sum_success / seeds,
              sum_auc / seeds);
  return 0;
}

int run_oracle_check(int n, int trials, std::uint64_t seed) {
  int ratio_ok = 0;
  int exact = 0;
  double min_ratio = 1.0;
  double sum_ratio = 0.0;
  for (int t = 0; t < trials; ++t) {
    const mapalign::AffinityProblem prob =
        mapalign::random_affinity_problem(n, seed + static_cast<std::uint64_t>(t));
    const mapalign::SolverResult approx = mapalign::solve_densest(prob, {});
    const mapalign::SolverResult oracle = mapalign::brute_force_densest(prob);
    const double ratio = oracle.density > 0.0 ? approx.density / oracle.density : 1.0;
    sum_ratio += ratio;
    min_ratio = std::min(min_ratio, ratio);
    if (ratio >= 0.95) ++ratio_ok;
    if (approx.selected == oracle.selected) ++exact;
  }
  const double frac_ok = static_cast<double>(ratio_ok) / trials;
  std::printf("trials=%d n=%d exact=%d ratio_ok=%.3f mean_ratio=%.4f min_ratio=%.4f\n", trials, n,
              exact, frac_ok, sum_ratio / trials, min_ratio);
  return frac_ok >= 0.95 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse object-map alignment toolkit"};
  app.require_subcommand(1);

  std::string config_path;

  auto* align = app.add_subcommand("align", "align two submap files pairwise");
  std::string file_i, file_j, align_out;
  align->add_option("submaps_i", file_i, "query submaps (JSONL)")->required();
  align->add_option("submaps_j", file_j, "database submaps (JSONL)")->required();
  align->add_option("--config", config_path, "JSON config file");
  align->add_option("--out", align_out, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "generate a two-robot scenario");
  std::string sim_out;
  simulate->add_option("--config", config_path, "JSON config file");
  simulate->add_option("--out", sim_out, "output file prefix")->required();

  auto* evaluate = app.add_subcommand("evaluate", "run the alignment benchmark");
  std::string ablate_spec, csv_path, json_path;
  int seeds = 1;
  evaluate->add_option("--config", config_path, "JSON config file");
  evaluate->add_option("--ablate", ablate_spec, "comma-separated key=value overrides");
  evaluate->add_option("--out-csv", csv_path, "per-pair CSV output path");
  evaluate->add_option("--out-json", json_path, "report JSON output path");
  evaluate->add_option("--seeds", seeds, "number of consecutive scenario seeds")
      ->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-check", "compare solver against exhaustive search");
  int oracle_n = 12, oracle_trials = 200;
  std::uint64_t oracle_seed = 0;
  oracle->add_option("--n", oracle_n, "problem size")->check(CLI::Range(1, 20));
  oracle->add_option("--trials", oracle_trials, "number of random problems")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (align->parsed()) return run_align(file_i, file_j, config_path, align_out);
    if (simulate->parsed()) return run_simulate(config_path, sim_out);
    if (evaluate->parsed()) {
      return run_evaluate(config_path, ablate_spec, csv_path, json_path, seeds);
    }
    if (oracle->parsed()) return run_oracle_check(oracle_n, oracle_trials, oracle_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
