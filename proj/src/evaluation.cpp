#include "mapalign/evaluation.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "mapalign/errors.hpp"
#include "mapalign/rng.hpp"

namespace mapalign {

using nlohmann::json;

PlaceMatch place_recognition(const Submap& query, const std::vector<Submap>& database,
                             const AlignParams& params) {
  if (database.empty()) throw std::invalid_argument("place recognition over empty database");
  PlaceMatch best;
  for (int d = 0; d < static_cast<int>(database.size()); ++d) {
    const AlignmentResult r = align_submaps(query, database[d], params);
    if (best.best_idx < 0 || r.count > best.count) {
      best.best_idx = d;
      best.count = r.count;
    }
  }
  return best;
}

std::vector<int> default_tau_sweep(const std::vector<PRRecord>& records) {
  int max_count = 0;
  for (const PRRecord& r : records) max_count = std::max(max_count, r.count);
  std::vector<int> sweep;
  for (int tau = max_count + 1; tau >= 1; --tau) sweep.push_back(tau);
  return sweep;
}

std::pair<std::vector<PRPoint>, double> pr_auc(const std::vector<PRRecord>& records,
                                               const std::vector<int>& tau_sweep) {
  if (records.empty()) throw std::invalid_argument("pr_auc over empty records");
  std::vector<int> sweep = tau_sweep;
  std::sort(sweep.begin(), sweep.end(), std::greater<int>());

  int positives = 0;
  for (const PRRecord& r : records) positives += r.has_positive ? 1 : 0;

  std::vector<PRPoint> points;
  points.reserve(sweep.size() + 1);
  for (int tau : sweep) {
    int tp = 0, fp = 0;
    for (const PRRecord& r : records) {
      if (r.count < tau) continue;
      if (r.correct) ++tp;
      else ++fp;
    }
    PRPoint pt;
    pt.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
    pt.recall = positives == 0 ? 0.0 : static_cast<double>(tp) / positives;
    points.push_back(pt);
  }

  // Anchor at recall zero so the first trapezoid has a left edge.
  std::vector<PRPoint> curve;
  curve.push_back({0.0, points.empty() ? 1.0 : points.front().precision});
  curve.insert(curve.end(), points.begin(), points.end());

  double auc = 0.0;
  for (size_t k = 1; k < curve.size(); ++k) {
    auc += (curve[k].recall - curve[k - 1].recall) *
           (curve[k].precision + curve[k - 1].precision) / 2.0;
  }
  return {curve, auc};
}

bool pose_success(const PoseSE3& t_est, const PoseSE3& t_gt) {
  const auto [trans_err, rot_err] = transform_error(t_est, t_gt);
  return trans_err < 1.0 && rot_err < 5.0;
}

std::string heading_bin(double heading_deg) {
  if (heading_deg <= 60.0) return "0-60";
  if (heading_deg <= 120.0) return "60-120";
  return "120-180";
}

EvalReport run_benchmark(const ScenarioPair& scenario, const Config& cfg) {
  EvalReport report;
  const int ni = static_cast<int>(scenario.submaps_i.size());
  const int nj = static_cast<int>(scenario.submaps_j.size());
  report.n_pairs = ni * nj;
  if (report.n_pairs == 0) return report;

  std::vector<PairRecord> records(report.n_pairs);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int flat = next.fetch_add(1);
      if (flat >= report.n_pairs) return;
      const int mi = flat / nj;
      const int mj = flat % nj;
      const Submap& si = scenario.submaps_i[mi];
      const Submap& sj = scenario.submaps_j[mj];
      const PairGroundTruth& gt = scenario.pairs[flat];

      AlignParams params = cfg.align;
      params.solver.seed = mix_seed(cfg.align.solver.seed, static_cast<std::uint64_t>(flat));
      AlignmentResult res;
      try {
        res = align_submaps(si, sj, params);
      } catch (const InsufficientPointsError&) {
        // degenerate submap for the chosen method; record an empty alignment
      }

      PairRecord rec;
      rec.i_idx = mi;
      rec.j_idx = mj;
      rec.heading_deg = gt.heading_deg;
      rec.bin = heading_bin(gt.heading_deg);
      rec.count = res.count;
      rec.accepted = res.accepted;
      rec.eligible =
          (si.center_world - sj.center_world).norm() <= cfg.eval.overlap_radius &&
          gt.shared_objects >= cfg.eval.min_shared;
      if (res.transform) {
        const auto [te, re] = transform_error(*res.transform, gt.t_mi_mj);
        rec.trans_err_m = te;
        rec.rot_err_deg = re;
        rec.success = res.accepted && pose_success(*res.transform, gt.t_mi_mj);
      }
      rec.wall_time_ms = res.wall_time_s * 1000.0;
      records[flat] = std::move(rec);
    }
  };

  int threads = cfg.eval.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, report.n_pairs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  double wall_sum = 0.0;
  for (PairRecord& rec : records) {
    wall_sum += rec.wall_time_ms;
    if (rec.eligible) {
      ++report.n_eligible;
      BinStats& bin = report.success_by_bin[rec.bin];
      ++bin.n;
      if (rec.success) {
        ++bin.successes;
        report.mean_success += 1.0;
      }
    }
  }
  report.mean_success = report.n_eligible > 0 ? report.mean_success / report.n_eligible : 0.0;
  report.mean_wall_time_ms = wall_sum / report.n_pairs;
  for (const char* name : {"0-60", "60-120", "120-180"}) {
    BinStats& bin = report.success_by_bin[name];  // materialize empty bins too
    bin.rate = bin.n > 0 ? static_cast<double>(bin.successes) / bin.n : 0.0;
  }

  // Retrieval: robot 0's submaps query robot 1's; best match by count.
  std::vector<PRRecord> pr_records;
  pr_records.reserve(ni);
  for (int mi = 0; mi < ni; ++mi) {
    PRRecord pr;
    int best_j = 0;
    for (int mj = 0; mj < nj; ++mj) {
      const PairRecord& rec = records[mi * nj + mj];
      if (mj == 0 || rec.count > pr.count) {
        pr.count = rec.count;
        best_j = mj;
      }
      const bool overlaps = (scenario.submaps_i[mi].center_world -
                             scenario.submaps_j[mj].center_world)
                                .norm() <= cfg.eval.overlap_radius;
      if (overlaps) pr.has_positive = true;
    }
    pr.correct = (scenario.submaps_i[mi].center_world -
                  scenario.submaps_j[best_j].center_world)
                     .norm() <= cfg.eval.overlap_radius;
    pr_records.push_back(pr);
  }
  if (!pr_records.empty()) {
    auto [points, auc] = pr_auc(pr_records, default_tau_sweep(pr_records));
    report.pr_points = std::move(points);
    report.auc = auc;
  }

  if (!cfg.eval.measured_timing) {
    report.mean_wall_time_ms = 0.0;
    for (PairRecord& rec : records) rec.wall_time_ms = 0.0;
  }
  report.per_pair = std::move(records);
  return report;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "pair_id,heading_bin,count,accepted,trans_err_m,rot_err_deg,success,wall_time_ms\n";
  char buf[256];
  for (const PairRecord& rec : report.per_pair) {
    std::snprintf(buf, sizeof(buf), "%d-%d,%s,%d,%d,%.6f,%.6f,%d,%.3f\n", rec.i_idx, rec.j_idx,
                  rec.bin.c_str(), rec.count, rec.accepted ? 1 : 0, rec.trans_err_m,
                  rec.rot_err_deg, rec.success ? 1 : 0, rec.wall_time_ms);
    out += buf;
  }
  return out;
}

std::string report_to_json(const EvalReport& report) {
  json j;
  j["auc"] = report.auc;
  json points = json::array();
  for (const PRPoint& p : report.pr_points) points.push_back({p.recall, p.precision});
  j["pr_points"] = std::move(points);
  json bins;
  for (const auto& [name, bin] : report.success_by_bin) {
    bins[name] = {{"rate", bin.rate}, {"successes", bin.successes}, {"n", bin.n}};
  }
  j["success_by_bin"] = std::move(bins);
  j["mean_success"] = report.mean_success;
  j["n_eligible"] = report.n_eligible;
  j["n_pairs"] = report.n_pairs;
  j["mean_wall_time_ms"] = report.mean_wall_time_ms;
  json per_pair = json::array();
  for (const PairRecord& rec : report.per_pair) {
    per_pair.push_back({{"i", rec.i_idx},
                        {"j", rec.j_idx},
                        {"heading_deg", rec.heading_deg},
                        {"bin", rec.bin},
                        {"count", rec.count},
                        {"accepted", rec.accepted},
                        {"eligible", rec.eligible},
                        {"trans_err_m", rec.trans_err_m},
                        {"rot_err_deg", rec.rot_err_deg},
                        {"success", rec.success},
                        {"wall_time_ms", rec.wall_time_ms}});
  }
  j["per_pair"] = std::move(per_pair);
  return j.dump(2);
}

}  // namespace mapalign
