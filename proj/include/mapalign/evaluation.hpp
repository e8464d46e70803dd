#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mapalign/config.hpp"
#include "mapalign/registration.hpp"
#include "mapalign/simulator.hpp"

namespace mapalign {

struct PlaceMatch {
  int best_idx = -1;  // index into the database
  int count = 0;      // associations found against the returned submap
};

/// Aligns the query against every database submap and returns the one with the
/// most associations (ties: lowest index). Throws std::invalid_argument for an
/// empty database.
PlaceMatch place_recognition(const Submap& query, const std::vector<Submap>& database,
                             const AlignParams& params);

struct PRRecord {
  int count = 0;             // associations against the retrieved submap
  bool correct = false;      // retrieved submap truly overlaps the query
  bool has_positive = false; // some database submap truly overlaps the query
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
};

/// Precision-recall over a descending sweep of the acceptance threshold tau.
/// A threshold admitting no predictions scores precision 1. The curve is
/// anchored at recall 0 and integrated with the trapezoid rule in sweep order.
/// Throws std::invalid_argument when records is empty.
std::pair<std::vector<PRPoint>, double> pr_auc(const std::vector<PRRecord>& records,
                                               const std::vector<int>& tau_sweep);

/// Integer thresholds from max(count) + 1 down to 1.
std::vector<int> default_tau_sweep(const std::vector<PRRecord>& records);

/// Strictly less than 1 m translation and 5 deg rotation error.
bool pose_success(const PoseSE3& t_est, const PoseSE3& t_gt);

/// "0-60" for headings <= 60, "60-120" for <= 120, else "120-180".
std::string heading_bin(double heading_deg);

struct PairRecord {
  int i_idx = 0;
  int j_idx = 0;
  double heading_deg = 0.0;  // ground truth
  std::string bin;
  int count = 0;
  bool accepted = false;
  bool eligible = false;  // overlapping and sharing objects; used for pose metrics
  bool success = false;
  double trans_err_m = -1.0;  // -1 when no transform was recovered
  double rot_err_deg = -1.0;
  double wall_time_ms = 0.0;
};

struct BinStats {
  double rate = 0.0;
  int successes = 0;
  int n = 0;
};

struct EvalReport {
  std::vector<PRPoint> pr_points;
  double auc = 0.0;
  std::map<std::string, BinStats> success_by_bin;
  double mean_success = 0.0;
  int n_eligible = 0;
  int n_pairs = 0;
  double mean_wall_time_ms = 0.0;
  std::vector<PairRecord> per_pair;  // sorted by (i_idx, j_idx)
};

/// Aligns every cross-robot submap pair of the scenario (in parallel across
/// pairs), computes pose metrics over pairs that overlap within
/// eval.overlap_radius and share at least eval.min_shared objects, and builds
/// the retrieval precision-recall curve with robot 0's submaps as queries.
/// The aggregate is independent of the thread count. Unless
/// eval.measured_timing is set, all wall times in the report are zero.
EvalReport run_benchmark(const ScenarioPair& scenario, const Config& cfg);

/// One row per pair: pair_id, heading_bin, count, accepted, trans_err_m,
/// rot_err_deg, success, wall_time_ms. Fixed-precision formatting.
std::string report_to_csv(const EvalReport& report);

std::string report_to_json(const EvalReport& report);

}  // namespace mapalign
