// Release gate: one scripted check per shipping requirement, each printing a
// single [PASS]/[FAIL] line. Exits nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mapalign/affinity.hpp"
#include "mapalign/evaluation.hpp"
#include "mapalign/geometry.hpp"
#include "mapalign/hungarian.hpp"
#include "mapalign/registration.hpp"
#include "mapalign/rng.hpp"
#include "mapalign/simulator.hpp"
#include "mapalign/solver.hpp"
#include "mapalign/submap_builder.hpp"
#include "mapalign/tracking.hpp"

using namespace mapalign;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
  if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Segment make_segment(const Eigen::Vector3d& c, const Embedding& e,
                     const Eigen::Vector4d& shape) {
  Segment s;
  s.id = 0;
  s.centroid = c;
  s.embedding = e;
  s.shape = shape;
  s.obs_count = 1;
  return s;
}

Segment point_segment(const Eigen::Vector3d& c) {
  Embedding e = Embedding::Zero(2);
  e[0] = 1.0;
  return make_segment(c, e, Eigen::Vector4d::Ones());
}

PoseSE3 random_pose(std::mt19937_64& gen, bool yaw_only) {
  PoseSE3 g;
  if (yaw_only) {
    g.rotation = rot_z(uniform_range(gen, 0.0, 2.0 * kPi));
  } else {
    g.rotation = rot_z(uniform_range(gen, 0.0, 2.0 * kPi)) *
                 rot_y(uniform_range(gen, -1.5, 1.5)) *
                 rot_x(uniform_range(gen, -1.5, 1.5));
  }
  g.translation = {uniform_range(gen, -8.0, 8.0), uniform_range(gen, -8.0, 8.0),
                   uniform_range(gen, -8.0, 8.0)};
  return g;
}

// 1. The iterative solver must track the exhaustive oracle on small random
// problems and recover planted dense blocks exactly, within a time budget.
void criterion_solver_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  SolverOpts opts;
  opts.restarts = 3;
  opts.seed = 7;

  const int trials = 200;
  int near_oracle = 0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 gen(mix_seed(500, static_cast<std::uint64_t>(t)));
    const int n = 4 + uniform_int(gen, 11);  // 4..14
    const AffinityProblem prob =
        random_affinity_problem(n, mix_seed(900, static_cast<std::uint64_t>(t)));
    const SolverResult approx = solve_densest(prob, opts);
    const SolverResult exact = brute_force_densest(prob);
    if (!respects_mask(prob, approx.selected)) continue;
    if (approx.density >= 0.95 * exact.density - 1e-12) ++near_oracle;
  }

  int planted_exact = 0;
  for (int t = 0; t < trials; ++t) {
    const auto [prob, planted] =
        planted_affinity_problem(6, 6, 0.9, mix_seed(901, static_cast<std::uint64_t>(t)));
    const SolverResult res = solve_densest(prob, opts);
    if (res.selected == planted) ++planted_exact;
  }

  const double secs = elapsed_s(t0);
  const bool pass = near_oracle >= 190 && planted_exact == trials && secs < 5.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d/200 within 0.95x oracle, %d/200 planted exact, %.2f s",
                near_oracle, planted_exact, secs);
  report(1, "densest solver tracks the exhaustive oracle", pass, buf);
}

// 2. Closed-form rigid registration must be exact on noiseless point sets.
void criterion_registration_exact() {
  int ok = 0;
  const int trials = 1000;
  double worst_te = 0.0, worst_re_rad = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 gen(mix_seed(600, static_cast<std::uint64_t>(t)));
    const int k = 3 + uniform_int(gen, 38);  // 3..40
    PoseSE3 gt = random_pose(gen, false);
    std::vector<Eigen::Vector3d> b(k), a(k);
    for (int p = 0; p < k; ++p) {
      b[p] = {uniform_range(gen, -10.0, 10.0), uniform_range(gen, -10.0, 10.0),
              uniform_range(gen, -10.0, 10.0)};
      a[p] = gt.apply(b[p]);
    }
    const PoseSE3 est = arun(a, b);
    const double te = (est.translation - gt.translation).norm();
    // quaternion-based angle extraction stays accurate near identity, where
    // the trace formula loses half the significant digits to arccos
    const Eigen::AngleAxisd residual(gt.rotation.transpose() * est.rotation);
    const double re_rad = std::abs(residual.angle());
    worst_te = std::max(worst_te, te);
    worst_re_rad = std::max(worst_re_rad, re_rad);
    if (te < 1e-9 && re_rad < 1e-9) ++ok;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d/%d exact, worst %.2e m / %.2e rad", ok, trials, worst_te,
                worst_re_rad);
  report(2, "closed-form transform recovery is exact on noiseless data", ok == trials, buf);
}

// 3. Frozen scalar golden values, each checked against a value computed
// directly from its defining formula.
void criterion_scalar_goldens() {
  AffinityParams params;

  Embedding e1 = Embedding::Zero(2);
  e1[0] = 1.0;
  Embedding e2 = Embedding::Zero(2);
  e2[0] = 0.9;
  e2[1] = std::sqrt(1.0 - 0.81);
  const Segment sem_a = make_segment({0, 0, 0}, e1, Eigen::Vector4d::Ones());
  const Segment sem_b = make_segment({0, 0, 0}, e2, Eigen::Vector4d::Ones());
  const double sem = semantic_similarity(sem_a, sem_b, params);
  const bool sem_ok = std::abs(sem - 0.5) < 1e-9;

  const Segment sh_a = make_segment({0, 0, 0}, e1, {8.0, 0.5, 0.3, 0.2});
  const Segment sh_b = make_segment({0, 0, 0}, e1, {1.0, 0.5, 0.3, 0.2});
  const double shape = shape_similarity(sh_a, sh_b);
  const double shape_ref = std::pow(0.125, 0.25);
  const bool shape_ok =
      std::abs(shape - shape_ref) < 1e-12 && std::abs(shape - 0.59460) < 1e-5;

  const double gm = fuse(0.60653, 0.9, 0.8, FusionMethod::GeometricMean);
  const double gm_ref = std::cbrt(0.60653 * 0.9 * 0.8);
  const bool gm_ok = std::abs(gm - gm_ref) < 1e-12;

  char buf[160];
  std::snprintf(buf, sizeof(buf), "semantic %.6f, shape %.6f, gm fusion %.8f", sem, shape, gm);
  report(3, "scalar similarity golden values", sem_ok && shape_ok && gm_ok, buf);
}

// 4. Pairwise scores must be invariant to the allowed per-map motions, the
// gravity-aware score must react to a roll, and the recovered transform must
// be equivariant to re-expressing one submap in another frame.
void criterion_invariance() {
  AffinityParams params;
  bool ok = true;
  double worst = 0.0;

  for (int t = 0; t < 30; ++t) {
    std::mt19937_64 gen(mix_seed(700, static_cast<std::uint64_t>(t)));
    const auto rand_seg = [&]() {
      return point_segment({uniform_range(gen, -4.0, 4.0), uniform_range(gen, -4.0, 4.0),
                            uniform_range(gen, -4.0, 4.0)});
    };
    Segment p_i = rand_seg(), q_i = rand_seg(), p_j = rand_seg(), q_j = rand_seg();

    AffinityParams iso = params;
    iso.use_gravity = false;
    const double s0 = pairwise_score(p_i, q_i, p_j, q_j, iso);
    const PoseSE3 gi = random_pose(gen, false), gj = random_pose(gen, false);
    Segment p_i2 = p_i, q_i2 = q_i, p_j2 = p_j, q_j2 = q_j;
    p_i2.centroid = gi.apply(p_i.centroid);
    q_i2.centroid = gi.apply(q_i.centroid);
    p_j2.centroid = gj.apply(p_j.centroid);
    q_j2.centroid = gj.apply(q_j.centroid);
    const double s1 = pairwise_score(p_i2, q_i2, p_j2, q_j2, iso);
    worst = std::max(worst, std::abs(s0 - s1));

    const double g0 = pairwise_score(p_i, q_i, p_j, q_j, params);
    const PoseSE3 yi = random_pose(gen, true), yj = random_pose(gen, true);
    p_i2.centroid = yi.apply(p_i.centroid);
    q_i2.centroid = yi.apply(q_i.centroid);
    p_j2.centroid = yj.apply(p_j.centroid);
    q_j2.centroid = yj.apply(q_j.centroid);
    const double g1 = pairwise_score(p_i2, q_i2, p_j2, q_j2, params);
    worst = std::max(worst, std::abs(g0 - g1));
  }
  ok = ok && worst < 1e-12;

  // a 90 degree roll of one map flips its vertical offsets and must change
  // the gravity-aware score
  const Segment p_i = point_segment({0, 0, 0});
  const Segment q_i = point_segment({1, 0, 1});
  const Segment p_j = point_segment({0, 0, 0});
  Segment q_j = point_segment({1, 0, 1});
  const double before = pairwise_score_gravity(p_i, q_i, p_j, q_j, params);
  q_j.centroid = rot_x(kPi / 2.0) * q_j.centroid;
  const double after = pairwise_score_gravity(p_i, q_i, p_j, q_j, params);
  const bool roll_ok = std::abs(before - after) > 1e-6;

  // re-expressing submap i through a yaw+translation motion must move the
  // recovered transform by exactly that motion
  ScenarioConfig cfg;
  cfg.n_objects = 30;
  cfg.world_extent = {30.0, 30.0, 3.0};
  cfg.centroid_noise_sigma = 0.0;
  cfg.embedding_noise_rad = 0.0;
  cfg.shape_noise = 0.0;
  cfg.seed = 5;
  const ScenarioPair sp = generate_traversal_pair(cfg);
  const size_t mid = sp.submaps_i.size() / 2;
  const AlignParams align_params;
  const AlignmentResult base = align_submaps(sp.submaps_i[mid], sp.submaps_j[mid], align_params);
  bool equi_ok = base.accepted && base.transform.has_value();
  double equi_err = -1.0;
  if (equi_ok) {
    std::mt19937_64 gen(71);
    const PoseSE3 g = random_pose(gen, true);
    Submap moved = sp.submaps_i[mid];
    for (Segment& s : moved.segments) s.centroid = g.apply(s.centroid);
    const AlignmentResult res = align_submaps(moved, sp.submaps_j[mid], align_params);
    equi_ok = res.transform.has_value();
    if (equi_ok) {
      const PoseSE3 want = g * (*base.transform);
      const auto [te, re_deg] = transform_error(*res.transform, want);
      equi_err = std::max(te, deg2rad(re_deg));
      equi_ok = te < 1e-6 && deg2rad(re_deg) < 1e-6;
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "worst motion drift %.2e, roll response %.3f, equivariance %.2e", worst,
                std::abs(before - after), equi_err);
  report(4, "similarity invariances and alignment equivariance", ok && roll_ok && equi_ok, buf);
}

// 5. Opposite-heading synthetic benchmark: high success under noise, clutter
// and dropout, with a bounded single-alignment latency.
void criterion_benchmark() {
  ScenarioConfig base;  // 100 objects in a 40 x 40 m world, cap 40
  base.centroid_noise_sigma = 0.1;
  base.clutter_rate = 0.3;
  base.dropout_rate = 0.2;
  base.heading_offset_deg = 180.0;

  AlignParams params;
  params.putative = PutativeMode::Prune;

  const double overlap_radius = 10.0;
  const int n_seeds = 100;
  std::vector<int> eligible(n_seeds, 0), successes(n_seeds, 0);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int s = next.fetch_add(1);
      if (s >= n_seeds) return;
      ScenarioConfig cfg = base;
      cfg.seed = 1000 + static_cast<std::uint64_t>(s);
      const ScenarioPair sp = generate_traversal_pair(cfg);
      const size_t nj = sp.submaps_j.size();
      for (size_t flat = 0; flat < sp.pairs.size(); ++flat) {
        const PairGroundTruth& gt = sp.pairs[flat];
        const double d = (sp.submaps_i[flat / nj].center_world -
                          sp.submaps_j[flat % nj].center_world)
                             .norm();
        if (d > overlap_radius || gt.shared_objects < 1) continue;
        AlignParams p = params;
        p.solver.seed = mix_seed(cfg.seed, flat);
        const AlignmentResult res =
            align_submaps(sp.submaps_i[flat / nj], sp.submaps_j[flat % nj], p);
        ++eligible[s];
        if (res.accepted && res.transform && pose_success(*res.transform, gt.t_mi_mj)) {
          ++successes[s];
        }
      }
    }
  };
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  const int n_eligible = std::accumulate(eligible.begin(), eligible.end(), 0);
  const int n_success = std::accumulate(successes.begin(), successes.end(), 0);
  const double mean_success =
      n_eligible > 0 ? static_cast<double>(n_success) / n_eligible : 0.0;

  // latency of one alignment at the 40-segment cap
  ScenarioConfig cfg = base;
  cfg.seed = 1000;
  const ScenarioPair sp = generate_traversal_pair(cfg);
  size_t best = 0;
  int best_size = -1;
  for (size_t flat = 0; flat < sp.pairs.size(); ++flat) {
    const size_t nj = sp.submaps_j.size();
    const int size = static_cast<int>(sp.submaps_i[flat / nj].segments.size() +
                                      sp.submaps_j[flat % nj].segments.size());
    if (sp.pairs[flat].shared_objects >= 4 && size > best_size) {
      best_size = size;
      best = flat;
    }
  }
  const size_t nj = sp.submaps_j.size();
  const auto t0 = std::chrono::steady_clock::now();
  const AlignmentResult timed =
      align_submaps(sp.submaps_i[best / nj], sp.submaps_j[best % nj], params);
  const double ms = elapsed_s(t0) * 1000.0;

  const bool pass = mean_success >= 0.90 && ms < 500.0 && timed.count > 0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "mean success %.3f over %d pairs / %d seeds, align %.1f ms",
                mean_success, n_eligible, n_seeds, ms);
  report(5, "opposite-heading benchmark success and latency", pass, buf);
}

// 6. On the vertical mirror scene the gravity-aware score must recover the
// true yaw while the isotropic score picks the flipped registration.
void criterion_mirror() {
  const MirrorScenario ms = make_mirror_scenario();

  AlignParams with_gravity;
  const AlignmentResult good = align_submaps(ms.map_i, ms.map_j, with_gravity);
  bool pass = good.accepted && good.transform.has_value();
  double good_re = 1e9, bad_re = -1.0;
  if (pass) {
    good_re = transform_error(*good.transform, ms.t_mi_mj_true).second;
    pass = good_re < 5.0;
  }

  AlignParams no_gravity = with_gravity;
  no_gravity.affinity.use_gravity = false;
  no_gravity.reject_tilted = false;  // let the flipped hypothesis through
  const AlignmentResult bad = align_submaps(ms.map_i, ms.map_j, no_gravity);
  pass = pass && bad.transform.has_value();
  if (bad.transform) {
    bad_re = transform_error(*bad.transform, ms.t_mi_mj_true).second;
    pass = pass && bad_re > 90.0;
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf), "gravity yaw error %.2f deg, isotropic %.2f deg", good_re,
                bad_re);
  report(6, "vertical mirror disambiguation by gravity scoring", pass, buf);
}

// One noisy observation of an object for the fusion-ordering trials.
Segment decoy_observation(std::mt19937_64& gen, const Eigen::Vector3d& pos, const Embedding& emb,
                          const Eigen::Vector4d& shape, double sigma_c, double emb_noise,
                          std::int64_t id) {
  Segment s;
  s.id = id;
  s.centroid = pos + normal3(gen, sigma_c);
  s.embedding = perturb_unit_vector(gen, emb, emb_noise);
  s.shape = shape;
  for (int d = 0; d < 4; ++d) s.shape[d] *= std::exp(0.1 * normal01(gen));
  s.obs_count = 3;
  return s;
}

// 7. Fusion ablation: the geometric mean must lead the aggregate success.
// Each trial is a yaw-symmetric scene: every object has a mirror partner, and
// most partners reuse the object's class, so matching the scene onto its own
// reflection is geometrically exact and semantically plausible on most edges.
// Only the cross-class partner edges betray it, which rewards fusions that let
// a single zero similarity veto an edge outright.
void criterion_fusion_ordering() {
  const FusionMethod methods[] = {FusionMethod::GeometricMean, FusionMethod::Product,
                                  FusionMethod::ArithmeticMean, FusionMethod::DiagonalOnly};
  const int n_trials = 200;
  const int k_true = 8;
  const int n_same_class = 6;
  const int n_clutter = 8;
  const int n_classes = 10;
  const double sigma_c = 0.15;
  const double emb_noise = 0.15;
  const double mirror_jitter = 0.05;

  std::array<std::atomic<int>, 4> wins = {0, 0, 0, 0};
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= n_trials) return;
      const std::uint64_t trial_seed = mix_seed(4242, static_cast<std::uint64_t>(t));
      std::mt19937_64 gen(trial_seed);

      std::vector<Embedding> protos(n_classes);
      std::vector<Eigen::Vector4d> class_shape(n_classes);
      for (int c = 0; c < n_classes; ++c) {
        Embedding e = Embedding::Zero(16);
        e[c] = 1.0;
        protos[c] = perturb_unit_vector(gen, e, 0.05);
        class_shape[c] = {uniform_range(gen, 0.5, 4.0), uniform_range(gen, 0.1, 0.9),
                          uniform_range(gen, 0.1, 0.9), uniform_range(gen, 0.1, 0.9)};
      }

      std::vector<Eigen::Vector3d> pos;
      std::vector<int> cls;
      while (static_cast<int>(pos.size()) < k_true) {
        const Eigen::Vector3d p{uniform_range(gen, 2.0, 10.0), uniform_range(gen, -8.0, 8.0),
                                uniform_range(gen, 0.0, 2.5)};
        bool clear = true;
        for (const Eigen::Vector3d& q : pos) clear = clear && (p - q).norm() > 2.0;
        if (clear) {
          pos.push_back(p);
          cls.push_back(uniform_int(gen, n_classes));
        }
      }
      const Eigen::Matrix3d flip = rot_z(kPi);
      std::vector<int> order(k_true);
      std::iota(order.begin(), order.end(), 0);
      for (int k = k_true - 1; k > 0; --k) std::swap(order[k], order[uniform_int(gen, k + 1)]);
      std::vector<Eigen::Vector3d> partner_pos(k_true);
      std::vector<int> partner_cls(k_true);
      for (int k = 0; k < k_true; ++k) {
        partner_pos[k] = flip * pos[k] + normal3(gen, mirror_jitter);
        const bool same = std::find(order.begin(), order.begin() + n_same_class, k) !=
                          order.begin() + n_same_class;
        partner_cls[k] =
            same ? cls[k] : (cls[k] + 1 + uniform_int(gen, n_classes - 1)) % n_classes;
      }

      PoseSE3 t_true;
      t_true.rotation = flip;
      Submap mi, mj;
      mi.robot_id = 0;
      mj.robot_id = 1;
      mj.frame_pose = t_true;
      std::mt19937_64 gi(mix_seed(trial_seed, 1));
      std::mt19937_64 gj(mix_seed(trial_seed, 2));
      const auto observe_j = [&](const Eigen::Vector3d& p, const Embedding& e,
                                 const Eigen::Vector4d& sh, std::int64_t id) {
        Segment s = decoy_observation(gj, p, e, sh, sigma_c, emb_noise, id);
        s.centroid = t_true.rotation.transpose() * s.centroid;
        return s;
      };
      for (int k = 0; k < k_true; ++k) {
        mi.segments.push_back(decoy_observation(gi, pos[k], protos[cls[k]], class_shape[cls[k]],
                                                sigma_c, emb_noise, k));
        mi.segments.push_back(decoy_observation(gi, partner_pos[k], protos[partner_cls[k]],
                                                class_shape[partner_cls[k]], sigma_c, emb_noise,
                                                100 + k));
        mj.segments.push_back(observe_j(pos[k], protos[cls[k]], class_shape[cls[k]], k));
        mj.segments.push_back(
            observe_j(partner_pos[k], protos[partner_cls[k]], class_shape[partner_cls[k]],
                      100 + k));
      }
      for (int c = 0; c < n_clutter; ++c) {
        const int cc = c % 2 == 0 ? cls[c % k_true] : uniform_int(gen, n_classes);
        const Eigen::Vector3d pa{uniform_range(gen, -11.0, 11.0), uniform_range(gen, -9.0, 9.0),
                                 uniform_range(gen, 0.0, 2.5)};
        const Eigen::Vector3d pb{uniform_range(gen, -11.0, 11.0), uniform_range(gen, -9.0, 9.0),
                                 uniform_range(gen, 0.0, 2.5)};
        mi.segments.push_back(
            decoy_observation(gi, pa, protos[cc], class_shape[cc], sigma_c, emb_noise, 200 + c));
        mj.segments.push_back(observe_j(pb, protos[cc], class_shape[cc], 300 + c));
      }

      for (int m = 0; m < 4; ++m) {
        AlignParams params;
        params.affinity.fusion = methods[m];
        params.min_inliers = 5;
        params.solver.seed = mix_seed(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m));
        const AlignmentResult res = align_submaps(mi, mj, params);
        if (res.accepted && res.transform && pose_success(*res.transform, t_true)) {
          wins[m].fetch_add(1);
        }
      }
    }
  };
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  const double gm = wins[0] / static_cast<double>(n_trials);
  const double product = wins[1] / static_cast<double>(n_trials);
  const double am = wins[2] / static_cast<double>(n_trials);
  const double diagonal = wins[3] / static_cast<double>(n_trials);
  const bool pass = gm >= product - 0.02 && gm >= am - 0.02 && gm >= diagonal - 0.02 &&
                    gm > product && gm > am && gm > diagonal;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "gm %.3f, product %.3f, am %.3f, diagonal %.3f", gm, product,
                am, diagonal);
  report(7, "geometric-mean fusion leads the fusion ablation", pass, buf);
}

// 8. Tracking building blocks: optimal assignment versus enumeration, unit
// embedding norms through long update/merge chains, merge idempotence.
void criterion_tracking() {
  bool assign_ok = true;
  for (int n = 1; n <= 5 && assign_ok; ++n) {
    for (int t = 0; t < 40 && assign_ok; ++t) {
      std::mt19937_64 gen(mix_seed(800 + n, static_cast<std::uint64_t>(t)));
      Eigen::MatrixXd cost(n, n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) cost(r, c) = uniform_range(gen, -5.0, 5.0);
      }
      const std::vector<int> got = solve_assignment(cost);
      double got_cost = 0.0;
      for (int r = 0; r < n; ++r) got_cost += cost(r, got[r]);
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      double best = 1e18;
      do {
        double c = 0.0;
        for (int r = 0; r < n; ++r) c += cost(r, perm[r]);
        best = std::min(best, c);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (std::abs(got_cost - best) > 1e-9) assign_ok = false;
    }
  }

  std::mt19937_64 gen(808);
  const PoseSE3 camera;
  SegmentTrack track;
  track.voxels = {{0, 0, 0}};
  track.embedding = Embedding::Zero(16);
  track.embedding[0] = 1.0;
  double worst_norm = 0.0;
  bool chain_ok = true;
  for (int t = 0; t < 1000; ++t) {
    if (t % 5 == 4) {
      SegmentTrack buddy;
      buddy.id = 1;
      buddy.voxels = track.voxels;  // full overlap forces a merge
      buddy.embedding = perturb_unit_vector(gen, track.embedding, 0.9);
      buddy.obs_count = 1 + uniform_int(gen, 4);
      const auto merged = merge_tracks({track, buddy}, 0.5, 0.99, camera, 0.2);
      if (merged.size() != 1) {
        chain_ok = false;
        break;
      }
      track = merged[0];
    } else {
      SegmentObservation obs;
      obs.voxels = {{t % 7, 0, 0}};
      obs.embedding = perturb_unit_vector(gen, track.embedding, 1.2);
      update_track(track, obs);
    }
    worst_norm = std::max(worst_norm, std::abs(track.embedding.norm() - 1.0));
  }
  const bool norm_ok = chain_ok && worst_norm < 1e-9;

  std::vector<SegmentTrack> tracks(4);
  for (int k = 0; k < 4; ++k) {
    tracks[k].id = k;
    tracks[k].embedding = Embedding::Zero(16);
    tracks[k].embedding[k] = 1.0;
    for (int v = 0; v < 6; ++v) tracks[k].voxels.insert({10 * (k / 2) + v, v, 0});
  }
  const auto merged = merge_tracks(tracks, 0.5, 0.99, camera, 0.2);
  const auto merged_again = merge_tracks(merged, 0.5, 0.99, camera, 0.2);
  bool merge_ok = merged.size() == 2 && merged_again.size() == merged.size();
  if (merge_ok) {
    for (size_t k = 0; k < merged.size(); ++k) {
      merge_ok = merge_ok && merged[k].id == merged_again[k].id &&
                 merged[k].voxels == merged_again[k].voxels &&
                 merged[k].obs_count == merged_again[k].obs_count;
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf), "assignment %s, worst norm drift %.2e, merge stable %s",
                assign_ok ? "optimal" : "suboptimal", worst_norm, merge_ok ? "yes" : "no");
  report(8, "tracking assignment, embedding norms, merge idempotence", assign_ok && norm_ok && merge_ok,
         buf);
}

// 9. Submap slicing on a straight line: spaced origins, bounded size and
// radius, gravity-aligned frames.
void criterion_submap_policy() {
  const SubmapPolicy policy;
  SubmapBuilder builder(policy, 0);
  std::mt19937_64 gen(99);

  std::vector<Segment> world;
  for (int k = 0; k < 400; ++k) {
    Segment s = point_segment({uniform_range(gen, -20.0, 100.0), uniform_range(gen, -14.0, 14.0),
                               uniform_range(gen, 0.0, 3.0)});
    s.id = k;
    world.push_back(s);
  }

  std::vector<Submap> done;
  PoseSE3 pose;
  for (int step = 0; step <= 40; ++step) {
    pose.translation = {2.0 * step, 0.0, 0.0};
    pose.rotation = rot_z(0.1 * std::sin(step * 0.5)) * rot_y(0.02) * rot_x(-0.015);
    std::vector<Segment> visible;
    for (const Segment& s : world) {
      if ((s.centroid - pose.translation).norm() < policy.radius + 5.0) visible.push_back(s);
    }
    const auto out = builder.step(pose, step == 0 ? 0.0 : 2.0, visible);
    done.insert(done.end(), out.begin(), out.end());
  }
  const auto rest = builder.flush();
  done.insert(done.end(), rest.begin(), rest.end());

  bool pass = done.size() >= 4;
  double min_spacing = 1e9;
  for (size_t k = 1; k < done.size(); ++k) {
    min_spacing = std::min(min_spacing, (done[k].center_world - done[k - 1].center_world).norm());
  }
  pass = pass && min_spacing >= policy.spacing - 1e-9;
  for (const Submap& sm : done) {
    pass = pass && static_cast<int>(sm.segments.size()) <= policy.max_segments;
    pass = pass && is_gravity_aligned(sm.frame_pose, 1e-12);
    for (const Segment& s : sm.segments) {
      pass = pass && s.centroid.norm() <= policy.radius + 1e-9;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu submaps, min spacing %.2f m", done.size(), min_spacing);
  report(9, "submap slicing policy bounds", pass, buf);
}

// 10. Evaluation artifacts must be byte-identical across repeated runs and
// across serial versus parallel pair scheduling.
void criterion_determinism() {
  Config cfg;
  cfg.scenario.n_objects = 40;
  cfg.scenario.world_extent = {30.0, 30.0, 3.0};
  cfg.scenario.clutter_rate = 0.3;
  cfg.scenario.dropout_rate = 0.1;
  cfg.scenario.heading_offset_deg = 60.0;
  cfg.scenario.seed = 77;
  cfg.align.putative = PutativeMode::Prune;

  const ScenarioPair sp = generate_traversal_pair(cfg.scenario);
  Config serial = cfg;
  serial.eval.threads = 1;
  Config parallel = cfg;
  parallel.eval.threads = 8;

  const std::string csv1 = report_to_csv(run_benchmark(sp, serial));
  const std::string csv2 = report_to_csv(run_benchmark(sp, serial));
  const std::string csv3 = report_to_csv(run_benchmark(sp, parallel));
  const std::string json1 = report_to_json(run_benchmark(sp, serial));
  const std::string json3 = report_to_json(run_benchmark(sp, parallel));

  const bool pass = csv1 == csv2 && csv1 == csv3 && json1 == json3 && csv1.size() > 100;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "csv %zu bytes, rerun %s, parallel %s", csv1.size(),
                csv1 == csv2 ? "identical" : "differs", csv1 == csv3 ? "identical" : "differs");
  report(10, "evaluation artifacts are deterministic and thread-invariant", pass, buf);
}

}  // namespace

int main() {
  criterion_solver_oracle();
  criterion_registration_exact();
  criterion_scalar_goldens();
  criterion_invariance();
  criterion_benchmark();
  criterion_mirror();
  criterion_fusion_ordering();
  criterion_tracking();
  criterion_submap_policy();
  criterion_determinism();
  if (g_failures > 0) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
