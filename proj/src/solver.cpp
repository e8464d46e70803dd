#include "mapalign/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mapalign/errors.hpp"
#include "mapalign/registration.hpp"
#include "mapalign/rng.hpp"

namespace mapalign {

bool AffinityProblem::is_masked(int p, int q) const {
  if (p == q) return false;
  if (p > q) std::swap(p, q);
  return std::binary_search(zero_mask.begin(), zero_mask.end(), std::make_pair(p, q));
}

double subset_density(const Eigen::MatrixXd& m, const std::vector<int>& selected) {
  if (selected.empty()) return 0.0;
  double sum = 0.0;
  for (size_t a = 0; a < selected.size(); ++a) {
    sum += m(selected[a], selected[a]);
    for (size_t b = a + 1; b < selected.size(); ++b) {
      sum += 2.0 * m(selected[a], selected[b]);
    }
  }
  return sum / static_cast<double>(selected.size());
}

bool respects_mask(const AffinityProblem& prob, const std::vector<int>& selected) {
  for (size_t a = 0; a < selected.size(); ++a) {
    for (size_t b = a + 1; b < selected.size(); ++b) {
      if (prob.is_masked(selected[a], selected[b])) return false;
    }
  }
  return true;
}

namespace {

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("affinity matrix must be square");
  for (int p = 0; p < m.rows(); ++p) {
    for (int q = p + 1; q < m.cols(); ++q) {
      if (std::abs(m(p, q) - m(q, p)) > 1e-12) {
        throw std::invalid_argument("affinity matrix must be symmetric");
      }
    }
  }
}

// Ascends u^T Mp u over the nonnegative unit sphere by projected gradient
// steps with backtracking. Returns the number of iterations spent.
int ascend(const Eigen::MatrixXd& mp, Eigen::VectorXd& u, int max_inner, double tol) {
  const int n = static_cast<int>(u.size());
  double alpha0 = 0.0;
  for (int p = 0; p < n; ++p) alpha0 = std::max(alpha0, mp.row(p).cwiseAbs().sum());
  alpha0 = alpha0 > 0.0 ? 1.0 / alpha0 : 1.0;
  double alpha = alpha0;

  Eigen::VectorXd g = mp * u;
  double value = u.dot(g);
  int iters = 0;
  for (; iters < max_inner; ++iters) {
    Eigen::VectorXd v = (u + alpha * g).cwiseMax(0.0);
    const double nrm = v.norm();
    if (nrm < 1e-300) {
      alpha *= 0.5;
      if (alpha < 1e-14 * alpha0) break;
      continue;
    }
    v /= nrm;
    Eigen::VectorXd gv = mp * v;
    const double trial = v.dot(gv);
    if (trial >= value) {
      const double moved = (v - u).norm();
      u = std::move(v);
      g = std::move(gv);
      value = trial;
      if (moved < tol) break;
      alpha = std::min(alpha * 1.5, 1e6 * alpha0);
    } else {
      alpha *= 0.5;
      if (alpha < 1e-14 * alpha0) break;
    }
  }
  return iters;
}

bool support_feasible(const AffinityProblem& prob, const Eigen::VectorXd& u) {
  const double thresh = 1e-6 * u.maxCoeff();
  for (const auto& [p, q] : prob.zero_mask) {
    if (u[p] > thresh && u[q] > thresh) return false;
  }
  return true;
}

// Sorts nodes by relaxed weight and keeps the densest feasible prefix,
// measured with the original (unpenalized) affinities.
std::vector<int> round_solution(const AffinityProblem& prob, const Eigen::VectorXd& u) {
  const int n = prob.n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (u[a] != u[b]) return u[a] > u[b];
    return a < b;
  });

  std::vector<std::vector<int>> masked_adj(n);
  for (const auto& [p, q] : prob.zero_mask) {
    masked_adj[p].push_back(q);
    masked_adj[q].push_back(p);
  }

  std::vector<char> in_sel(n, 0);
  std::vector<int> prefix;
  double sum = 0.0;
  double best_density = -1.0;
  size_t best_k = 0;
  for (int node : order) {
    bool violates = false;
    for (int nb : masked_adj[node]) {
      if (in_sel[nb]) {
        violates = true;
        break;
      }
    }
    if (violates) break;
    double cross = 0.0;
    for (int s : prefix) cross += prob.M(node, s);
    sum += prob.M(node, node) + 2.0 * cross;
    prefix.push_back(node);
    in_sel[node] = 1;
    const double density = sum / static_cast<double>(prefix.size());
    if (density > best_density || (density == best_density && prefix.size() > best_k)) {
      best_density = density;
      best_k = prefix.size();
    }
  }
  prefix.resize(best_k);
  std::sort(prefix.begin(), prefix.end());
  return prefix;
}

// Deterministic comparison between candidate solutions: higher density, then
// more associations, then lexicographically smaller index set.
bool better_than(double density_a, const std::vector<int>& a, double density_b,
                 const std::vector<int>& b) {
  if (density_a != density_b) return density_a > density_b;
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

}  // namespace

SolverResult solve_densest(const AffinityProblem& prob, const SolverOpts& opts) {
  check_symmetric(prob.M);
  const auto start = std::chrono::steady_clock::now();
  const int n = prob.n;

  SolverResult best;
  best.density = -1.0;
  int total_iters = 0;

  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd u(n);
    if (r == 0) {
      u.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    } else {
      std::mt19937_64 gen(mix_seed(opts.seed, static_cast<std::uint64_t>(r)));
      for (int p = 0; p < n; ++p) u[p] = 0.1 + uniform01(gen);
      u /= u.norm();
    }

    // Penalized matrix: masked entries carry -d, everything else the original
    // affinity. d grows geometrically until the solution support is feasible.
    Eigen::MatrixXd mp = prob.M;
    double d = 0.0;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
      total_iters += ascend(mp, u, opts.max_inner, opts.tol);
      if (support_feasible(prob, u)) break;
      d = d == 0.0 ? opts.homotopy_init : d * opts.homotopy_mult;
      for (const auto& [p, q] : prob.zero_mask) {
        mp(p, q) = -d;
        mp(q, p) = -d;
      }
    }

    std::vector<int> selected = round_solution(prob, u);
    const double density = subset_density(prob.M, selected);
    if (better_than(density, selected, best.density, best.selected)) {
      best.selected = std::move(selected);
      best.density = density;
    }
  }

  best.iterations = total_iters;
  best.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

namespace {

struct BruteState {
  const AffinityProblem* prob;
  std::vector<int> current;
  double sum = 0.0;
  std::vector<int> best;
  double best_density = -1.0;
};

void brute_recurse(BruteState& st, int start) {
  const int n = st.prob->n;
  for (int v = start; v < n; ++v) {
    bool ok = true;
    for (int s : st.current) {
      if (st.prob->is_masked(s, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double cross = 0.0;
    for (int s : st.current) cross += st.prob->M(s, v);
    const double prev = st.sum;
    st.sum += st.prob->M(v, v) + 2.0 * cross;
    st.current.push_back(v);
    const double density = st.sum / static_cast<double>(st.current.size());
    // Preorder enumeration visits index sets in lexicographic order, so the
    // first candidate at a given (density, cardinality) is the lex-smallest.
    if (density > st.best_density ||
        (density == st.best_density && st.current.size() > st.best.size())) {
      st.best_density = density;
      st.best = st.current;
    }
    brute_recurse(st, v + 1);
    st.current.pop_back();
    st.sum = prev;
  }
}

}  // namespace

SolverResult brute_force_densest(const AffinityProblem& prob) {
  check_symmetric(prob.M);
  if (prob.n > 20) throw ProblemTooLargeError("brute force limited to 20 nodes, got " +
                                              std::to_string(prob.n));
  const auto start = std::chrono::steady_clock::now();
  BruteState st;
  st.prob = &prob;
  brute_recurse(st, 0);
  SolverResult result;
  result.selected = std::move(st.best);
  result.density = std::max(st.best_density, 0.0);
  result.iterations = 0;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

PutativeSolve solve_binary_topk(const Submap& submap_i, const Submap& submap_j, int k,
                                const AffinityParams& params, const SolverOpts& opts) {
  PutativeSolve out;
  const int mi = static_cast<int>(submap_i.segments.size());
  const int mj = static_cast<int>(submap_j.segments.size());
  if (mi == 0 || mj == 0 || k <= 0) return out;

  for (int a = 0; a < mi; ++a) {
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(mj);
    for (int b = 0; b < mj; ++b) {
      ranked.emplace_back(segment_similarity(submap_i.segments[a], submap_j.segments[b], params),
                          b);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return x.second < y.second;
    });
    const int keep = std::min(k, mj);
    for (int r = 0; r < keep; ++r) out.putative.push_back({a, ranked[r].second});
  }

  const int n = static_cast<int>(out.putative.size());
  AffinityProblem prob;
  prob.n = n;
  prob.M = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p) prob.M(p, p) = 1.0;
  for (int p = 0; p < n; ++p) {
    const auto& ap = out.putative[p];
    for (int q = p + 1; q < n; ++q) {
      const auto& aq = out.putative[q];
      if (ap.i_idx == aq.i_idx || ap.j_idx == aq.j_idx) {
        prob.zero_mask.emplace_back(p, q);
        continue;
      }
      const double di = (submap_i.segments[ap.i_idx].centroid - submap_i.segments[aq.i_idx].centroid).norm();
      const double dj = (submap_j.segments[ap.j_idx].centroid - submap_j.segments[aq.j_idx].centroid).norm();
      if (std::abs(di - dj) > params.epsilon) {
        prob.zero_mask.emplace_back(p, q);
      } else {
        prob.M(p, q) = 1.0;
        prob.M(q, p) = 1.0;
      }
    }
  }
  std::sort(prob.zero_mask.begin(), prob.zero_mask.end());
  out.result = solve_densest(prob, opts);
  return out;
}

PutativeSolve solve_ransac(const Submap& submap_i, const Submap& submap_j, int iters,
                           double inlier_tol, const SolverOpts& opts) {
  const int mi = static_cast<int>(submap_i.segments.size());
  const int mj = static_cast<int>(submap_j.segments.size());
  if (mi < 3 || mj < 3) {
    throw InsufficientPointsError("ransac needs at least 3 segments per submap, got " +
                                  std::to_string(mi) + " and " + std::to_string(mj));
  }

  PutativeSolve out;
  out.putative.reserve(static_cast<size_t>(mi) * mj);
  for (int a = 0; a < mi; ++a) {
    for (int b = 0; b < mj; ++b) out.putative.push_back({a, b});
  }
  const int n = static_cast<int>(out.putative.size());

  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(opts.seed);
  std::vector<int> best;
  for (int it = 0; it < iters; ++it) {
    int s0 = uniform_int(gen, n);
    int s1 = uniform_int(gen, n);
    int s2 = uniform_int(gen, n);
    if (s0 == s1 || s0 == s2 || s1 == s2) continue;
    const auto& a0 = out.putative[s0];
    const auto& a1 = out.putative[s1];
    const auto& a2 = out.putative[s2];
    if (a0.i_idx == a1.i_idx || a0.i_idx == a2.i_idx || a1.i_idx == a2.i_idx) continue;
    if (a0.j_idx == a1.j_idx || a0.j_idx == a2.j_idx || a1.j_idx == a2.j_idx) continue;

    std::vector<Eigen::Vector3d> pa = {submap_i.segments[a0.i_idx].centroid,
                                       submap_i.segments[a1.i_idx].centroid,
                                       submap_i.segments[a2.i_idx].centroid};
    std::vector<Eigen::Vector3d> pb = {submap_j.segments[a0.j_idx].centroid,
                                       submap_j.segments[a1.j_idx].centroid,
                                       submap_j.segments[a2.j_idx].centroid};
    PoseSE3 t;
    try {
      t = arun(pa, pb);
    } catch (const DegenerateGeometryError&) {
      continue;
    }

    std::vector<int> inliers;
    for (int p = 0; p < n; ++p) {
      const auto& ap = out.putative[p];
      const Eigen::Vector3d mapped = t.apply(submap_j.segments[ap.j_idx].centroid);
      if ((submap_i.segments[ap.i_idx].centroid - mapped).norm() <= inlier_tol) {
        inliers.push_back(p);
      }
    }
    if (inliers.size() > best.size()) best = std::move(inliers);
  }

  out.result.selected = std::move(best);
  out.result.density = static_cast<double>(out.result.selected.size());
  out.result.iterations = iters;
  out.result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace mapalign
