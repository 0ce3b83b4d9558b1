#include "augward/fgw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augward/errors.hpp"
#include "augward/rng.hpp"

namespace augward {

namespace {

// C(n,m) = A(n,k) * B(k,m), overwrite.
void mm(const Mat& a, const Mat& b, Mat& c) {
  std::fill(c.vec().begin(), c.vec().end(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int l = 0; l < a.cols(); ++l) {
      const double av = arow[l];
      if (av == 0.0) continue;
      const double* brow = b.row(l);
      for (int j = 0; j < b.cols(); ++j) crow[j] += av * brow[j];
    }
  }
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace

Mat gw_gradient(const Mat& ca, const Mat& cb, const Mat& pi) {
  const int n = ca.rows(), m = cb.rows();
  if (ca.cols() != n || cb.cols() != m || pi.rows() != n || pi.cols() != m)
    throw DataError("gw_gradient: inconsistent shapes " + shape_str(ca.rows(), ca.cols()) + ", " +
                    shape_str(cb.rows(), cb.cols()) + ", " + shape_str(pi.rows(), pi.cols()));
  std::vector<double> r(n, 0.0), c(m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      r[i] += pi(i, j);
      c[j] += pi(i, j);
    }
  // sum_kl (ca_ik - cb_jl)^2 pi_kl
  //   = (ca.^2 r)_i + (cb.^2 c)_j - 2 (ca pi cb^T)_ij
  std::vector<double> ca2r(n, 0.0), cb2c(m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) ca2r[i] += ca(i, k) * ca(i, k) * r[k];
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) cb2c[j] += cb(j, l) * cb(j, l) * c[l];
  Mat tmp(n, m), cross(n, m);
  mm(ca, pi, tmp);
  Mat cbt = transpose(cb);
  mm(tmp, cbt, cross);
  Mat grad(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) grad(i, j) = 2.0 * (ca2r[i] + cb2c[j] - 2.0 * cross(i, j));
  return grad;
}

double gw_energy(const Mat& ca, const Mat& cb, const Mat& pi) {
  return 0.5 * dot(gw_gradient(ca, cb, pi), pi);
}

namespace {

struct RunOutcome {
  Mat pi;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// One conditional-gradient run from pi0. The traced objective is the
// solver-maintained sequence (initial value from scratch, then the exact
// quadratic step update); it is checked against a from-scratch evaluation at
// the end, and the caller rescores the final coupling independently.
RunOutcome run_frank_wolfe(const Mat& feat_cost, const Mat& ca, const Mat& cb, double alpha,
                           const FgwConfig& cfg, Mat pi,
                           std::span<const double> mu, std::span<const double> nu,
                           std::vector<double>* objective_trace) {
  RunOutcome out;
  auto recompute = [&](const Mat& p) {
    return alpha * dot(feat_cost, p) + (1.0 - alpha) * gw_energy(ca, cb, p);
  };
  double objective = recompute(pi);
  if (objective_trace) objective_trace->push_back(objective);
  const int n = pi.rows(), m = pi.cols();
  bool converged = false;
  int it = 0;
  while (it < cfg.max_iter) {
    ++it;
    Mat grad_pi = gw_gradient(ca, cb, pi);
    Mat lin(n, m);
    for (size_t k = 0; k < lin.size(); ++k)
      lin.data()[k] = alpha * feat_cost.data()[k] + (1.0 - alpha) * grad_pi.data()[k];
    const WassersteinResult lp = wasserstein_lp(lin, mu, nu);
    Mat dir(n, m);
    for (size_t k = 0; k < dir.size(); ++k)
      dir.data()[k] = lp.coupling.plan.data()[k] - pi.data()[k];
    // F(pi + t d) = F(pi) + b t + c t^2 on [0, 1].
    const double b =
        alpha * dot(feat_cost, dir) + (1.0 - alpha) * dot(grad_pi, dir);
    const double c = (1.0 - alpha) * gw_energy(ca, cb, dir);
    double t;
    if (c > 0.0)
      t = std::clamp(-b / (2.0 * c), 0.0, 1.0);
    else
      t = (b + c < 0.0) ? 1.0 : 0.0;
    const double decrease = -(b * t + c * t * t);
    if (t > 0.0)
      for (size_t k = 0; k < pi.size(); ++k) pi.data()[k] += t * dir.data()[k];
    const double prev = objective;
    objective = prev - decrease;
    if (objective_trace) objective_trace->push_back(objective);
    if (decrease <= cfg.tol * std::max(std::abs(prev), 1e-16)) {
      converged = true;
      break;
    }
  }
  // The maintained sequence must agree with a from-scratch evaluation; a
  // drift here would mean the line-search algebra is wrong.
  if (std::abs(objective - recompute(pi)) >
      1e-9 * (1.0 + std::abs(objective)) * (1.0 + it))
    throw NumericError("conditional-gradient objective drifted from recomputation");
  out.pi = std::move(pi);
  out.objective = objective;
  out.iterations = it;
  out.converged = converged;
  return out;
}

Mat product_coupling(std::span<const double> mu, std::span<const double> nu) {
  Mat pi(static_cast<int>(mu.size()), static_cast<int>(nu.size()));
  for (int i = 0; i < pi.rows(); ++i)
    for (int j = 0; j < pi.cols(); ++j) pi(i, j) = mu[i] * nu[j];
  return pi;
}

// Random extreme point of the transportation polytope: north-west-corner
// fill over uniformly permuted rows and columns. Every fill is a basic
// feasible solution, i.e. a vertex.
Mat random_extreme_point(std::span<const double> mu, std::span<const double> nu, Rng& rng) {
  const int n = static_cast<int>(mu.size()), m = static_cast<int>(nu.size());
  std::vector<int> rows(n), cols(m);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  rng.shuffle(rows);
  rng.shuffle(cols);
  std::vector<double> a(mu.begin(), mu.end()), b(nu.begin(), nu.end());
  Mat pi(n, m, 0.0);
  int i = 0, j = 0;
  for (;;) {
    const double t = std::min(a[rows[i]], b[cols[j]]);
    pi(rows[i], cols[j]) = t;
    a[rows[i]] -= t;
    b[cols[j]] -= t;
    if (i == n - 1 && j == m - 1) break;
    if (i < n - 1 && (a[rows[i]] <= b[cols[j]] || j == m - 1))
      ++i;
    else
      ++j;
  }
  return pi;
}

}  // namespace

FgwResult fgw_solve(const Mat& feat_cost, const Mat& ca, const Mat& cb, double alpha,
                    const FgwConfig& cfg, std::vector<std::vector<double>>* objective_traces) {
  if (alpha < 0.0 || alpha > 1.0) throw DataError("alpha must be in [0, 1]");
  const int n = ca.rows(), m = cb.rows();
  if (feat_cost.rows() != n || feat_cost.cols() != m)
    throw DataError("fgw_solve: feature cost shape " +
                    shape_str(feat_cost.rows(), feat_cost.cols()) + " does not match " +
                    shape_str(n, m));
  const std::vector<double> mu = uniform_marginal(n), nu = uniform_marginal(m);

  std::vector<Mat> starts;
  starts.push_back(product_coupling(mu, nu));
  if (n == m) {
    Mat id(n, n, 0.0);
    for (int i = 0; i < n; ++i) id(i, i) = 1.0 / n;
    starts.push_back(std::move(id));
  }
  Rng rng = Rng(cfg.restart_seed).child(rng_tag::fgw_restart);
  for (int r = 0; r < cfg.restarts; ++r)
    starts.push_back(random_extreme_point(mu, nu, rng));

  FgwResult best;
  bool have_best = false;
  for (Mat& start : starts) {
    std::vector<double>* trace = nullptr;
    if (objective_traces) {
      objective_traces->emplace_back();
      trace = &objective_traces->back();
    }
    RunOutcome run =
        run_frank_wolfe(feat_cost, ca, cb, alpha, cfg, std::move(start), mu, nu, trace);
    // Score runs by the objective recomputed from scratch at their final
    // coupling, independently of the tracked sequence.
    const double wd = dot(feat_cost, run.pi);
    const double gwd = gw_energy(ca, cb, run.pi);
    const double value = alpha * wd + (1.0 - alpha) * gwd;
    if (!have_best || value < best.value) {
      have_best = true;
      best.value = value;
      best.wd_part = wd;
      best.gwd_part = gwd;
      best.iterations = run.iterations;
      best.converged = run.converged;
      best.coupling.plan = std::move(run.pi);
      best.coupling.row_marginal = mu;
      best.coupling.col_marginal = nu;
    }
  }
  return best;
}

FgwResult fgwd(const Graph& ga, const Graph& gb, double alpha, const FgwConfig& cfg) {
  if (ga.num_nodes < 1 || gb.num_nodes < 1) throw DataError("fgwd requires non-empty graphs");
  if (ga.feature_dim() != gb.feature_dim())
    throw DataError("fgwd: feature dimension mismatch " + std::to_string(ga.feature_dim()) +
                    " vs " + std::to_string(gb.feature_dim()));
  const Mat sa = structure_matrix(ga, cfg.structure);
  const Mat sb = structure_matrix(gb, cfg.structure);

  // Canonical orientation so both argument orders run the same mirrored
  // solve: smaller side first by (n, structure bytes, feature bytes), the
  // feature comparison skipped at alpha == 0 so the value stays exactly
  // feature-independent there.
  bool swapped = false;
  if (ga.num_nodes != gb.num_nodes) {
    swapped = ga.num_nodes > gb.num_nodes;
  } else if (sa.vec() != sb.vec()) {
    swapped = sb.vec() < sa.vec();
  } else if (alpha > 0.0 && ga.features.vec() != gb.features.vec()) {
    swapped = gb.features.vec() < ga.features.vec();
  }

  const Graph& first = swapped ? gb : ga;
  const Graph& second = swapped ? ga : gb;
  const Mat& ca = swapped ? sb : sa;
  const Mat& cb = swapped ? sa : sb;
  const Mat fc = feature_cost(first.features, second.features);

  FgwResult res = fgw_solve(fc, ca, cb, alpha, cfg);
  if (swapped) {
    Mat t(res.coupling.plan.cols(), res.coupling.plan.rows());
    for (int i = 0; i < res.coupling.plan.rows(); ++i)
      for (int j = 0; j < res.coupling.plan.cols(); ++j) t(j, i) = res.coupling.plan(i, j);
    res.coupling.plan = std::move(t);
    std::swap(res.coupling.row_marginal, res.coupling.col_marginal);
  }
  return res;
}

}  // namespace augward
