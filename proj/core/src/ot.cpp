#include "augward/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "augward/errors.hpp"

namespace augward {

void Coupling::validate(double tol) const {
  const int n = plan.rows(), m = plan.cols();
  if (static_cast<int>(row_marginal.size()) != n || static_cast<int>(col_marginal.size()) != m)
    throw NumericError("coupling marginal sizes do not match plan shape");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (plan(i, j) < 0.0) throw NumericError("coupling has a negative entry");
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += plan(i, j);
    if (std::abs(s - row_marginal[i]) > tol)
      throw NumericError("coupling row sum off by " + std::to_string(s - row_marginal[i]));
  }
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += plan(i, j);
    if (std::abs(s - col_marginal[j]) > tol)
      throw NumericError("coupling column sum off by " + std::to_string(s - col_marginal[j]));
  }
}

std::vector<double> uniform_marginal(int n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

Mat feature_cost(const Mat& xa, const Mat& xb) {
  if (xa.cols() != xb.cols())
    throw DataError("feature dimension mismatch: " + shape_str(xa.rows(), xa.cols()) + " vs " +
                    shape_str(xb.rows(), xb.cols()));
  Mat c(xa.rows(), xb.rows());
  for (int i = 0; i < xa.rows(); ++i) {
    const double* a = xa.row(i);
    for (int j = 0; j < xb.rows(); ++j) {
      const double* b = xb.row(j);
      double s = 0.0;
      for (int k = 0; k < xa.cols(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
      }
      c(i, j) = s;
    }
  }
  return c;
}

namespace {

// Spanning-tree basis over the bipartite node set {rows} u {cols}; node ids
// are i for row i and n + j for column j.
struct Simplex {
  int n, m;
  const Mat& cost;
  Mat alloc;
  std::vector<char> basic;  // n*m flags
  std::vector<std::vector<int>> adj;  // node -> list of basic cell ids (i*m + j)
  std::vector<double> u, v;

  explicit Simplex(const Mat& c, std::span<const double> mu, std::span<const double> nu)
      : n(c.rows()), m(c.cols()), cost(c), alloc(n, m, 0.0),
        basic(static_cast<size_t>(n) * m, 0), adj(n + m), u(n), v(m) {
    // North-west corner start: n + m - 1 basic cells, degenerate zeros kept.
    std::vector<double> a(mu.begin(), mu.end()), b(nu.begin(), nu.end());
    int i = 0, j = 0;
    for (;;) {
      const double t = std::min(a[i], b[j]);
      alloc(i, j) = t;
      set_basic(i, j);
      a[i] -= t;
      b[j] -= t;
      if (i == n - 1 && j == m - 1) break;
      if (i < n - 1 && (a[i] <= b[j] || j == m - 1))
        ++i;
      else
        ++j;
    }
  }

  void set_basic(int i, int j) {
    basic[static_cast<size_t>(i) * m + j] = 1;
    adj[i].push_back(i * m + j);
    adj[n + j].push_back(i * m + j);
  }

  void unset_basic(int i, int j) {
    basic[static_cast<size_t>(i) * m + j] = 0;
    const int cell = i * m + j;
    auto drop = [cell](std::vector<int>& lst) {
      lst.erase(std::find(lst.begin(), lst.end(), cell));
    };
    drop(adj[i]);
    drop(adj[n + j]);
  }

  // MODI duals from the basis tree, u[0] anchored at 0.
  void solve_duals() {
    std::vector<char> seen(n + m, 0);
    std::queue<int> q;
    u[0] = 0.0;
    seen[0] = 1;
    q.push(0);
    while (!q.empty()) {
      const int node = q.front();
      q.pop();
      for (int cell : adj[node]) {
        const int i = cell / m, j = cell % m;
        const int other = (node < n) ? n + j : i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (other >= n)
          v[j] = cost(i, j) - u[i];
        else
          u[i] = cost(i, j) - v[j];
        q.push(other);
      }
    }
  }

  // Dantzig rule (most negative reduced cost) while progress is strict;
  // Bland's rule (first eligible cell in row-major order) takes over during
  // degenerate stretches, which is what rules out cycling.
  int find_entering(double eps, bool bland) {
    int best = -1;
    double best_reduced = -eps;
    for (int i = 0; i < n; ++i) {
      const double ui = u[i];
      for (int j = 0; j < m; ++j) {
        if (basic[static_cast<size_t>(i) * m + j]) continue;
        const double reduced = cost(i, j) - ui - v[j];
        if (reduced < best_reduced) {
          best = i * m + j;
          best_reduced = reduced;
          if (bland) return best;
        }
      }
    }
    return best;
  }

  // Unique tree path from row node `i` to column node `n + j`; returns the
  // basic cells along it, alternating -,+,-,... relative to the entering +.
  std::vector<int> tree_path(int i, int j) {
    std::vector<int> parent(n + m, -1), via(n + m, -1);
    std::vector<char> seen(n + m, 0);
    std::queue<int> q;
    seen[i] = 1;
    q.push(i);
    while (!q.empty()) {
      const int node = q.front();
      q.pop();
      if (node == n + j) break;
      for (int cell : adj[node]) {
        const int ci = cell / m, cj = cell % m;
        const int other = (node < n) ? n + cj : ci;
        if (seen[other]) continue;
        seen[other] = 1;
        parent[other] = node;
        via[other] = cell;
        q.push(other);
      }
    }
    std::vector<int> path;
    for (int node = n + j; node != i; node = parent[node]) path.push_back(via[node]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  int solve(double eps, int max_pivots) {
    int pivots = 0;
    bool bland = false;
    for (;;) {
      solve_duals();
      const int enter = find_entering(eps, bland);
      if (enter < 0) return pivots;
      if (++pivots > max_pivots)
        throw NumericError("transportation simplex exceeded pivot budget");
      const int ei = enter / m, ej = enter % m;
      const std::vector<int> path = tree_path(ei, ej);
      // Donor cells sit at even path positions (0-based): they share a row
      // or column with a +theta cell and give up theta. Bland again for the
      // leaving cell: smallest cell id among the minimizers.
      double theta = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < path.size(); k += 2)
        theta = std::min(theta, alloc(path[k] / m, path[k] % m));
      int leave = -1;
      for (size_t k = 0; k < path.size(); k += 2) {
        const int cell = path[k];
        if (alloc(cell / m, cell % m) == theta && (leave < 0 || cell < leave)) leave = cell;
      }
      bland = theta == 0.0;  // degenerate pivot: switch to Bland until progress
      alloc(ei, ej) += theta;
      for (size_t k = 0; k < path.size(); ++k) {
        const int ci = path[k] / m, cj = path[k] % m;
        if (k % 2 == 0)
          alloc(ci, cj) -= theta;
        else
          alloc(ci, cj) += theta;
      }
      alloc(leave / m, leave % m) = 0.0;
      unset_basic(leave / m, leave % m);
      set_basic(ei, ej);
    }
  }
};

}  // namespace

WassersteinResult wasserstein_lp(const Mat& cost, std::span<const double> mu,
                                 std::span<const double> nu) {
  const int n = cost.rows(), m = cost.cols();
  if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != m)
    throw DataError("marginal sizes do not match cost matrix " + shape_str(n, m));
  double sum_mu = 0.0, sum_nu = 0.0, cmax = 0.0;
  for (double x : mu) {
    if (x < 0.0) throw DataError("negative entry in row marginal");
    sum_mu += x;
  }
  for (double x : nu) {
    if (x < 0.0) throw DataError("negative entry in column marginal");
    sum_nu += x;
  }
  if (std::abs(sum_mu - 1.0) > 1e-9 || std::abs(sum_nu - 1.0) > 1e-9)
    throw DataError("marginals must each sum to 1");
  for (size_t i = 0; i < cost.size(); ++i) {
    if (!std::isfinite(cost.data()[i])) throw DataError("non-finite cost entry");
    cmax = std::max(cmax, std::abs(cost.data()[i]));
  }

  Simplex simplex(cost, mu, nu);
  const double eps = 1e-12 * (1.0 + cmax);
  const int pivots = simplex.solve(eps, 1000 * (n + m) + 1000);

  WassersteinResult res;
  res.coupling.plan = std::move(simplex.alloc);
  res.coupling.row_marginal.assign(mu.begin(), mu.end());
  res.coupling.col_marginal.assign(nu.begin(), nu.end());
  res.pivots = pivots;
  res.value = dot(cost, res.coupling.plan);
  return res;
}

}  // namespace augward
