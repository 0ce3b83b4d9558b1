#pragma once

#include <span>
#include <vector>

#include "augward/mat.hpp"

namespace augward {

// Transport plan with its prescribed marginals. Row sums match row_marginal
// and column sums match col_marginal within 1e-10; entries nonnegative.
struct Coupling {
  Mat plan;
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;

  void validate(double tol = 1e-10) const;  // throws NumericError on violation
};

std::vector<double> uniform_marginal(int n);

// Pairwise squared Euclidean distances between rows: (n,d) x (m,d) -> (n,m).
Mat feature_cost(const Mat& xa, const Mat& xb);

struct WassersteinResult {
  double value = 0.0;
  Coupling coupling;
  int pivots = 0;
};

// Exact linear optimal transport min <C, pi> over Pi(mu, nu), solved by the
// transportation simplex: north-west-corner start, cycle-improvement
// (stepping-stone) pivoting with MODI duals. Entering cells follow the
// most-negative reduced cost while pivots make strict progress; degenerate
// pivots switch to Bland's rule, which rules out cycling. Returns an
// extreme point of the transportation polytope.
WassersteinResult wasserstein_lp(const Mat& cost, std::span<const double> mu,
                                 std::span<const double> nu);

}  // namespace augward
