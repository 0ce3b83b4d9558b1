#pragma once

#include <cstdint>

#include "augward/graph.hpp"
#include "augward/ot.hpp"

namespace augward {

struct FgwConfig {
  StructureKind structure = StructureKind::ShortestPath;
  double tol = 1e-8;       // relative objective decrease per iteration
  int max_iter = 1000;
  int restarts = 3;        // random extreme-point starts besides product/identity
  uint64_t restart_seed = 0x5EEDFULL;
};

struct FgwResult {
  double value = 0.0;
  Coupling coupling;
  double wd_part = 0.0;    // <feature_cost, pi> at the returned coupling
  double gwd_part = 0.0;   // square-loss GW energy at the returned coupling
  int iterations = 0;      // iterations of the winning run
  bool converged = false;
};

// Linearization of the square-loss GW term at pi:
//   out(i, j) = 2 * sum_{k,l} (ca(i,k) - cb(j,l))^2 * pi(k,l).
// Linear in pi, so degenerate inputs (e.g. all zeros) are fine.
Mat gw_gradient(const Mat& ca, const Mat& cb, const Mat& pi);

// Square-loss GW energy sum_{i,j,k,l} (ca(i,k) - cb(j,l))^2 pi(i,j) pi(k,l).
double gw_energy(const Mat& ca, const Mat& cb, const Mat& pi);

// Conditional-gradient minimization of
//   alpha * <feat_cost, pi> + (1 - alpha) * GW(ca, cb, pi)
// over couplings with uniform marginals. Starts from the product coupling,
// the identity/n coupling when square, and cfg.restarts random extreme
// points; each iteration takes the exact LP direction (wasserstein_lp on the
// linearized cost) with exact line search for the quadratic objective.
// Non-convergence is reported via converged=false, never thrown.
// When objective_traces is non-null it receives, per run, the maintained
// objective sequence (verified against a from-scratch evaluation at the end
// of every run).
FgwResult fgw_solve(const Mat& feat_cost, const Mat& ca, const Mat& cb, double alpha,
                    const FgwConfig& cfg = {},
                    std::vector<std::vector<double>>* objective_traces = nullptr);

// Graph-level entry point: squared-Euclidean feature cost, structure
// matrices per cfg, orientation canonicalized so fgwd(a, b) and fgwd(b, a)
// run mirrored solves.
FgwResult fgwd(const Graph& ga, const Graph& gb, double alpha, const FgwConfig& cfg = {});

}  // namespace augward
