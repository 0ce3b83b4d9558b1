#include <benchmark/benchmark.h>

#include "augward/fgw.hpp"
#include "augward/rng.hpp"

namespace {

using namespace augward;

Graph random_graph(int n, int d, double edge_prob, Rng& rng) {
  Graph g;
  g.num_nodes = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < edge_prob) g.edges.emplace_back(u, v);
  g.features = Mat(n, d);
  for (size_t i = 0; i < g.features.size(); ++i)
    g.features.data()[i] = 2.0 * rng.next_double() - 1.0;
  g.label = 1;
  g.canonicalize_and_check();
  return g;
}

void BM_WassersteinLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  Mat cost(n, n);
  for (size_t i = 0; i < cost.size(); ++i) cost.data()[i] = rng.next_double();
  const auto mu = uniform_marginal(n);
  for (auto _ : state) {
    auto res = wasserstein_lp(cost, mu, mu);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_WassersteinLp)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Fgwd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const Graph a = random_graph(n, 4, 0.3, rng);
  const Graph b = random_graph(n, 4, 0.3, rng);
  for (auto _ : state) {
    auto res = fgwd(a, b, 0.5);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_Fgwd)->Arg(10)->Arg(20)->Arg(40);

void BM_GwGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const Graph a = random_graph(n, 2, 0.3, rng);
  const Graph b = random_graph(n, 2, 0.3, rng);
  const Mat ca = shortest_path_matrix(a), cb = shortest_path_matrix(b);
  Mat pi(n, n, 1.0 / (static_cast<double>(n) * n));
  for (auto _ : state) {
    Mat g = gw_gradient(ca, cb, pi);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_GwGradient)->Arg(16)->Arg(64)->Arg(128);

}  // namespace
