#include "augward/synthetic.hpp"

namespace augward {

namespace {
// The 4-layer sum-aggregation encoder has no normalization layers, so raw
// degree-scale features would push the classifier's softmax far outside its
// linear regime at init. This scale keeps initial logits O(1).
constexpr double kFeatureScale = 1e-3;
// A small fraction of flipped labels keeps the cross-entropy bounded away
// from zero over long runs; without it the clamped-log loss admits an
// absorbing all-gradients-zero state once the classifier saturates.
constexpr double kLabelNoise = 0.02;
}  // namespace

Dataset make_cycles_stars(int num_graphs, uint64_t seed) {
  Rng rng = Rng(seed).child(rng_tag::synthetic);
  Dataset ds;
  ds.name = "synthetic";
  ds.num_classes = 2;
  ds.graphs.reserve(num_graphs);
  for (int i = 0; i < num_graphs; ++i) {
    const int n = 6 + rng.uniform_int(15);  // [6, 20]
    Graph g;
    g.num_nodes = n;
    if (i % 2 == 0) {
      g.label = 1;  // cycle
      for (int v = 0; v < n; ++v) g.edges.emplace_back(v, (v + 1) % n);
    } else {
      g.label = 2;  // star centered at node 0
      for (int v = 1; v < n; ++v) g.edges.emplace_back(0, v);
    }
    g.features = Mat(n, 2);
    g.canonicalize_and_check();
    const std::vector<int> deg = g.degrees();
    for (int v = 0; v < n; ++v) {
      g.features(v, 0) = kFeatureScale;
      g.features(v, 1) = kFeatureScale * deg[v];
    }
    ds.graphs.push_back(std::move(g));
  }
  const int flips = static_cast<int>(kLabelNoise * num_graphs);
  for (int f = 0; f < flips; ++f) {
    Graph& g = ds.graphs[rng.uniform_int(num_graphs)];
    g.label = 3 - *g.label;
  }
  return ds;
}

}  // namespace augward
