#include <doctest.h>

#include <cstring>
#include <set>

#include "augward/augment.hpp"
#include "augward/errors.hpp"
#include "test_util.hpp"

using namespace augward;

namespace {

bool provenance_injective(const AugmentedPair& pair) {
  std::set<int> seen;
  for (int v : pair.provenance) {
    if (v < 0 || v >= pair.original.num_nodes) return false;
    if (!seen.insert(v).second) return false;
  }
  return seen.size() == static_cast<size_t>(pair.augmented.num_nodes);
}

bool graphs_equal_with_identity(const AugmentedPair& pair) {
  if (!(pair.augmented == pair.original)) return false;
  for (size_t i = 0; i < pair.provenance.size(); ++i)
    if (pair.provenance[i] != static_cast<int>(i)) return false;
  return true;
}

uint64_t pair_signature(const AugmentedPair& p) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(p.augmented.num_nodes);
  for (auto [u, v] : p.augmented.edges) mix((static_cast<uint64_t>(u) << 32) | v);
  for (double x : p.augmented.features.vec()) {
    uint64_t bits;
    static_assert(sizeof bits == sizeof x);
    std::memcpy(&bits, &x, sizeof bits);
    mix(bits);
  }
  for (int v : p.provenance) mix(v);
  return h;
}

}  // namespace

TEST_CASE("rng streams are deterministic and child streams are independent") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng parent(5);
  Rng c1 = parent.child(1), c2 = parent.child(2);
  CHECK(c1.next_u64() != c2.next_u64());
  // child() does not advance the parent
  Rng parent2(5);
  (void)parent2.child(9);
  Rng parent3(5);
  CHECK(parent2.next_u64() == parent3.next_u64());
}

TEST_CASE("rng uniform draws respect [0, n)") {
  Rng rng(9);
  for (int n : {1, 2, 7, 100}) {
    for (int i = 0; i < 200; ++i) {
      const int v = rng.uniform_int(n);
      CHECK(v >= 0);
      CHECK(v < n);
    }
  }
}

TEST_CASE("node_drop count contract and provenance") {
  Rng rng(1);
  const Graph g = test::random_graph(10, 3, 0.4, rng);
  Rng draw(77);
  const AugmentedPair pair = node_drop(g, 0.2, draw);
  CHECK(pair.augmented.num_nodes == 8);
  CHECK(pair.provenance.size() == 8);
  CHECK(provenance_injective(pair));
  CHECK(pair.augmented.label == g.label);
  // compaction preserves relative order
  for (size_t i = 1; i < pair.provenance.size(); ++i)
    CHECK(pair.provenance[i - 1] < pair.provenance[i]);
}

TEST_CASE("node_drop p=0 is the exact identity") {
  Rng rng(2);
  const Graph g = test::random_graph(7, 2, 0.5, rng);
  Rng draw(5);
  CHECK(graphs_equal_with_identity(node_drop(g, 0.0, draw)));
}

TEST_CASE("node_drop on a triangle at p=0.34 leaves 2 nodes and 1 edge") {
  Graph tri;
  tri.num_nodes = 3;
  tri.edges = {{0, 1}, {0, 2}, {1, 2}};
  tri.features = Mat(3, 1, 1.0);
  tri.label = 1;
  tri.canonicalize_and_check();
  Rng draw(3);
  const AugmentedPair pair = node_drop(tri, 0.34, draw);
  CHECK(pair.augmented.num_nodes == 2);
  CHECK(pair.augmented.num_edges() == 1);
}

TEST_CASE("node_drop that would empty the graph errors") {
  Graph g;
  g.num_nodes = 1;
  g.features = Mat(1, 1, 1.0);
  g.label = 1;
  Rng draw(1);
  CHECK_THROWS_AS(node_drop(g, 0.5, draw), DataError);
}

TEST_CASE("edge_drop count contract") {
  Rng rng(4);
  Graph g = test::random_graph(12, 2, 0.5, rng);
  while (g.num_edges() < 20) g = test::random_graph(12, 2, 0.6, rng);
  g.edges.resize(20);
  g.canonicalize_and_check();
  Rng draw(8);
  const AugmentedPair pair = edge_drop(g, 0.1, draw);
  CHECK(pair.augmented.num_edges() == 18);
  CHECK(pair.augmented.num_nodes == g.num_nodes);
  CHECK(pair.augmented.features == g.features);
  CHECK(graphs_equal_with_identity(edge_drop(g, 0.0, draw)));
}

TEST_CASE("edge_drop on an edgeless graph is the identity for any p") {
  Graph g;
  g.num_nodes = 4;
  g.features = Mat(4, 1, 1.0);
  g.label = 1;
  Rng draw(2);
  CHECK(graphs_equal_with_identity(edge_drop(g, 0.5, draw)));
}

TEST_CASE("attr_mask replaces exactly round(p*n) rows with the mask row") {
  Rng rng(5);
  const Graph g = test::random_graph(10, 3, 0.3, rng);
  const std::vector<double> mask = {9.0, 9.0, 9.0};
  Rng draw(6);
  const AugmentedPair pair = attr_mask(g, 0.2, draw, mask);
  int masked = 0, untouched = 0;
  for (int v = 0; v < g.num_nodes; ++v) {
    bool is_mask = true, is_orig = true;
    for (int j = 0; j < 3; ++j) {
      is_mask = is_mask && pair.augmented.features(v, j) == 9.0;
      is_orig = is_orig && pair.augmented.features(v, j) == g.features(v, j);
    }
    masked += is_mask;
    untouched += is_orig;
  }
  CHECK(masked == 2);
  CHECK(untouched == 8);
  CHECK(pair.augmented.edges == g.edges);
}

TEST_CASE("attr_mask with constant features is value-invariant under the mean mask") {
  Graph g;
  g.num_nodes = 6;
  g.edges = {{0, 1}, {2, 3}};
  g.features = Mat(6, 2, 0.75);
  g.label = 1;
  g.canonicalize_and_check();
  Dataset ds;
  ds.num_classes = 1;
  ds.graphs = {g};
  const std::vector<double> mean = mean_feature_row(ds);
  CHECK(mean == std::vector<double>{0.75, 0.75});
  Rng draw(10);
  const AugmentedPair pair = attr_mask(g, 0.5, draw, mean);
  CHECK(pair.augmented.features == g.features);
}

TEST_CASE("subgraph keeps round((1-p)*n) nodes and induces edges") {
  Rng rng(6);
  const Graph g = test::random_graph(10, 2, 0.5, rng);
  Rng draw(11);
  const AugmentedPair pair = subgraph(g, 0.2, draw);
  CHECK(pair.augmented.num_nodes == 8);
  CHECK(provenance_injective(pair));
  // induced: every original edge between kept nodes must survive
  std::set<int> kept(pair.provenance.begin(), pair.provenance.end());
  int expected_edges = 0;
  for (auto [u, v] : g.edges) expected_edges += kept.count(u) && kept.count(v);
  CHECK(pair.augmented.num_edges() == expected_edges);
}

TEST_CASE("subgraph at p=0 on a connected graph keeps the full node set") {
  Graph cyc;
  cyc.num_nodes = 5;
  cyc.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}};
  cyc.features = Mat(5, 1, 1.0);
  cyc.label = 1;
  cyc.canonicalize_and_check();
  Rng draw(12);
  const AugmentedPair pair = subgraph(cyc, 0.0, draw);
  CHECK(pair.augmented.num_nodes == 5);
  CHECK(pair.augmented.edges == cyc.edges);
}

TEST_CASE("subgraph of the star K1,4 at p=0.4 is always connected") {
  Graph star;
  star.num_nodes = 5;
  star.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  star.features = Mat(5, 1, 1.0);
  star.label = 1;
  star.canonicalize_and_check();
  // Walk growth on a connected star can never strand a node: every kept set
  // of size 3 here must contain the hub once it has 2+ nodes.
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng draw(seed);
    const AugmentedPair pair = subgraph(star, 0.4, draw);
    REQUIRE(pair.augmented.num_nodes == 3);
    CHECK(pair.augmented.num_edges() == 2);  // hub + two leaves
  }
}

TEST_CASE("sample dispatches on kind and is deterministic in the seed") {
  Rng rng(7);
  const Graph g = test::random_graph(9, 2, 0.5, rng);
  Dataset ds;
  ds.num_classes = 1;
  ds.graphs = {g};
  AugmentOptions opts;
  opts.mask_row = mean_feature_row(ds);
  for (AugmentKind kind : {AugmentKind::NodeDrop, AugmentKind::EdgeDrop, AugmentKind::AttrMask,
                           AugmentKind::Subgraph}) {
    Rng d1(99), d2(99);
    const AugmentedPair a = sample(g, kind, 0.2, d1, opts);
    const AugmentedPair b = sample(g, kind, 0.2, d2, opts);
    CHECK(a.op_kind == kind);
    CHECK(a.ratio == 0.2);
    CHECK(pair_signature(a) == pair_signature(b));
    CHECK(a.augmented.label == g.label);
  }
}

TEST_CASE("randomized operator contracts hold across 200 trials each") {
  Rng rng(8);
  AugmentOptions opts;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.uniform_int(14);
    const Graph g = test::random_graph(n, 2, 0.4, rng);
    Dataset ds;
    ds.num_classes = 1;
    ds.graphs = {g};
    opts.mask_row = mean_feature_row(ds);
    const double p = 0.5 * rng.next_double();
    for (AugmentKind kind : {AugmentKind::NodeDrop, AugmentKind::EdgeDrop, AugmentKind::AttrMask,
                             AugmentKind::Subgraph}) {
      if (kind == AugmentKind::NodeDrop && perturbation_count(p, n) > n - 1) continue;
      Rng draw(rng.next_u64());
      const AugmentedPair pair = sample(g, kind, p, draw, opts);
      CHECK(provenance_injective(pair));
      CHECK_NOTHROW(const_cast<Graph&>(pair.augmented).canonicalize_and_check());
      if (kind == AugmentKind::NodeDrop)
        CHECK(pair.augmented.num_nodes == n - perturbation_count(p, n));
      if (kind == AugmentKind::EdgeDrop)
        CHECK(pair.augmented.num_edges() ==
              g.num_edges() - perturbation_count(p, g.num_edges()));
      if (kind == AugmentKind::Subgraph)
        CHECK(pair.augmented.num_nodes == perturbation_count(1.0 - p, n));
      if (kind == AugmentKind::AttrMask) CHECK(pair.augmented.edges == g.edges);
    }
  }
}

TEST_CASE("augmentation outputs are diverse at fixed p (dispersion premise)") {
  // Non-symmetric graph: a path with a pendant, distinct feature rows.
  Graph g;
  g.num_nodes = 6;
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}};
  g.features = Mat(6, 1);
  for (int v = 0; v < 6; ++v) g.features(v, 0) = v;
  g.label = 1;
  g.canonicalize_and_check();
  for (AugmentKind kind : {AugmentKind::NodeDrop, AugmentKind::EdgeDrop, AugmentKind::AttrMask,
                           AugmentKind::Subgraph}) {
    std::set<uint64_t> distinct;
    for (uint64_t s = 0; s < 100; ++s) {
      Rng draw(s);
      distinct.insert(pair_signature(sample(g, kind, 0.2, draw, {})));
    }
    CHECK(distinct.size() >= 2);
  }
}

TEST_CASE("ratio outside [0, 0.5] is rejected") {
  Rng rng(10);
  const Graph g = test::random_graph(5, 1, 0.5, rng);
  Rng draw(1);
  CHECK_THROWS_AS(node_drop(g, 0.6, draw), DataError);
  CHECK_THROWS_AS(edge_drop(g, -0.1, draw), DataError);
}
