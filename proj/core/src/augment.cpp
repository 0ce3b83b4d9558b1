#include "augward/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "augward/errors.hpp"

namespace augward {

const char* to_string(AugmentKind k) {
  switch (k) {
    case AugmentKind::NodeDrop: return "node_drop";
    case AugmentKind::EdgeDrop: return "edge_drop";
    case AugmentKind::AttrMask: return "attr_mask";
    case AugmentKind::Subgraph: return "subgraph";
  }
  return "?";
}

AugmentKind augment_kind_from_string(const std::string& s) {
  if (s == "node_drop") return AugmentKind::NodeDrop;
  if (s == "edge_drop") return AugmentKind::EdgeDrop;
  if (s == "attr_mask") return AugmentKind::AttrMask;
  if (s == "subgraph") return AugmentKind::Subgraph;
  throw ConfigError("unknown augmentation kind '" + s + "'");
}

int perturbation_count(double p, int n) {
  return static_cast<int>(std::floor(p * n + 0.5));
}

namespace {

void check_ratio(double p) {
  if (p < 0.0 || p > 0.5) throw DataError("perturbation ratio must be in [0, 0.5]");
}

// k distinct uniform picks from [0, n), returned sorted ascending.
std::vector<int> pick_distinct(int n, int k, Rng& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int t = 0; t < k; ++t) {
    int j = t + rng.uniform_int(n - t);
    std::swap(idx[t], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<int> identity_provenance(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Induced subgraph on the sorted node list `kept`.
Graph induce(const Graph& g, const std::vector<int>& kept) {
  std::vector<int> new_id(g.num_nodes, -1);
  for (size_t i = 0; i < kept.size(); ++i) new_id[kept[i]] = static_cast<int>(i);
  Graph out;
  out.num_nodes = static_cast<int>(kept.size());
  out.label = g.label;
  out.features = Mat(out.num_nodes, g.feature_dim());
  for (size_t i = 0; i < kept.size(); ++i)
    for (int j = 0; j < g.feature_dim(); ++j) out.features(static_cast<int>(i), j) = g.features(kept[i], j);
  for (auto [u, v] : g.edges)
    if (new_id[u] >= 0 && new_id[v] >= 0) out.edges.emplace_back(new_id[u], new_id[v]);
  out.canonicalize_and_check();
  return out;
}

}  // namespace

AugmentedPair node_drop(const Graph& g, double p, Rng& rng) {
  check_ratio(p);
  const int k = perturbation_count(p, g.num_nodes);
  if (k > g.num_nodes - 1) throw DataError("node_drop would empty the graph");
  AugmentedPair pair{g, {}, {}, AugmentKind::NodeDrop, p};
  if (k == 0) {
    pair.augmented = g;
    pair.provenance = identity_provenance(g.num_nodes);
    return pair;
  }
  const std::vector<int> dropped = pick_distinct(g.num_nodes, k, rng);
  std::vector<char> drop(g.num_nodes, 0);
  for (int v : dropped) drop[v] = 1;
  std::vector<int> kept;
  kept.reserve(g.num_nodes - k);
  for (int v = 0; v < g.num_nodes; ++v)
    if (!drop[v]) kept.push_back(v);
  pair.augmented = induce(g, kept);
  pair.provenance = kept;
  return pair;
}

AugmentedPair edge_drop(const Graph& g, double p, Rng& rng) {
  check_ratio(p);
  const int k = perturbation_count(p, g.num_edges());
  AugmentedPair pair{g, g, identity_provenance(g.num_nodes), AugmentKind::EdgeDrop, p};
  if (k == 0) return pair;
  const std::vector<int> dropped = pick_distinct(g.num_edges(), k, rng);
  std::vector<char> drop(g.num_edges(), 0);
  for (int e : dropped) drop[e] = 1;
  pair.augmented.edges.clear();
  for (int e = 0; e < g.num_edges(); ++e)
    if (!drop[e]) pair.augmented.edges.push_back(g.edges[e]);
  return pair;
}

AugmentedPair attr_mask(const Graph& g, double p, Rng& rng,
                        std::span<const double> mask_row) {
  check_ratio(p);
  if (!mask_row.empty() && static_cast<int>(mask_row.size()) != g.feature_dim())
    throw DataError("mask row dimension " + std::to_string(mask_row.size()) +
                    " != feature dim " + std::to_string(g.feature_dim()));
  const int k = perturbation_count(p, g.num_nodes);
  AugmentedPair pair{g, g, identity_provenance(g.num_nodes), AugmentKind::AttrMask, p};
  if (k == 0) return pair;
  for (int v : pick_distinct(g.num_nodes, k, rng))
    for (int j = 0; j < g.feature_dim(); ++j)
      pair.augmented.features(v, j) = mask_row.empty() ? 0.0 : mask_row[j];
  return pair;
}

AugmentedPair subgraph(const Graph& g, double p, Rng& rng, bool bfs) {
  check_ratio(p);
  if (g.num_nodes < 1) throw DataError("subgraph of an empty graph");
  const int target = perturbation_count(1.0 - p, g.num_nodes);
  std::vector<std::vector<int>> adj(g.num_nodes);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());

  std::vector<char> in(g.num_nodes, 0);
  std::vector<int> kept;
  kept.reserve(target);
  auto add = [&](int v) {
    in[v] = 1;
    kept.push_back(v);
  };
  add(rng.uniform_int(g.num_nodes));
  while (static_cast<int>(kept.size()) < target) {
    // Frontier = neighbors of the visited set, deduped and sorted so the
    // uniform pick is independent of insertion history.
    std::vector<int> frontier;
    for (int v : kept)
      for (int w : adj[v])
        if (!in[w]) frontier.push_back(w);
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    if (frontier.empty()) {
      // Component exhausted: restart from a uniform unvisited node.
      std::vector<int> unvisited;
      for (int v = 0; v < g.num_nodes; ++v)
        if (!in[v]) unvisited.push_back(v);
      add(unvisited[rng.uniform_int(static_cast<int>(unvisited.size()))]);
    } else if (bfs) {
      for (int w : frontier) {
        if (static_cast<int>(kept.size()) >= target) break;
        add(w);
      }
    } else {
      add(frontier[rng.uniform_int(static_cast<int>(frontier.size()))]);
    }
  }
  std::sort(kept.begin(), kept.end());
  AugmentedPair pair{g, induce(g, kept), kept, AugmentKind::Subgraph, p};
  return pair;
}

AugmentedPair sample(const Graph& g, AugmentKind kind, double p, Rng& rng,
                     const AugmentOptions& opts) {
  switch (kind) {
    case AugmentKind::NodeDrop: return node_drop(g, p, rng);
    case AugmentKind::EdgeDrop: return edge_drop(g, p, rng);
    case AugmentKind::AttrMask: return attr_mask(g, p, rng, opts.mask_row);
    case AugmentKind::Subgraph: return subgraph(g, p, rng, opts.subgraph_bfs);
  }
  throw DataError("bad augmentation kind");
}

std::vector<double> mean_feature_row(const Dataset& ds) {
  if (ds.graphs.empty()) return {};
  const int d = ds.feature_dim();
  std::vector<double> mean(d, 0.0);
  long total = 0;
  for (const Graph& g : ds.graphs) {
    for (int v = 0; v < g.num_nodes; ++v)
      for (int j = 0; j < d; ++j) mean[j] += g.features(v, j);
    total += g.num_nodes;
  }
  for (double& m : mean) m /= static_cast<double>(total);
  return mean;
}

}  // namespace augward
