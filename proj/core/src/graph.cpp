#include "augward/graph.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <map>

#include "augward/errors.hpp"

namespace augward {

void Graph::canonicalize_and_check() {
  if (num_nodes < 1) throw DataError("graph must have at least one node");
  for (auto& [u, v] : edges) {
    if (u == v) throw DataError("self-loop at node " + std::to_string(u));
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes)
      throw DataError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                      std::to_string(v) + ") with " + std::to_string(num_nodes) + " nodes");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw DataError("duplicate undirected edge");
  if (features.rows() != num_nodes)
    throw DataError("feature rows " + std::to_string(features.rows()) + " != num_nodes " +
                    std::to_string(num_nodes));
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(num_nodes, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

bool Graph::operator==(const Graph& o) const {
  return num_nodes == o.num_nodes && edges == o.edges && features == o.features &&
         label == o.label;
}

Split stratified_split(const Dataset& ds, double test_fraction, uint64_t seed) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0)
    throw DataError("test_fraction must be in (0, 1)");
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < ds.size(); ++i) {
    if (!ds.graphs[i].label) throw DataError("graph " + std::to_string(i) + " has no label");
    by_class[*ds.graphs[i].label].push_back(i);
  }
  Split split;
  Rng rng = Rng(seed).child(rng_tag::split);
  for (auto& [cls, members] : by_class) {
    if (members.size() < 2)
      throw DataError("class " + std::to_string(cls) + " has fewer than 2 members");
    rng.shuffle(members);
    int n_test = static_cast<int>(std::floor(test_fraction * members.size() + 0.5));
    n_test = std::min<int>(n_test, static_cast<int>(members.size()) - 1);
    for (size_t k = 0; k < members.size(); ++k)
      (static_cast<int>(k) < n_test ? split.test_indices : split.train_indices)
          .push_back(members[k]);
  }
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  return split;
}

Mat shortest_path_matrix(const Graph& g) {
  const int n = g.num_nodes;
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  Mat dist(n, n, -1.0);
  int finite_max = 0;
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    dist(s, s) = 0.0;
    queue.clear();
    queue.push_back(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (dist(s, v) < 0.0) {
          dist(s, v) = dist(s, u) + 1.0;
          finite_max = std::max(finite_max, static_cast<int>(dist(s, v)));
          queue.push_back(v);
        }
      }
    }
  }
  const double cap = finite_max + 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dist(i, j) < 0.0) dist(i, j) = cap;
  return dist;
}

Mat adjacency_matrix(const Graph& g) {
  Mat a(g.num_nodes, g.num_nodes, 0.0);
  for (auto [u, v] : g.edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Mat structure_matrix(const Graph& g, StructureKind kind) {
  return kind == StructureKind::ShortestPath ? shortest_path_matrix(g) : adjacency_matrix(g);
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  Graph out;
  out.num_nodes = g.num_nodes;
  out.label = g.label;
  out.features = Mat(g.num_nodes, g.feature_dim());
  for (int i = 0; i < g.num_nodes; ++i)
    for (int j = 0; j < g.feature_dim(); ++j) out.features(perm[i], j) = g.features(i, j);
  out.edges.reserve(g.edges.size());
  for (auto [u, v] : g.edges) out.edges.emplace_back(perm[u], perm[v]);
  out.canonicalize_and_check();
  return out;
}

namespace {
void fnv_bytes(uint64_t& h, const void* p, size_t n) {
  const unsigned char* b = static_cast<const unsigned char*>(p);
  for (size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 0x100000001B3ULL;
  }
}
}  // namespace

uint64_t dataset_fingerprint(const Dataset& ds) {
  uint64_t h = 0xCBF29CE484222325ULL;
  int32_t nc = ds.num_classes;
  fnv_bytes(h, &nc, sizeof nc);
  for (const Graph& g : ds.graphs) {
    int32_t n = g.num_nodes;
    fnv_bytes(h, &n, sizeof n);
    for (auto [u, v] : g.edges) {
      int32_t e[2] = {u, v};
      fnv_bytes(h, e, sizeof e);
    }
    fnv_bytes(h, g.features.data(), g.features.size() * sizeof(double));
    int32_t lab = g.label.value_or(0);
    fnv_bytes(h, &lab, sizeof lab);
  }
  return h;
}

}  // namespace augward
