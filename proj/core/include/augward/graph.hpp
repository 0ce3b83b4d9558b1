#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "augward/mat.hpp"
#include "augward/rng.hpp"

namespace augward {

// Undirected simple graph with dense node features and an optional class
// label in [1, num_classes]. Edges are canonical (u < v) and sorted;
// immutable by convention once built.
struct Graph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  Mat features;                   // num_nodes x d
  std::optional<int> label;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int feature_dim() const { return features.cols(); }

  // Sorts edges into canonical (u < v) order and checks the type
  // invariants: endpoints in range, no self-loops, no duplicates,
  // feature row count. Throws DataError on violation.
  void canonicalize_and_check();

  std::vector<int> degrees() const;
  bool operator==(const Graph& o) const;
};

struct Dataset {
  std::vector<Graph> graphs;
  int num_classes = 0;
  std::string name;

  int size() const { return static_cast<int>(graphs.size()); }
  int feature_dim() const { return graphs.empty() ? 0 : graphs.front().feature_dim(); }
};

struct Split {
  std::vector<int> train_indices;
  std::vector<int> test_indices;
};

// Per-class proportions of the test side land within +-1 graph of
// test_fraction; deterministic in seed. Throws DataError when a class has
// fewer than 2 members.
Split stratified_split(const Dataset& ds, double test_fraction, uint64_t seed);

// Unweighted hop-distance matrix. Disconnected pairs get
// (longest finite distance in g) + 1.
Mat shortest_path_matrix(const Graph& g);

// Symmetric 0/1 adjacency, the configurable structure-matrix alternative.
Mat adjacency_matrix(const Graph& g);

enum class StructureKind { ShortestPath, Adjacency };

Mat structure_matrix(const Graph& g, StructureKind kind);

// Relabels nodes by permutation perm (new index of old node i is perm[i]).
Graph relabel(const Graph& g, const std::vector<int>& perm);

// FNV-1a content hash over nodes, edges, features and labels.
uint64_t dataset_fingerprint(const Dataset& ds);

}  // namespace augward
