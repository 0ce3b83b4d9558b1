#pragma once

#include <span>
#include <vector>

#include "augward/graph.hpp"
#include "augward/rng.hpp"

namespace augward {

enum class AugmentKind { NodeDrop, EdgeDrop, AttrMask, Subgraph };

const char* to_string(AugmentKind k);
AugmentKind augment_kind_from_string(const std::string& s);

// An augmentation draw: the original graph, its perturbed variant, and the
// injective map from surviving augmented node indices back to original
// indices. Labels are preserved.
struct AugmentedPair {
  Graph original;
  Graph augmented;
  std::vector<int> provenance;  // provenance[aug_idx] = orig_idx, strictly increasing
  AugmentKind op_kind = AugmentKind::NodeDrop;
  double ratio = 0.0;
};

struct AugmentOptions {
  // Row substituted by attr_mask; typically the dataset-wide feature mean
  // (mean_feature_row). Empty means mask-to-zero.
  std::vector<double> mask_row;
  // Subgraph growth: frontier random walk by default, BFS behind this flag.
  bool subgraph_bfs = false;
};

// Counts follow round-half-up of p*n so p=0 is an exact identity.
int perturbation_count(double p, int n);

// Removes round(p*n) uniformly chosen nodes plus incident edges; survivors
// are compacted preserving relative order. Draw sequence: one partial
// Fisher-Yates pass of round(p*n) uniform draws.
AugmentedPair node_drop(const Graph& g, double p, Rng& rng);

// Removes round(p*|E|) uniformly chosen edges; provenance is identity.
AugmentedPair edge_drop(const Graph& g, double p, Rng& rng);

// Replaces round(p*n) uniformly chosen feature rows with mask_row.
AugmentedPair attr_mask(const Graph& g, double p, Rng& rng,
                        std::span<const double> mask_row);

// Random-walk-induced subgraph keeping round((1-p)*n) nodes: grow from a
// uniform start by stepping to a uniform neighbor of the visited set,
// restarting from a uniform unvisited node when a component is exhausted.
// Draw sequence: one uniform draw per added node.
AugmentedPair subgraph(const Graph& g, double p, Rng& rng, bool bfs = false);

// Dispatch on kind; draws exactly the sequence of the dispatched operator.
AugmentedPair sample(const Graph& g, AugmentKind kind, double p, Rng& rng,
                     const AugmentOptions& opts = {});

// Dataset-wide mean feature vector, the default attr_mask fill.
std::vector<double> mean_feature_row(const Dataset& ds);

}  // namespace augward
