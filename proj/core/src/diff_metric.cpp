#include "augward/diff_metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "augward/errors.hpp"

namespace augward {

const char* to_string(DiffMetric m) {
  switch (m) {
    case DiffMetric::RatioP: return "ratio_p";
    case DiffMetric::NodeFeat: return "node_feat";
    case DiffMetric::AdjMat: return "adj_mat";
    case DiffMetric::EdgeJaccard: return "edge_jaccard";
    case DiffMetric::Fgwd: return "fgwd";
  }
  return "?";
}

DiffMetric diff_metric_from_string(const std::string& s) {
  if (s == "ratio_p") return DiffMetric::RatioP;
  if (s == "node_feat") return DiffMetric::NodeFeat;
  if (s == "adj_mat") return DiffMetric::AdjMat;
  if (s == "edge_jaccard") return DiffMetric::EdgeJaccard;
  if (s == "fgwd") return DiffMetric::Fgwd;
  throw ConfigError("unknown diff metric '" + s + "'");
}

double diff_metric(const AugmentedPair& pair, DiffMetric kind, double alpha,
                   const FgwConfig& fgw_cfg) {
  const Graph& g = pair.original;
  const Graph& a = pair.augmented;
  if (static_cast<int>(pair.provenance.size()) != a.num_nodes)
    throw DataError("augmented pair provenance does not cover the augmented graph");
  switch (kind) {
    case DiffMetric::RatioP:
      return pair.ratio;
    case DiffMetric::NodeFeat: {
      Mat aligned(g.num_nodes, g.feature_dim(), 0.0);
      for (int v = 0; v < a.num_nodes; ++v)
        for (int j = 0; j < g.feature_dim(); ++j)
          aligned(pair.provenance[v], j) = a.features(v, j);
      double s = 0.0;
      for (int i = 0; i < g.num_nodes; ++i)
        for (int j = 0; j < g.feature_dim(); ++j) {
          const double d = g.features(i, j) - aligned(i, j);
          s += d * d;
        }
      return std::sqrt(s) / g.num_nodes;
    }
    case DiffMetric::AdjMat: {
      Mat adj = adjacency_matrix(g);
      Mat aligned(g.num_nodes, g.num_nodes, 0.0);
      for (auto [u, v] : a.edges) {
        const int pu = pair.provenance[u], pv = pair.provenance[v];
        aligned(pu, pv) = 1.0;
        aligned(pv, pu) = 1.0;
      }
      double s = 0.0;
      for (size_t k = 0; k < adj.size(); ++k) {
        const double d = adj.data()[k] - aligned.data()[k];
        s += d * d;
      }
      return std::sqrt(s) / g.num_nodes;
    }
    case DiffMetric::EdgeJaccard: {
      std::set<std::pair<int, int>> orig(g.edges.begin(), g.edges.end());
      std::set<std::pair<int, int>> mapped;
      for (auto [u, v] : a.edges) {
        int pu = pair.provenance[u], pv = pair.provenance[v];
        if (pu > pv) std::swap(pu, pv);
        mapped.emplace(pu, pv);
      }
      if (orig.empty() && mapped.empty()) return 0.0;
      size_t inter = 0;
      for (const auto& e : mapped) inter += orig.count(e);
      const size_t uni = orig.size() + mapped.size() - inter;
      return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
    }
    case DiffMetric::Fgwd:
      return fgwd(g, a, alpha, fgw_cfg).value;
  }
  throw DataError("unknown diff metric kind");
}

}  // namespace augward
