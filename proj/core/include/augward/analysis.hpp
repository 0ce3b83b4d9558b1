#pragma once

#include <span>
#include <vector>

#include "augward/model.hpp"
#include "augward/train_config.hpp"

namespace augward {

// One augmentation draw in the correlation study: squared representation
// distance against the graph distance, plus the aware head's output under
// both argument orderings (diagnostic for its asymmetry).
struct CorrelationRow {
  double p = 0.0;
  double repr_sq_dist = 0.0;
  double fgwd_value = 0.0;
  double head_fwd = 0.0;
  double head_rev = 0.0;
};

struct CorrelationReport {
  int graph_index = 0;
  std::vector<CorrelationRow> rows;
  double pcc_value = 0.0;  // PCC(repr_sq_dist, fgwd_value) over all rows
};

// Samples one graph (uniform, seeded), draws `samples_per_p` augmentations
// for every ratio in p_list, and correlates ||z_G - z_G+||^2 with FGWD.
CorrelationReport correlation_analysis(const Model& model, const Dataset& ds, AugmentKind kind,
                                       std::span<const double> p_list, int samples_per_p,
                                       double alpha, const FgwConfig& fgw_cfg,
                                       const AugmentOptions& aug_opts, uint64_t seed);

struct DispersionRow {
  AugmentKind kind = AugmentKind::NodeDrop;
  double p = 0.0;
  int sample = 0;
  double repr_sq_dist = 0.0;
};

struct DispersionGroupSummary {
  AugmentKind kind = AugmentKind::NodeDrop;
  double p = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // population variance
};

struct DispersionReport {
  int graph_index = 0;
  std::vector<DispersionRow> rows;
  std::vector<DispersionGroupSummary> summaries;
};

// Distribution of ||z_G - z_G+||^2 for every augmentation kind at each p.
DispersionReport dispersion_analysis(const Model& model, const Dataset& ds,
                                     std::span<const double> p_list, int samples_per_p,
                                     const AugmentOptions& aug_opts, uint64_t seed);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace augward
