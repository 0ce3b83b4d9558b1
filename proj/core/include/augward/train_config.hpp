#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augward/augment.hpp"
#include "augward/diff_metric.hpp"

namespace augward {

// All run hyperparameters. Config files are flat `key = value` lines whose
// keys mirror these field names; unknown keys are errors.
struct TrainConfig {
  std::string dataset = "synthetic";
  AugmentKind augment = AugmentKind::NodeDrop;
  double p = 0.1;
  double alpha = 0.5;
  double lambda_aware = 0.0;
  double lambda_cr = 0.0;
  DiffMetric diff_metric = DiffMetric::Fgwd;
  double learning_rate = 0.01;
  int epochs = 100;
  int batch_size = 32;
  double dropout = 0.0;
  uint64_t seed = 1;
  int num_layers = 4;
  int hidden_dim = 64;
  double test_fraction = 0.2;
  StructureKind structure_matrix = StructureKind::ShortestPath;
  std::string attr_mask_mode = "mean";  // mean | zero
  bool subgraph_bfs = false;
  double fgw_tol = 1e-8;
  int fgw_max_iter = 1000;
  int fgw_restarts = 3;
  uint64_t synthetic_seed = 7;
  int synthetic_size = 300;

  FgwConfig fgw_config() const;
  AugmentOptions augment_options(const Dataset& ds) const;
};

// Parses a flat key/value config document. Lines are `key = value`, blank
// lines and #-comments allowed. Unknown keys raise ConfigError naming the
// key; hard domain violations (p outside [0, 0.5], alpha outside [0, 1],
// nonpositive epochs/batch) raise ConfigError too.
TrainConfig parse_config_file(const std::string& path);
TrainConfig parse_config_text(const std::string& text, const std::string& origin);

// Soft checks against the reference hyperparameter grids; returns
// warning strings, never throws.
std::vector<std::string> grid_warnings(const TrainConfig& cfg);

// Hard domain validation shared by the parser and programmatic callers.
void validate_config(const TrainConfig& cfg);

// Key/value view in declaration order, e.g. for manifests.
std::vector<std::pair<std::string, std::string>> config_items(const TrainConfig& cfg);

}  // namespace augward
