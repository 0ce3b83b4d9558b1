#pragma once

#include <span>
#include <vector>

#include "augward/model.hpp"

namespace augward {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<std::vector<double>> m, v;

  static AdamState init(std::span<Param* const> params);
};

// Bias-corrected Adam update applied in place; t is the 1-based step count.
void adam_step(std::span<Param* const> params, std::span<const std::span<const double>> grads,
               AdamState& state, double lr, int t, const AdamConfig& cfg = {});

}  // namespace augward
