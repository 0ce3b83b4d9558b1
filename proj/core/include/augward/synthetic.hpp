#pragma once

#include "augward/graph.hpp"

namespace augward {

// Toy two-class benchmark: label 1 = cycle C_n, label 2 = star K_{1,n-1},
// alternating, node counts uniform in [6, 20], per-node features
// [1.0, degree]. Separable from degree statistics alone.
Dataset make_cycles_stars(int num_graphs, uint64_t seed);

}  // namespace augward
