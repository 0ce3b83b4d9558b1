#pragma once

#include <string>

#include "augward/augment.hpp"
#include "augward/fgw.hpp"

namespace augward {

enum class DiffMetric { RatioP, NodeFeat, AdjMat, EdgeJaccard, Fgwd };

const char* to_string(DiffMetric m);
DiffMetric diff_metric_from_string(const std::string& s);

// Graph-level difference D(G, G+) between an augmented pair. Aligned
// variants scatter augmented rows/edges back to original indices via the
// pair's provenance, zero-filling dropped nodes:
//   RatioP      -> p
//   NodeFeat    -> ||X - X+_aligned||_F / n
//   AdjMat      -> ||A - A+_aligned||_F / n
//   EdgeJaccard -> 1 - |E n E+| / |E u E+|  (0 when both edge sets empty)
//   Fgwd        -> fgwd(original, augmented, alpha).value
double diff_metric(const AugmentedPair& pair, DiffMetric kind, double alpha,
                   const FgwConfig& fgw_cfg = {});

}  // namespace augward
