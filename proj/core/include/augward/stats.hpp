#pragma once

#include <span>

namespace augward {

// Pearson correlation coefficient. Throws DataError on length mismatch,
// fewer than 2 points, or zero variance in either argument (degenerate
// inputs are an error, not a silent 0).
double pcc(std::span<const double> xs, std::span<const double> ys);

}  // namespace augward
