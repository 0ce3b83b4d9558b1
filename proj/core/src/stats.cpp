#include "augward/stats.hpp"

#include <cmath>
#include <string>

#include "augward/errors.hpp"

namespace augward {

double pcc(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw DataError("pcc: length mismatch " + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()));
  const size_t n = xs.size();
  if (n < 2) throw DataError("pcc needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pcc: zero variance input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace augward
