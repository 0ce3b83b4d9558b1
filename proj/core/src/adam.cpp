#include "augward/adam.hpp"

#include <cmath>

#include "augward/errors.hpp"

namespace augward {

AdamState AdamState::init(std::span<Param* const> params) {
  AdamState st;
  st.m.reserve(params.size());
  st.v.reserve(params.size());
  for (const Param* p : params) {
    st.m.emplace_back(p->count(), 0.0);
    st.v.emplace_back(p->count(), 0.0);
  }
  return st;
}

void adam_step(std::span<Param* const> params, std::span<const std::span<const double>> grads,
               AdamState& state, double lr, int t, const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw DataError("adam_step: parameter, gradient and state counts differ");
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (size_t k = 0; k < params.size(); ++k) {
    Param& p = *params[k];
    const auto g = grads[k];
    if (g.size() != p.count())
      throw DataError("adam_step: gradient size mismatch for " + p.name);
    auto& m = state.m[k];
    auto& v = state.v[k];
    for (size_t i = 0; i < g.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.value[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

}  // namespace augward
