#include "augward/losses.hpp"

#include <cmath>
#include <vector>

#include "augward/errors.hpp"

namespace augward {

namespace {
constexpr double kLogFloor = 1e-12;
}

ad::Tensor cross_entropy(ad::Tape& tape, ad::Tensor probs, int label) {
  if (probs.rows() != 1) throw DataError("cross_entropy expects a (1, |C|) probability row");
  const int num_classes = probs.cols();
  if (label < 1 || label > num_classes)
    throw DataError("label " + std::to_string(label) + " outside [1, " +
                    std::to_string(num_classes) + "]");
  std::vector<double> onehot(num_classes, 0.0);
  onehot[label - 1] = 1.0;
  ad::Tensor mask = tape.constant(1, num_classes, std::move(onehot));
  ad::Tensor picked = tape.elementwise_mul(mask, tape.log(tape.clamp_min(probs, kLogFloor)));
  return tape.scale(tape.sum_all(picked), -1.0);
}

ad::Tensor loss_aware(ad::Tape& tape, ad::Tensor head_out, double target) {
  if (!std::isfinite(target)) throw NumericError("non-finite difference target");
  return tape.mse_scalar(head_out, target);
}

ad::Tensor loss_cr(ad::Tape& tape, ad::Tensor p_g, ad::Tensor p_gplus) {
  ad::Tensor log_plus = tape.log(tape.clamp_min(p_gplus, kLogFloor));
  return tape.scale(tape.sum_all(tape.elementwise_mul(p_g, log_plus)), -1.0);
}

ad::Tensor loss_augward(ad::Tape& tape, ad::Tensor aware, ad::Tensor cr, double lambda_aware,
                        double lambda_cr) {
  return tape.add(tape.scale(aware, lambda_aware), tape.scale(cr, lambda_cr));
}

ad::Tensor loss_base_supervised(ad::Tape& tape, ad::Tensor p_g, ad::Tensor p_gplus, int label) {
  return tape.add(cross_entropy(tape, p_g, label), cross_entropy(tape, p_gplus, label));
}

ad::Tensor total_loss(ad::Tape& tape, ad::Tensor base, ad::Tensor augward_part) {
  return tape.add(base, augward_part);
}

}  // namespace augward
