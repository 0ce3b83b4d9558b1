#pragma once

#include "augward/autodiff.hpp"

namespace augward {

// Cross-entropy against a one-hot label, label one-based. Probabilities are
// clamped at 1e-12 before the log.
ad::Tensor cross_entropy(ad::Tape& tape, ad::Tensor probs, int label);

// Squared error between the aware head's prediction and the graph-level
// difference target. The target is a plain constant: no gradient reaches
// the distance solver.
ad::Tensor loss_aware(ad::Tape& tape, ad::Tensor head_out, double target);

// Consistency regularization H(p_g, p_gplus); gradients flow through both
// arguments.
ad::Tensor loss_cr(ad::Tape& tape, ad::Tensor p_g, ad::Tensor p_gplus);

// lambda_aware * aware + lambda_cr * cr.
ad::Tensor loss_augward(ad::Tape& tape, ad::Tensor aware, ad::Tensor cr, double lambda_aware,
                        double lambda_cr);

// Supervised base loss CE(p_g, y) + CE(p_gplus, y).
ad::Tensor loss_base_supervised(ad::Tape& tape, ad::Tensor p_g, ad::Tensor p_gplus, int label);

ad::Tensor total_loss(ad::Tape& tape, ad::Tensor base, ad::Tensor augward_part);

}  // namespace augward
