#pragma once

#include <string>
#include <vector>

#include "augward/adam.hpp"
#include "augward/train_config.hpp"

namespace augward {

// Measured wall-clock seconds per epoch phase.
struct EpochTiming {
  double augment = 0.0;
  double fgwd = 0.0;
  double forward_backward = 0.0;
  double other = 0.0;

  double total() const { return augment + fgwd + forward_backward + other; }
};

// Deterministic work counters per epoch; these populate the t_* columns of
// the byte-stable metrics CSV (wall-clock goes to the timing sidecar).
struct EpochWork {
  long augment_draws = 0;        // augmentation operator invocations
  long fgw_iterations = 0;       // conditional-gradient iterations in solves
  long tape_nodes = 0;           // autodiff nodes executed forward+backward
  long optimizer_updates = 0;    // parameter tensors updated by Adam
};

struct EpochMetrics {
  int epoch = 0;
  double total = 0.0;   // mean of base + lambda_aware*aware + lambda_cr*cr
  double base = 0.0;    // mean supervised loss
  double aware = 0.0;   // mean unweighted aware loss
  double cr = 0.0;      // mean unweighted consistency loss
  double train_acc = 0.0;
  double test_acc = 0.0;
  EpochTiming wall;
  EpochWork work;
};

struct TrainResult {
  Model model;
  std::vector<EpochMetrics> metrics;
};

// Supervised AugWard training loop. Per epoch: shuffle the train indices,
// sample one augmentation per graph, compute the difference target outside
// the tape, forward both graphs through the shared encoder, backpropagate
// the batch-mean total loss and take one Adam step per batch. Evaluation
// always runs on the original graphs. Deterministic given (ds, split, cfg).
TrainResult train(const Dataset& ds, const Split& split, const TrainConfig& cfg);

// Fraction of argmax-correct predictions over ds[indices]; argmax ties break
// toward the smaller class index. Errors on an empty index list.
double evaluate(const Model& model, const Dataset& ds, std::span<const int> indices);

// Byte-stable metrics CSV: header
//   epoch,total,base,aware,cr,train_acc,test_acc,t_augment,t_fgwd,t_fb,t_other
// with the t_* columns from the deterministic work counters, 9 significant
// digits, LF line endings.
void write_metrics_csv(const std::string& path, std::span<const EpochMetrics> metrics);
std::string metrics_csv_text(std::span<const EpochMetrics> metrics);

// Volatile sidecar with the measured wall-clock split per epoch.
void write_timing_csv(const std::string& path, std::span<const EpochMetrics> metrics);

}  // namespace augward
