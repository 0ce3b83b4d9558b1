#pragma once

#include <optional>
#include <string>
#include <vector>

#include "augward/train_config.hpp"
#include "augward/trainer.hpp"

namespace augward::cli {

struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> p;
};

TrainConfig apply_overrides(TrainConfig cfg, const Overrides& ov);

// dataset = "synthetic" generates the built-in cycles-vs-stars benchmark;
// anything else loads TU flat files named `dataset` under data_dir.
Dataset load_dataset(const TrainConfig& cfg, const std::string& data_dir);

// Runs a full training job: manifest first, then metrics.csv, timing.csv and
// checkpoint.bin under out_dir. Returns the process exit code.
int cmd_train(const std::string& config_path, const std::string& data_dir,
              const std::string& out_dir, const Overrides& ov);

// Prints value, wd_part, gwd_part, iterations and converged for a pair of
// single-graph JSON documents {"nodes": n, "edges": [[u,v],...],
// "features": [[...],...]}.
int cmd_fgwd(const std::string& graph_a_path, const std::string& graph_b_path, double alpha,
             const std::string& structure);

int cmd_correlation(const std::string& data_dir, const std::string& dataset,
                    const std::string& checkpoint_path, const std::string& out_csv,
                    const std::vector<double>& p_list, double alpha, int samples_per_p,
                    const std::string& augment_kind, uint64_t seed);

int cmd_dispersion(const std::string& data_dir, const std::string& dataset,
                   const std::string& checkpoint_path, const std::vector<double>& p_list,
                   const std::string& out_csv, int samples_per_p, uint64_t seed);

// Trains the 7-variant ladder {baseline, +ratio_p, +node_feat, +adj_mat,
// +edge_jaccard, +fgwd, +fgwd+cr} with a shared seed and writes
// out_dir/ablation.csv plus per-variant metrics.
int cmd_ablate(const std::string& config_path, const std::string& data_dir,
               const std::string& out_dir, const Overrides& ov);

// Helpers shared with the test harnesses.
struct TrainOutputs {
  TrainResult result;
  Dataset dataset;
  Split split;
  TrainConfig config;
};
TrainOutputs run_training_job(const TrainConfig& cfg, const std::string& data_dir);
void write_run_outputs(const TrainOutputs& out, const std::string& out_dir);
std::vector<double> parse_p_list(const std::string& csv);

}  // namespace augward::cli
