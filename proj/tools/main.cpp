#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "augward/errors.hpp"
#include "commands.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string data_dir = ".";
  std::string out_dir = "out";
  augward::cli::Overrides overrides;
  std::optional<uint64_t> seed_flag;
  std::optional<double> alpha_flag;
  std::optional<double> p_flag;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AugWard: augmentation-aware graph representation learning"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "run a training experiment");
  CommonArgs train_args;
  train->add_option("--config", train_args.config, "flat key=value config file")->required();
  train->add_option("--data-dir", train_args.data_dir, "directory with TU datasets");
  train->add_option("--out-dir", train_args.out_dir, "output directory");
  train->add_option("--seed", train_args.seed_flag, "override config seed");
  train->add_option("--alpha", train_args.alpha_flag, "override config alpha");
  train->add_option("--p", train_args.p_flag, "override config perturbation ratio");

  // fgwd
  auto* fgwd_cmd = app.add_subcommand("fgwd", "fused Gromov-Wasserstein distance of two graphs");
  std::string graph_a, graph_b, structure = "shortest_path";
  double fgwd_alpha = 0.5;
  fgwd_cmd->add_option("graph_a", graph_a, "first graph (JSON)")->required();
  fgwd_cmd->add_option("graph_b", graph_b, "second graph (JSON)")->required();
  fgwd_cmd->add_option("--alpha", fgwd_alpha, "feature/structure tradeoff in [0, 1]");
  fgwd_cmd->add_option("--structure", structure, "shortest_path | adjacency");

  // correlation
  auto* corr = app.add_subcommand("correlation",
                                  "representation distance vs FGWD over augmentation draws");
  std::string corr_data = ".", corr_dataset = "synthetic", corr_ckpt, corr_csv = "correlation.csv";
  std::string corr_plist = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45";
  std::string corr_kind = "node_drop";
  double corr_alpha = 0.5;
  int corr_samples = 100;
  uint64_t corr_seed = 1;
  corr->add_option("--data-dir", corr_data, "directory with TU datasets");
  corr->add_option("--dataset", corr_dataset, "dataset name or 'synthetic'");
  corr->add_option("--checkpoint", corr_ckpt, "model checkpoint")->required();
  corr->add_option("--out-csv", corr_csv, "output CSV path");
  corr->add_option("--p-list", corr_plist, "comma-separated perturbation ratios");
  corr->add_option("--alpha", corr_alpha, "FGWD alpha");
  corr->add_option("--samples", corr_samples, "augmentation draws per ratio");
  corr->add_option("--augment", corr_kind, "augmentation kind");
  corr->add_option("--seed", corr_seed, "sampling seed");

  // dispersion
  auto* disp = app.add_subcommand("dispersion",
                                  "representation-distance distributions per augmentation kind");
  std::string disp_data = ".", disp_dataset = "synthetic", disp_ckpt, disp_csv = "dispersion.csv";
  std::string disp_plist = "0.2,0.4";
  int disp_samples = 100;
  uint64_t disp_seed = 1;
  disp->add_option("--data-dir", disp_data, "directory with TU datasets");
  disp->add_option("--dataset", disp_dataset, "dataset name or 'synthetic'");
  disp->add_option("--checkpoint", disp_ckpt, "model checkpoint")->required();
  disp->add_option("--out-csv", disp_csv, "output CSV path");
  disp->add_option("--p-list", disp_plist, "comma-separated perturbation ratios");
  disp->add_option("--samples", disp_samples, "augmentation draws per (kind, ratio)");
  disp->add_option("--seed", disp_seed, "sampling seed");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "run the 7-variant difference-metric ladder");
  CommonArgs ablate_args;
  ablate->add_option("--config", ablate_args.config, "flat key=value config file")->required();
  ablate->add_option("--data-dir", ablate_args.data_dir, "directory with TU datasets");
  ablate->add_option("--out-dir", ablate_args.out_dir, "output directory");
  ablate->add_option("--seed", ablate_args.seed_flag, "override config seed");
  ablate->add_option("--alpha", ablate_args.alpha_flag, "override config alpha");
  ablate->add_option("--p", ablate_args.p_flag, "override config perturbation ratio");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) {
      train_args.overrides = {train_args.seed_flag, train_args.alpha_flag, train_args.p_flag};
      return augward::cli::cmd_train(train_args.config, train_args.data_dir, train_args.out_dir,
                                     train_args.overrides);
    }
    if (*fgwd_cmd) return augward::cli::cmd_fgwd(graph_a, graph_b, fgwd_alpha, structure);
    if (*corr)
      return augward::cli::cmd_correlation(corr_data, corr_dataset, corr_ckpt, corr_csv,
                                           augward::cli::parse_p_list(corr_plist), corr_alpha,
                                           corr_samples, corr_kind, corr_seed);
    if (*disp)
      return augward::cli::cmd_dispersion(disp_data, disp_dataset, disp_ckpt,
                                          augward::cli::parse_p_list(disp_plist), disp_csv,
                                          disp_samples, disp_seed);
    if (*ablate) {
      ablate_args.overrides = {ablate_args.seed_flag, ablate_args.alpha_flag,
                               ablate_args.p_flag};
      return augward::cli::cmd_ablate(ablate_args.config, ablate_args.data_dir,
                                      ablate_args.out_dir, ablate_args.overrides);
    }
  } catch (const augward::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const augward::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const augward::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
