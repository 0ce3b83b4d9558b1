#include "commands.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "augward/analysis.hpp"
#include "augward/checkpoint.hpp"
#include "augward/errors.hpp"
#include "augward/stats.hpp"
#include "augward/synthetic.hpp"
#include "augward/tu_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace augward::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string hex64(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void warn_grids(const TrainConfig& cfg) {
  for (const std::string& w : grid_warnings(cfg)) std::cerr << "warning: " << w << "\n";
}

Graph graph_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  Graph g;
  try {
    g.num_nodes = doc.at("nodes").get<int>();
    for (const auto& e : doc.value("edges", json::array()))
      g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    const auto& feats = doc.at("features");
    if (static_cast<int>(feats.size()) != g.num_nodes)
      throw DataError(path + ": features row count " + std::to_string(feats.size()) +
                      " != nodes " + std::to_string(g.num_nodes));
    const int d = feats.empty() ? 1 : static_cast<int>(feats.at(0).size());
    g.features = Mat(g.num_nodes, d);
    for (int i = 0; i < g.num_nodes; ++i) {
      const auto& row = feats.at(i);
      if (static_cast<int>(row.size()) != d) throw DataError(path + ": ragged feature rows");
      for (int j = 0; j < d; ++j) g.features(i, j) = row.at(j).get<double>();
    }
    if (doc.contains("label")) g.label = doc.at("label").get<int>();
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  g.canonicalize_and_check();
  return g;
}

// Output names are relative to the manifest's directory so the manifest is
// byte-identical for identical runs regardless of where they land.
json manifest_json(const TrainOutputs& out) {
  json cfg_obj = json::object();
  for (const auto& [k, v] : config_items(out.config)) cfg_obj[k] = v;
  return json{
      {"artifact", "augward"},
      {"version", kVersion},
      {"config", cfg_obj},
      {"dataset",
       {{"name", out.dataset.name},
        {"fingerprint", hex64(dataset_fingerprint(out.dataset))},
        {"num_graphs", out.dataset.size()},
        {"num_classes", out.dataset.num_classes},
        {"feature_dim", out.dataset.feature_dim()},
        {"train_size", out.split.train_indices.size()},
        {"test_size", out.split.test_indices.size()}}},
      {"outputs",
       {{"metrics_csv", "metrics.csv"},
        {"checkpoint", "checkpoint.bin"},
        {"timing_csv", "timing.csv"}}},
  };
}

void write_manifest(const TrainOutputs& out, const std::string& out_dir) {
  std::ofstream file(fs::path(out_dir) / "manifest.json", std::ios::binary);
  if (!file) throw DataError("cannot write manifest under " + out_dir);
  file << manifest_json(out).dump(2) << "\n";
}

// Analysis commands write a sidecar manifest next to their CSV before any
// computation starts.
void write_analysis_manifest(const std::string& out_csv, const json& params) {
  std::ofstream file(out_csv + ".manifest.json", std::ios::binary);
  if (!file) throw DataError("cannot write manifest for " + out_csv);
  json doc{{"artifact", "augward"}, {"version", kVersion}, {"params", params}};
  file << doc.dump(2) << "\n";
}

AugmentKind parse_kind(const std::string& s) { return augment_kind_from_string(s); }

}  // namespace

TrainConfig apply_overrides(TrainConfig cfg, const Overrides& ov) {
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.alpha) cfg.alpha = *ov.alpha;
  if (ov.p) cfg.p = *ov.p;
  validate_config(cfg);
  return cfg;
}

Dataset load_dataset(const TrainConfig& cfg, const std::string& data_dir) {
  if (cfg.dataset == "synthetic")
    return make_cycles_stars(cfg.synthetic_size, cfg.synthetic_seed);
  return load_tu_dataset(data_dir, cfg.dataset);
}

TrainOutputs run_training_job(const TrainConfig& cfg, const std::string& data_dir) {
  TrainOutputs out{TrainResult{}, load_dataset(cfg, data_dir), Split{}, cfg};
  out.split = stratified_split(out.dataset, cfg.test_fraction, cfg.seed);
  out.result = train(out.dataset, out.split, cfg);
  return out;
}

void write_run_outputs(const TrainOutputs& out, const std::string& out_dir) {
  fs::create_directories(out_dir);
  write_metrics_csv((fs::path(out_dir) / "metrics.csv").string(), out.result.metrics);
  write_timing_csv((fs::path(out_dir) / "timing.csv").string(), out.result.metrics);
  save_checkpoint(out.result.model, (fs::path(out_dir) / "checkpoint.bin").string());
}

int cmd_train(const std::string& config_path, const std::string& data_dir,
              const std::string& out_dir, const Overrides& ov) {
  const TrainConfig cfg = apply_overrides(parse_config_file(config_path), ov);
  warn_grids(cfg);
  TrainOutputs out{TrainResult{}, load_dataset(cfg, data_dir), Split{}, cfg};
  out.split = stratified_split(out.dataset, cfg.test_fraction, cfg.seed);
  fs::create_directories(out_dir);
  write_manifest(out, out_dir);
  out.result = train(out.dataset, out.split, cfg);
  write_run_outputs(out, out_dir);

  const EpochMetrics& last = out.result.metrics.back();
  double wall_total = 0.0, wall_fgwd = 0.0;
  for (const EpochMetrics& em : out.result.metrics) {
    wall_total += em.wall.total();
    wall_fgwd += em.wall.fgwd;
  }
  std::cout << "dataset " << out.dataset.name << ": " << out.dataset.size() << " graphs, "
            << out.dataset.num_classes << " classes\n"
            << "model parameters: " << out.result.model.param_count() << "\n"
            << "final train_acc " << fmt9(last.train_acc) << ", test_acc "
            << fmt9(last.test_acc) << "\n"
            << "fgwd share of wall time: "
            << fmt9(wall_total > 0.0 ? wall_fgwd / wall_total : 0.0) << "\n";
  return 0;
}

int cmd_fgwd(const std::string& graph_a_path, const std::string& graph_b_path, double alpha,
             const std::string& structure) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
  FgwConfig cfg;
  if (structure == "adjacency")
    cfg.structure = StructureKind::Adjacency;
  else if (structure != "shortest_path")
    throw ConfigError("structure must be shortest_path or adjacency");
  const Graph a = graph_from_json(graph_a_path);
  const Graph b = graph_from_json(graph_b_path);
  const FgwResult res = fgwd(a, b, alpha, cfg);
  std::cout << "value " << fmt9(res.value) << "\n"
            << "wd_part " << fmt9(res.wd_part) << "\n"
            << "gwd_part " << fmt9(res.gwd_part) << "\n"
            << "iterations " << res.iterations << "\n"
            << "converged " << (res.converged ? "true" : "false") << "\n";
  return 0;
}

std::vector<double> parse_p_list(const std::string& csv) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    size_t pos = 0;
    const double v = std::stod(cur, &pos);
    if (pos != cur.size()) throw ConfigError("bad p value '" + cur + "'");
    out.push_back(v);
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',')
      flush();
    else if (!std::isspace(static_cast<unsigned char>(c)))
      cur += c;
  }
  flush();
  for (double p : out)
    if (p < 0.0 || p > 0.5) throw ConfigError("p values must be in [0, 0.5]");
  return out;
}

int cmd_correlation(const std::string& data_dir, const std::string& dataset,
                    const std::string& checkpoint_path, const std::string& out_csv,
                    const std::vector<double>& p_list, double alpha, int samples_per_p,
                    const std::string& augment_kind, uint64_t seed) {
  if (p_list.empty()) throw ConfigError("correlation needs a non-empty p list");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
  TrainConfig cfg;
  cfg.dataset = dataset;
  const Dataset ds = load_dataset(cfg, data_dir);
  const Model model = load_checkpoint(checkpoint_path);
  const AugmentOptions opts = cfg.augment_options(ds);
  write_analysis_manifest(out_csv, json{{"command", "correlation"},
                                        {"dataset", dataset},
                                        {"fingerprint", hex64(dataset_fingerprint(ds))},
                                        {"checkpoint", fs::path(checkpoint_path).filename().string()},
                                        {"p_list", p_list},
                                        {"alpha", alpha},
                                        {"samples_per_p", samples_per_p},
                                        {"augment", augment_kind},
                                        {"seed", seed}});
  const CorrelationReport report = correlation_analysis(
      model, ds, parse_kind(augment_kind), p_list, samples_per_p, alpha, cfg.fgw_config(), opts,
      seed);

  std::ofstream out(out_csv, std::ios::binary);
  if (!out) throw DataError("cannot write " + out_csv);
  out << "p,repr_sq_dist,fgwd,head_fwd,head_rev\n";
  for (const CorrelationRow& row : report.rows)
    out << fmt9(row.p) << ',' << fmt9(row.repr_sq_dist) << ',' << fmt9(row.fgwd_value) << ','
        << fmt9(row.head_fwd) << ',' << fmt9(row.head_rev) << '\n';
  out << "# graph_index " << report.graph_index << "\n";
  out << "# pcc " << fmt9(report.pcc_value) << "\n";
  std::cout << "rows " << report.rows.size() << "\n"
            << "graph_index " << report.graph_index << "\n"
            << "pcc " << fmt9(report.pcc_value) << "\n";
  return 0;
}

int cmd_dispersion(const std::string& data_dir, const std::string& dataset,
                   const std::string& checkpoint_path, const std::vector<double>& p_list,
                   const std::string& out_csv, int samples_per_p, uint64_t seed) {
  if (p_list.empty()) throw ConfigError("dispersion needs a non-empty p list");
  TrainConfig cfg;
  cfg.dataset = dataset;
  const Dataset ds = load_dataset(cfg, data_dir);
  const Model model = load_checkpoint(checkpoint_path);
  write_analysis_manifest(out_csv, json{{"command", "dispersion"},
                                        {"dataset", dataset},
                                        {"fingerprint", hex64(dataset_fingerprint(ds))},
                                        {"checkpoint", fs::path(checkpoint_path).filename().string()},
                                        {"p_list", p_list},
                                        {"samples_per_p", samples_per_p},
                                        {"seed", seed}});
  const DispersionReport report =
      dispersion_analysis(model, ds, p_list, samples_per_p, cfg.augment_options(ds), seed);

  std::ofstream out(out_csv, std::ios::binary);
  if (!out) throw DataError("cannot write " + out_csv);
  out << "kind,p,sample,repr_sq_dist\n";
  for (const DispersionRow& row : report.rows)
    out << to_string(row.kind) << ',' << fmt9(row.p) << ',' << row.sample << ','
        << fmt9(row.repr_sq_dist) << '\n';
  for (const DispersionGroupSummary& s : report.summaries)
    out << "# summary " << to_string(s.kind) << " p=" << fmt9(s.p) << " mean=" << fmt9(s.mean)
        << " var=" << fmt9(s.variance) << "\n";
  std::cout << "rows " << report.rows.size() << "\n";
  for (const DispersionGroupSummary& s : report.summaries)
    std::cout << to_string(s.kind) << " p=" << fmt9(s.p) << " mean=" << fmt9(s.mean)
              << " var=" << fmt9(s.variance) << "\n";
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& data_dir,
               const std::string& out_dir, const Overrides& ov) {
  const TrainConfig base_cfg = apply_overrides(parse_config_file(config_path), ov);
  warn_grids(base_cfg);
  struct Variant {
    const char* name;
    std::optional<DiffMetric> metric;  // nullopt = baseline
    bool with_cr;
  };
  const Variant ladder[] = {
      {"baseline", std::nullopt, false},
      {"ratio_p", DiffMetric::RatioP, false},
      {"node_feat", DiffMetric::NodeFeat, false},
      {"adj_mat", DiffMetric::AdjMat, false},
      {"edge_jaccard", DiffMetric::EdgeJaccard, false},
      {"fgwd", DiffMetric::Fgwd, false},
      {"fgwd_cr", DiffMetric::Fgwd, true},
  };
  fs::create_directories(out_dir);
  {
    const Dataset ds = load_dataset(base_cfg, data_dir);
    json cfg_obj = json::object();
    for (const auto& [k, v] : config_items(base_cfg)) cfg_obj[k] = v;
    json variants = json::array();
    for (const Variant& v : ladder) variants.push_back(v.name);
    std::ofstream file(fs::path(out_dir) / "manifest.json", std::ios::binary);
    if (!file) throw DataError("cannot write manifest under " + out_dir);
    file << json{{"artifact", "augward"},
                 {"version", kVersion},
                 {"command", "ablate"},
                 {"config", cfg_obj},
                 {"dataset",
                  {{"name", ds.name}, {"fingerprint", hex64(dataset_fingerprint(ds))}}},
                 {"variants", variants}}
                .dump(2)
         << "\n";
  }
  std::ofstream table(fs::path(out_dir) / "ablation.csv", std::ios::binary);
  if (!table) throw DataError("cannot write ablation.csv under " + out_dir);
  table << "variant,diff_metric,lambda_aware,lambda_cr,final_total,final_base,final_aware,"
           "final_cr,train_acc,test_acc\n";
  for (const Variant& variant : ladder) {
    TrainConfig cfg = base_cfg;
    if (variant.metric) {
      cfg.diff_metric = *variant.metric;
      cfg.lambda_aware = base_cfg.lambda_aware;
    } else {
      cfg.lambda_aware = 0.0;
    }
    cfg.lambda_cr = variant.with_cr ? base_cfg.lambda_cr : 0.0;
    std::cout << "ablate variant " << variant.name << "...\n" << std::flush;
    const TrainOutputs out = run_training_job(cfg, data_dir);
    write_run_outputs(out, (fs::path(out_dir) / variant.name).string());
    const EpochMetrics& last = out.result.metrics.back();
    table << variant.name << ',' << (variant.metric ? to_string(*variant.metric) : "none") << ','
          << fmt9(cfg.lambda_aware) << ',' << fmt9(cfg.lambda_cr) << ',' << fmt9(last.total)
          << ',' << fmt9(last.base) << ',' << fmt9(last.aware) << ',' << fmt9(last.cr) << ','
          << fmt9(last.train_acc) << ',' << fmt9(last.test_acc) << '\n';
  }
  std::cout << "ablation table written to " << (fs::path(out_dir) / "ablation.csv").string()
            << "\n";
  return 0;
}

}  // namespace augward::cli
