#include "augward/train_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "augward/errors.hpp"

namespace augward {

FgwConfig TrainConfig::fgw_config() const {
  FgwConfig cfg;
  cfg.structure = structure_matrix;
  cfg.tol = fgw_tol;
  cfg.max_iter = fgw_max_iter;
  cfg.restarts = fgw_restarts;
  return cfg;
}

AugmentOptions TrainConfig::augment_options(const Dataset& ds) const {
  AugmentOptions opts;
  if (attr_mask_mode == "mean") opts.mask_row = mean_feature_row(ds);
  opts.subgraph_bfs = subgraph_bfs;
  return opts;
}

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void validate_config(const TrainConfig& cfg) {
  if (cfg.p < 0.0 || cfg.p > 0.5)
    throw ConfigError("p must be in [0, 0.5], got " + fmt(cfg.p));
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0)
    throw ConfigError("alpha must be in [0, 1], got " + fmt(cfg.alpha));
  if (cfg.lambda_aware < 0.0 || cfg.lambda_cr < 0.0)
    throw ConfigError("lambda_aware and lambda_cr must be nonnegative");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (cfg.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0)
    throw ConfigError("dropout must be in [0, 1)");
  if (cfg.num_layers < 1 || cfg.hidden_dim < 1)
    throw ConfigError("num_layers and hidden_dim must be >= 1");
  if (cfg.test_fraction <= 0.0 || cfg.test_fraction >= 1.0)
    throw ConfigError("test_fraction must be in (0, 1)");
  if (cfg.attr_mask_mode != "mean" && cfg.attr_mask_mode != "zero")
    throw ConfigError("attr_mask_mode must be 'mean' or 'zero'");
  if (cfg.fgw_tol <= 0.0 || cfg.fgw_max_iter < 1 || cfg.fgw_restarts < 0)
    throw ConfigError("invalid fgw solver settings");
  if (cfg.synthetic_size < 4) throw ConfigError("synthetic_size must be >= 4");
}

TrainConfig parse_config_text(const std::string& text, const std::string& origin) {
  TrainConfig cfg;
  std::istringstream in(text);
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(ln) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "dataset") cfg.dataset = val;
    else if (key == "augment") cfg.augment = augment_kind_from_string(val);
    else if (key == "p") cfg.p = to_double(key, val);
    else if (key == "alpha") cfg.alpha = to_double(key, val);
    else if (key == "lambda_aware") cfg.lambda_aware = to_double(key, val);
    else if (key == "lambda_cr") cfg.lambda_cr = to_double(key, val);
    else if (key == "diff_metric") cfg.diff_metric = diff_metric_from_string(val);
    else if (key == "learning_rate") cfg.learning_rate = to_double(key, val);
    else if (key == "epochs") cfg.epochs = static_cast<int>(to_int(key, val));
    else if (key == "batch_size") cfg.batch_size = static_cast<int>(to_int(key, val));
    else if (key == "dropout") cfg.dropout = to_double(key, val);
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(to_int(key, val));
    else if (key == "num_layers") cfg.num_layers = static_cast<int>(to_int(key, val));
    else if (key == "hidden_dim") cfg.hidden_dim = static_cast<int>(to_int(key, val));
    else if (key == "test_fraction") cfg.test_fraction = to_double(key, val);
    else if (key == "structure_matrix") {
      if (val == "shortest_path") cfg.structure_matrix = StructureKind::ShortestPath;
      else if (val == "adjacency") cfg.structure_matrix = StructureKind::Adjacency;
      else throw ConfigError("key 'structure_matrix': expected shortest_path or adjacency");
    }
    else if (key == "attr_mask_mode") cfg.attr_mask_mode = val;
    else if (key == "subgraph_bfs") cfg.subgraph_bfs = to_bool(key, val);
    else if (key == "fgw_tol") cfg.fgw_tol = to_double(key, val);
    else if (key == "fgw_max_iter") cfg.fgw_max_iter = static_cast<int>(to_int(key, val));
    else if (key == "fgw_restarts") cfg.fgw_restarts = static_cast<int>(to_int(key, val));
    else if (key == "synthetic_seed") cfg.synthetic_seed = static_cast<uint64_t>(to_int(key, val));
    else if (key == "synthetic_size") cfg.synthetic_size = static_cast<int>(to_int(key, val));
    else throw ConfigError(origin + ":" + std::to_string(ln) + ": unknown key '" + key + "'");
  }
  validate_config(cfg);
  return cfg;
}

TrainConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::vector<std::string> grid_warnings(const TrainConfig& cfg) {
  std::vector<std::string> warnings;
  auto in_set = [](double v, std::initializer_list<double> grid) {
    for (double s : grid)
      if (v == s) return true;
    return false;
  };
  if (!in_set(cfg.p, {0.0, 0.05, 0.1, 0.15, 0.2}))
    warnings.push_back("p=" + fmt(cfg.p) + " outside the reference grid {0.05,0.1,0.15,0.2}");
  if (!in_set(cfg.alpha, {0.05, 0.5, 0.95}))
    warnings.push_back("alpha=" + fmt(cfg.alpha) + " outside the reference grid {0.05,0.5,0.95}");
  if (cfg.lambda_aware != 0.0 && !in_set(cfg.lambda_aware, {5, 10, 25, 50, 75, 100}))
    warnings.push_back("lambda_aware=" + fmt(cfg.lambda_aware) +
                       " outside the reference grid {5,10,25,50,75,100}");
  if (!in_set(cfg.lambda_cr, {0, 0.1, 1, 10, 100}))
    warnings.push_back("lambda_cr=" + fmt(cfg.lambda_cr) +
                       " outside the reference grid {0,0.1,1,10,100}");
  if (cfg.batch_size != 32 && cfg.batch_size != 128)
    warnings.push_back("batch_size=" + std::to_string(cfg.batch_size) +
                       " outside the reference grid {32,128}");
  if (cfg.dropout != 0.0 && cfg.dropout != 0.5)
    warnings.push_back("dropout=" + fmt(cfg.dropout) + " outside the reference grid {0,0.5}");
  return warnings;
}

std::vector<std::pair<std::string, std::string>> config_items(const TrainConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> items;
  items.emplace_back("dataset", cfg.dataset);
  items.emplace_back("augment", to_string(cfg.augment));
  items.emplace_back("p", fmt(cfg.p));
  items.emplace_back("alpha", fmt(cfg.alpha));
  items.emplace_back("lambda_aware", fmt(cfg.lambda_aware));
  items.emplace_back("lambda_cr", fmt(cfg.lambda_cr));
  items.emplace_back("diff_metric", to_string(cfg.diff_metric));
  items.emplace_back("learning_rate", fmt(cfg.learning_rate));
  items.emplace_back("epochs", std::to_string(cfg.epochs));
  items.emplace_back("batch_size", std::to_string(cfg.batch_size));
  items.emplace_back("dropout", fmt(cfg.dropout));
  items.emplace_back("seed", std::to_string(cfg.seed));
  items.emplace_back("num_layers", std::to_string(cfg.num_layers));
  items.emplace_back("hidden_dim", std::to_string(cfg.hidden_dim));
  items.emplace_back("test_fraction", fmt(cfg.test_fraction));
  items.emplace_back("structure_matrix", cfg.structure_matrix == StructureKind::ShortestPath
                                             ? "shortest_path"
                                             : "adjacency");
  items.emplace_back("attr_mask_mode", cfg.attr_mask_mode);
  items.emplace_back("subgraph_bfs", cfg.subgraph_bfs ? "true" : "false");
  items.emplace_back("fgw_tol", fmt(cfg.fgw_tol));
  items.emplace_back("fgw_max_iter", std::to_string(cfg.fgw_max_iter));
  items.emplace_back("fgw_restarts", std::to_string(cfg.fgw_restarts));
  items.emplace_back("synthetic_seed", std::to_string(cfg.synthetic_seed));
  items.emplace_back("synthetic_size", std::to_string(cfg.synthetic_size));
  return items;
}

}  // namespace augward
