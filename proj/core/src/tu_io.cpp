#include "augward/tu_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "augward/errors.hpp"

namespace fs = std::filesystem;

namespace augward {
namespace {

std::string loc(const std::string& file, size_t line) {
  return file + ":" + std::to_string(line) + ": ";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
  }
  return out;
}

long parse_int(const std::string& tok, const std::string& file, size_t line) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw DataError(loc(file, line) + "expected integer, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw DataError(loc(file, line) + "expected integer, got '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const std::string& file, size_t line) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw DataError(loc(file, line) + "expected number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw DataError(loc(file, line) + "expected number, got '" + tok + "'");
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool nonblank(const std::string& s) {
  return s.find_first_not_of(" \t") != std::string::npos;
}

}  // namespace

Dataset load_tu_dataset(const std::string& dir_path, const std::string& name) {
  const std::string f_adj = (fs::path(dir_path) / (name + "_A.txt")).string();
  const std::string f_ind = (fs::path(dir_path) / (name + "_graph_indicator.txt")).string();
  const std::string f_lab = (fs::path(dir_path) / (name + "_graph_labels.txt")).string();
  const std::string f_nlab = (fs::path(dir_path) / (name + "_node_labels.txt")).string();
  const std::string f_nattr = (fs::path(dir_path) / (name + "_node_attributes.txt")).string();

  for (const std::string* f : {&f_adj, &f_ind, &f_lab})
    if (!fs::exists(*f)) throw DataError("missing mandatory file " + *f);

  // Graph indicator: node -> graph, node local ids in order of appearance.
  const auto ind_lines = read_lines(f_ind);
  std::vector<int> node_graph;   // 0-indexed graph per global node
  std::vector<int> node_local;   // local id per global node
  int num_graphs = 0;
  {
    std::vector<int> counts;
    size_t ln = 0;
    for (const auto& line : ind_lines) {
      ++ln;
      if (!nonblank(line)) continue;
      long gid = parse_int(line, f_ind, ln);
      if (gid < 1) throw DataError(loc(f_ind, ln) + "graph id must be >= 1");
      if (gid > static_cast<long>(counts.size())) counts.resize(gid, 0);
      node_graph.push_back(static_cast<int>(gid) - 1);
      node_local.push_back(counts[gid - 1]++);
    }
    num_graphs = static_cast<int>(counts.size());
    for (int g = 0; g < num_graphs; ++g)
      if (counts[g] == 0)
        throw DataError(f_ind + ": graph " + std::to_string(g + 1) + " has no nodes");
  }
  const int num_nodes_total = static_cast<int>(node_graph.size());

  // Graph labels, remapped to contiguous [1, C].
  std::vector<long> raw_labels;
  {
    const auto lines = read_lines(f_lab);
    size_t ln = 0;
    for (const auto& line : lines) {
      ++ln;
      if (!nonblank(line)) continue;
      raw_labels.push_back(parse_int(line, f_lab, ln));
    }
    if (static_cast<int>(raw_labels.size()) != num_graphs)
      throw DataError(f_lab + ": " + std::to_string(raw_labels.size()) + " labels for " +
                      std::to_string(num_graphs) + " graphs");
  }
  std::map<long, int> label_map;
  for (long l : raw_labels) label_map.emplace(l, 0);
  {
    int next = 1;
    for (auto& [raw, mapped] : label_map) mapped = next++;
  }

  // Optional node labels -> one-hot.
  std::vector<long> node_labels;
  std::map<long, int> nlab_map;
  if (fs::exists(f_nlab)) {
    const auto lines = read_lines(f_nlab);
    size_t ln = 0;
    for (const auto& line : lines) {
      ++ln;
      if (!nonblank(line)) continue;
      node_labels.push_back(parse_int(line, f_nlab, ln));
    }
    if (static_cast<int>(node_labels.size()) != num_nodes_total)
      throw DataError(f_nlab + ": " + std::to_string(node_labels.size()) + " rows for " +
                      std::to_string(num_nodes_total) + " nodes");
    for (long l : node_labels) nlab_map.emplace(l, 0);
    int next = 0;
    for (auto& [raw, idx] : nlab_map) idx = next++;
  }

  // Optional node attributes.
  std::vector<std::vector<double>> node_attrs;
  int attr_dim = 0;
  if (fs::exists(f_nattr)) {
    const auto lines = read_lines(f_nattr);
    size_t ln = 0;
    for (const auto& line : lines) {
      ++ln;
      if (!nonblank(line)) continue;
      const auto toks = split_csv(line);
      std::vector<double> row;
      row.reserve(toks.size());
      for (const auto& t : toks) row.push_back(parse_double(t, f_nattr, ln));
      if (node_attrs.empty()) {
        attr_dim = static_cast<int>(row.size());
      } else if (static_cast<int>(row.size()) != attr_dim) {
        throw DataError(loc(f_nattr, ln) + "ragged attribute row: got " +
                        std::to_string(row.size()) + " values, expected " +
                        std::to_string(attr_dim));
      }
      node_attrs.push_back(std::move(row));
    }
    if (static_cast<int>(node_attrs.size()) != num_nodes_total)
      throw DataError(f_nattr + ": " + std::to_string(node_attrs.size()) + " rows for " +
                      std::to_string(num_nodes_total) + " nodes");
  }

  const int onehot_dim = static_cast<int>(nlab_map.size());
  const int d = (onehot_dim + attr_dim) > 0 ? onehot_dim + attr_dim : 1;

  Dataset ds;
  ds.name = name;
  ds.num_classes = static_cast<int>(label_map.size());
  ds.graphs.resize(num_graphs);
  {
    std::vector<int> sizes(num_graphs, 0);
    for (int v = 0; v < num_nodes_total; ++v) ++sizes[node_graph[v]];
    for (int g = 0; g < num_graphs; ++g) {
      ds.graphs[g].num_nodes = sizes[g];
      ds.graphs[g].features = Mat(sizes[g], d);
      ds.graphs[g].label = label_map.at(raw_labels[g]);
    }
  }
  for (int v = 0; v < num_nodes_total; ++v) {
    Graph& g = ds.graphs[node_graph[v]];
    const int r = node_local[v];
    if (onehot_dim + attr_dim == 0) {
      g.features(r, 0) = 1.0;
    } else {
      if (onehot_dim > 0) g.features(r, nlab_map.at(node_labels[v])) = 1.0;
      for (int j = 0; j < attr_dim; ++j) g.features(r, onehot_dim + j) = node_attrs[v][j];
    }
  }

  // Edges: collapse duplicate directed entries, reject cross-graph edges.
  {
    const auto lines = read_lines(f_adj);
    std::vector<std::set<std::pair<int, int>>> edge_sets(num_graphs);
    size_t ln = 0;
    for (const auto& line : lines) {
      ++ln;
      if (!nonblank(line)) continue;
      const auto toks = split_csv(line);
      if (toks.size() != 2)
        throw DataError(loc(f_adj, ln) + "expected 'u, v', got '" + line + "'");
      long u = parse_int(toks[0], f_adj, ln);
      long v = parse_int(toks[1], f_adj, ln);
      if (u < 1 || u > num_nodes_total || v < 1 || v > num_nodes_total)
        throw DataError(loc(f_adj, ln) + "node id out of range");
      const int gu = node_graph[u - 1], gv = node_graph[v - 1];
      if (gu != gv)
        throw DataError(loc(f_adj, ln) + "edge crosses graphs " + std::to_string(gu + 1) +
                        " and " + std::to_string(gv + 1));
      int lu = node_local[u - 1], lv = node_local[v - 1];
      if (lu == lv) throw DataError(loc(f_adj, ln) + "self-loop on node " + std::to_string(u));
      if (lu > lv) std::swap(lu, lv);
      edge_sets[gu].emplace(lu, lv);
    }
    for (int g = 0; g < num_graphs; ++g) {
      ds.graphs[g].edges.assign(edge_sets[g].begin(), edge_sets[g].end());
      ds.graphs[g].canonicalize_and_check();
    }
  }
  return ds;
}

void save_tu_dataset(const Dataset& ds, const std::string& dir_path) {
  fs::create_directories(dir_path);
  const std::string base = (fs::path(dir_path) / ds.name).string();
  std::ofstream adj(base + "_A.txt");
  std::ofstream ind(base + "_graph_indicator.txt");
  std::ofstream lab(base + "_graph_labels.txt");
  std::ofstream attr(base + "_node_attributes.txt");
  if (!adj || !ind || !lab || !attr) throw DataError("cannot write TU files under " + dir_path);

  char buf[64];
  int offset = 0;
  for (int gi = 0; gi < ds.size(); ++gi) {
    const Graph& g = ds.graphs[gi];
    for (int v = 0; v < g.num_nodes; ++v) {
      ind << (gi + 1) << "\n";
      for (int j = 0; j < g.feature_dim(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", g.features(v, j));
        attr << (j ? ", " : "") << buf;
      }
      attr << "\n";
    }
    for (auto [u, v] : g.edges) {
      adj << (offset + u + 1) << ", " << (offset + v + 1) << "\n";
      adj << (offset + v + 1) << ", " << (offset + u + 1) << "\n";
    }
    lab << g.label.value_or(0) << "\n";
    offset += g.num_nodes;
  }
}

}  // namespace augward
