#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "augward/graph.hpp"
#include "augward/rng.hpp"

namespace augward::test {

// Random simple undirected graph with edge_prob density and random features.
inline Graph random_graph(int num_nodes, int feature_dim, double edge_prob, Rng& rng) {
  Graph g;
  g.num_nodes = num_nodes;
  for (int u = 0; u < num_nodes; ++u)
    for (int v = u + 1; v < num_nodes; ++v)
      if (rng.next_double() < edge_prob) g.edges.emplace_back(u, v);
  g.features = Mat(num_nodes, feature_dim);
  for (int i = 0; i < num_nodes; ++i)
    for (int j = 0; j < feature_dim; ++j) g.features(i, j) = 2.0 * rng.next_double() - 1.0;
  g.label = 1;
  g.canonicalize_and_check();
  return g;
}

inline Mat random_mat(int rows, int cols, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Mat m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = lo + (hi - lo) * rng.next_double();
  return m;
}

// Scratch directory under the system temp path, wiped on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("augward_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }
  const std::filesystem::path& path() const { return dir_; }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& contents) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << contents;
  }

 private:
  std::filesystem::path dir_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace augward::test
