#pragma once

#include <string>
#include <vector>

#include "augward/autodiff.hpp"
#include "augward/graph.hpp"

namespace augward {

struct Param {
  std::string name;
  int rows = 0, cols = 0;
  std::vector<double> value;

  size_t count() const { return value.size(); }
};

// Sum-aggregation GIN encoder. Each layer applies
//   h <- MLP(h + segment_sum of neighbor rows)
// (epsilon = 0 combine, MLP = Linear-ReLU-Linear with width `hidden`), and
// the graph embedding concatenates the per-layer node-sum vectors for
// layers 0..L, so embed_dim = in_dim + layers * hidden.
struct GinEncoder {
  int in_dim = 0, hidden = 64, layers = 4;
  std::vector<Param> params;  // per layer: w1, b1, w2, b2

  int embed_dim() const { return in_dim + layers * hidden; }
  static GinEncoder init(int in_dim, int hidden, int layers, Rng rng);
};

// Linear map to |C| logits followed by a row softmax.
struct Classifier {
  int in_dim = 0, num_classes = 0;
  std::vector<Param> params;  // w, b

  static Classifier init(int in_dim, int num_classes, Rng rng);
};

// Single linear map from the concatenated pair embedding to one scalar.
// Deliberately not symmetrized in (z_g, z_gplus).
struct AwareHead {
  int in_dim = 0;  // 2 * embed_dim
  std::vector<Param> params;  // w, b

  static AwareHead init(int embed_dim, Rng rng);
};

struct Model {
  GinEncoder encoder;
  Classifier classifier;
  AwareHead head;

  std::vector<Param*> parameters();
  std::vector<const Param*> parameters() const;
  size_t param_count() const;

  static Model init(int in_dim, int hidden, int layers, int num_classes, uint64_t seed);
};

// Tape leaves aligned with Model::parameters() order.
struct ModelLeaves {
  std::vector<ad::Tensor> encoder;
  std::vector<ad::Tensor> classifier;
  std::vector<ad::Tensor> head;

  std::vector<ad::Tensor> all() const;
};

ModelLeaves make_leaves(ad::Tape& tape, const Model& model, bool requires_grad);

// Graph embedding z as a (1, embed_dim) tensor. Aggregation runs over the
// directed edge list sorted by (dst, src) so accumulation order is canonical.
ad::Tensor encode(ad::Tape& tape, const GinEncoder& enc,
                  std::span<const ad::Tensor> enc_leaves, const Graph& g);

// Class probabilities as a (1, |C|) tensor; rows sum to 1.
ad::Tensor classify(ad::Tape& tape, const Classifier& clf,
                    std::span<const ad::Tensor> clf_leaves, ad::Tensor z);

// Aware-head difference prediction h_w(z_g, z_gplus) as a (1, 1) tensor.
ad::Tensor predict_difference(ad::Tape& tape, const AwareHead& head,
                              std::span<const ad::Tensor> head_leaves, ad::Tensor z_g,
                              ad::Tensor z_gplus);

// Tape-free inference paths; identical arithmetic to the tape forward.
std::vector<double> embed(const Model& model, const Graph& g);
std::vector<double> predict_probs(const Model& model, const Graph& g);
double head_output(const Model& model, std::span<const double> z_g,
                   std::span<const double> z_gplus);

}  // namespace augward
