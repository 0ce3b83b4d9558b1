#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "augward/rng.hpp"

namespace augward::ad {

class Tape;

// Handle into a tape-owned node. Cheap to copy; lifetime bound to the tape.
class Tensor {
 public:
  Tensor() = default;

  int rows() const;
  int cols() const;
  std::span<const double> value() const;
  std::span<const double> grad() const;
  bool requires_grad() const;
  bool valid() const { return node_ >= 0; }
  double scalar() const;  // value of a (1,1) tensor

 private:
  friend class Tape;
  Tensor(Tape* t, int node) : tape_(t), node_(node) {}
  Tape* tape_ = nullptr;
  int node_ = -1;
};

// Records primitive applications in execution order (which is a topological
// order) and replays adjoints in reverse. One tape per training step; a tape
// is confined to a single thread.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor leaf(int rows, int cols, std::vector<double> data, bool requires_grad);
  Tensor constant(int rows, int cols, std::vector<double> data) {
    return leaf(rows, cols, std::move(data), false);
  }

  // Seeds d(loss)/d(loss) = 1 and accumulates d(loss)/d(node) into the grad
  // buffer of every requires_grad node. Grads accumulate across calls until
  // zero_grad(). Throws if loss is not a scalar or lives on another tape.
  void backward(Tensor loss);

  void zero_grad();
  size_t size() const { return nodes_.size(); }

  // --- primitives ---
  Tensor matmul(Tensor a, Tensor b);
  // Elementwise add; also accepts b of shape (1, k) broadcast over a's rows.
  Tensor add(Tensor a, Tensor b);
  Tensor scale(Tensor a, double s);
  Tensor relu(Tensor a);
  // Sum over rows: (n, k) -> (1, k).
  Tensor row_sum(Tensor a);
  // Sum of all entries: (n, k) -> (1, 1).
  Tensor sum_all(Tensor a);
  Tensor segment_sum(Tensor values, std::span<const int> segment_ids, int num_segments);
  Tensor gather_rows(Tensor a, std::span<const int> row_ids);
  Tensor concat_rows(std::span<const Tensor> parts);
  Tensor softmax_row(Tensor a);
  Tensor log(Tensor a);
  Tensor clamp_min(Tensor a, double floor);
  Tensor elementwise_mul(Tensor a, Tensor b);
  // Sum of squared differences against a constant target; (1,1) output.
  Tensor mse_scalar(Tensor pred, std::span<const double> target);
  Tensor mse_scalar(Tensor pred, double target);
  // Inverted dropout; identity when !train or rate == 0.
  Tensor dropout(Tensor a, double rate, Rng& rng, bool train);

 private:
  struct Node {
    int rows = 0, cols = 0;
    std::vector<double> val;
    std::vector<double> grad;  // allocated iff requires_grad
    bool requires_grad = false;
    // Accumulates input adjoints from this node's adjoint. adj is indexed by
    // node id; entries are lazily allocated and zero-filled.
    std::function<void(std::vector<std::vector<double>>& adj)> bw;
  };

  friend class Tensor;
  Node& at(Tensor t) { return *nodes_[t.node_]; }
  const Node& at(Tensor t) const { return *nodes_[t.node_]; }
  Tensor make(int rows, int cols, bool requires_grad);
  void check_mine(Tensor t, const char* op) const;

  std::vector<std::unique_ptr<Node>> nodes_;
};

// Central-difference check of reverse-mode gradients. Rebuilds the program
// per evaluation, so any randomness inside must be seeded identically on
// every call. Returns the worst relative error max(|ad - fd|) scaled by
// max(1, |ad|, |fd|) over all input coordinates.
struct GradcheckInput {
  int rows = 0, cols = 0;
  std::vector<double> values;
};

using TensorProgram = std::function<Tensor(Tape&, std::vector<Tensor>&)>;

double gradcheck(const TensorProgram& program, const std::vector<GradcheckInput>& inputs,
                 double step = 1e-5);

}  // namespace augward::ad
