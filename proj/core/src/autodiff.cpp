#include "augward/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "augward/mat.hpp"

namespace augward::ad {

namespace {

// C(n,m) += A(n,k) * B(k,m)
void mm_acc(const double* a, const double* b, double* c, int n, int k, int m) {
  for (int i = 0; i < n; ++i) {
    const double* arow = a + static_cast<size_t>(i) * k;
    double* crow = c + static_cast<size_t>(i) * m;
    for (int l = 0; l < k; ++l) {
      const double av = arow[l];
      if (av == 0.0) continue;
      const double* brow = b + static_cast<size_t>(l) * m;
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// C(n,k) += A(n,m) * B(k,m)^T
void mm_abt_acc(const double* a, const double* b, double* c, int n, int m, int k) {
  for (int i = 0; i < n; ++i) {
    const double* arow = a + static_cast<size_t>(i) * m;
    double* crow = c + static_cast<size_t>(i) * k;
    for (int j = 0; j < k; ++j) {
      const double* brow = b + static_cast<size_t>(j) * m;
      double s = 0.0;
      for (int l = 0; l < m; ++l) s += arow[l] * brow[l];
      crow[j] += s;
    }
  }
}

// C(k,m) += A(n,k)^T * B(n,m)
void mm_atb_acc(const double* a, const double* b, double* c, int n, int k, int m) {
  for (int l = 0; l < n; ++l) {
    const double* arow = a + static_cast<size_t>(l) * k;
    const double* brow = b + static_cast<size_t>(l) * m;
    for (int i = 0; i < k; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c + static_cast<size_t>(i) * m;
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

[[noreturn]] void shape_error(const char* op, int ar, int ac, int br, int bc) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " + shape_str(ar, ac) +
                              " and " + shape_str(br, bc));
}

std::vector<double>& adj_of(std::vector<std::vector<double>>& adj, int node, size_t len) {
  auto& a = adj[node];
  if (a.empty()) a.assign(len, 0.0);
  return a;
}

}  // namespace

int Tensor::rows() const { return tape_->at(*this).rows; }
int Tensor::cols() const { return tape_->at(*this).cols; }
std::span<const double> Tensor::value() const { return tape_->at(*this).val; }
std::span<const double> Tensor::grad() const { return tape_->at(*this).grad; }
bool Tensor::requires_grad() const { return tape_->at(*this).requires_grad; }

double Tensor::scalar() const {
  const auto& n = tape_->at(*this);
  if (n.rows != 1 || n.cols != 1)
    throw std::invalid_argument("scalar() on tensor of shape " + shape_str(n.rows, n.cols));
  return n.val[0];
}

Tensor Tape::make(int rows, int cols, bool requires_grad) {
  auto node = std::make_unique<Node>();
  node->rows = rows;
  node->cols = cols;
  node->val.assign(static_cast<size_t>(rows) * cols, 0.0);
  node->requires_grad = requires_grad;
  if (requires_grad) node->grad.assign(node->val.size(), 0.0);
  nodes_.push_back(std::move(node));
  return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::check_mine(Tensor t, const char* op) const {
  if (t.tape_ != this || t.node_ < 0 || t.node_ >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument(std::string(op) + ": tensor does not live on this tape");
}

Tensor Tape::leaf(int rows, int cols, std::vector<double> data, bool requires_grad) {
  if (data.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("leaf: data length " + std::to_string(data.size()) +
                                " does not match shape " + shape_str(rows, cols));
  Tensor t = make(rows, cols, requires_grad);
  at(t).val = std::move(data);
  return t;
}

void Tape::backward(Tensor loss) {
  check_mine(loss, "backward");
  Node& ln = at(loss);
  if (ln.rows != 1 || ln.cols != 1)
    throw std::invalid_argument("backward: loss must be scalar, got " +
                                shape_str(ln.rows, ln.cols));
  std::vector<std::vector<double>> adj(nodes_.size());
  adj[loss.node_] = {1.0};
  for (int i = loss.node_; i >= 0; --i) {
    if (adj[i].empty()) continue;
    if (nodes_[i]->bw) nodes_[i]->bw(adj);
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i]->requires_grad || adj[i].empty()) continue;
    auto& g = nodes_[i]->grad;
    for (size_t k = 0; k < g.size(); ++k) g[k] += adj[i][k];
  }
}

void Tape::zero_grad() {
  for (auto& n : nodes_)
    std::fill(n->grad.begin(), n->grad.end(), 0.0);
}

Tensor Tape::matmul(Tensor a, Tensor b) {
  check_mine(a, "matmul");
  check_mine(b, "matmul");
  const Node &na = at(a), &nb = at(b);
  if (na.cols != nb.rows) shape_error("matmul", na.rows, na.cols, nb.rows, nb.cols);
  const int n = na.rows, k = na.cols, m = nb.cols;
  Tensor out = make(n, m, na.requires_grad || nb.requires_grad);
  mm_acc(na.val.data(), nb.val.data(), at(out).val.data(), n, k, m);
  if (at(out).requires_grad) {
    const int ia = a.node_, ib = b.node_, io = out.node_;
    const bool ga = na.requires_grad, gb = nb.requires_grad;
    at(out).bw = [this, ia, ib, io, n, k, m, ga, gb](auto& adj) {
      const auto& d = adj[io];
      if (ga) mm_abt_acc(d.data(), nodes_[ib]->val.data(),
                         adj_of(adj, ia, static_cast<size_t>(n) * k).data(), n, m, k);
      if (gb) mm_atb_acc(nodes_[ia]->val.data(), d.data(),
                         adj_of(adj, ib, static_cast<size_t>(k) * m).data(), n, k, m);
    };
  }
  return out;
}

Tensor Tape::add(Tensor a, Tensor b) {
  check_mine(a, "add");
  check_mine(b, "add");
  const Node &na = at(a), &nb = at(b);
  const bool bcast = (nb.rows == 1 && na.rows != 1 && nb.cols == na.cols);
  if (!bcast && (na.rows != nb.rows || na.cols != nb.cols))
    shape_error("add", na.rows, na.cols, nb.rows, nb.cols);
  Tensor out = make(na.rows, na.cols, na.requires_grad || nb.requires_grad);
  Node& no = at(out);
  for (int i = 0; i < na.rows; ++i)
    for (int j = 0; j < na.cols; ++j)
      no.val[static_cast<size_t>(i) * na.cols + j] =
          na.val[static_cast<size_t>(i) * na.cols + j] +
          nb.val[static_cast<size_t>(bcast ? 0 : i) * na.cols + j];
  if (no.requires_grad) {
    const int ia = a.node_, ib = b.node_, io = out.node_;
    const int rows = na.rows, cols = na.cols;
    const bool ga = na.requires_grad, gb = nb.requires_grad;
    no.bw = [ia, ib, io, rows, cols, bcast, ga, gb](auto& adj) {
      const auto& d = adj[io];
      if (ga) {
        auto& da = adj_of(adj, ia, d.size());
        for (size_t i = 0; i < d.size(); ++i) da[i] += d[i];
      }
      if (gb) {
        auto& db = adj_of(adj, ib, bcast ? cols : d.size());
        if (bcast) {
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) db[j] += d[static_cast<size_t>(i) * cols + j];
        } else {
          for (size_t i = 0; i < d.size(); ++i) db[i] += d[i];
        }
      }
    };
  }
  return out;
}

Tensor Tape::scale(Tensor a, double s) {
  check_mine(a, "scale");
  const Node& na = at(a);
  Tensor out = make(na.rows, na.cols, na.requires_grad);
  Node& no = at(out);
  for (size_t i = 0; i < na.val.size(); ++i) no.val[i] = s * na.val[i];
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    no.bw = [ia, io, s](auto& adj) {
      const auto& d = adj[io];
      auto& da = adj_of(adj, ia, d.size());
      for (size_t i = 0; i < d.size(); ++i) da[i] += s * d[i];
    };
  }
  return out;
}

Tensor Tape::relu(Tensor a) {
  check_mine(a, "relu");
  const Node& na = at(a);
  Tensor out = make(na.rows, na.cols, na.requires_grad);
  Node& no = at(out);
  for (size_t i = 0; i < na.val.size(); ++i) no.val[i] = na.val[i] > 0.0 ? na.val[i] : 0.0;
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    no.bw = [this, ia, io](auto& adj) {
      const auto& d = adj[io];
      const auto& x = nodes_[ia]->val;
      auto& da = adj_of(adj, ia, d.size());
      for (size_t i = 0; i < d.size(); ++i)
        if (x[i] > 0.0) da[i] += d[i];
    };
  }
  return out;
}

Tensor Tape::row_sum(Tensor a) {
  check_mine(a, "row_sum");
  const Node& na = at(a);
  Tensor out = make(1, na.cols, na.requires_grad);
  Node& no = at(out);
  for (int i = 0; i < na.rows; ++i)
    for (int j = 0; j < na.cols; ++j) no.val[j] += na.val[static_cast<size_t>(i) * na.cols + j];
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    const int rows = na.rows, cols = na.cols;
    no.bw = [ia, io, rows, cols](auto& adj) {
      const auto& d = adj[io];
      auto& da = adj_of(adj, ia, static_cast<size_t>(rows) * cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) da[static_cast<size_t>(i) * cols + j] += d[j];
    };
  }
  return out;
}

Tensor Tape::sum_all(Tensor a) {
  check_mine(a, "sum_all");
  const Node& na = at(a);
  Tensor out = make(1, 1, na.requires_grad);
  double s = 0.0;
  for (double v : na.val) s += v;
  at(out).val[0] = s;
  if (at(out).requires_grad) {
    const int ia = a.node_, io = out.node_;
    const size_t len = na.val.size();
    at(out).bw = [ia, io, len](auto& adj) {
      const double d = adj[io][0];
      auto& da = adj_of(adj, ia, len);
      for (size_t i = 0; i < len; ++i) da[i] += d;
    };
  }
  return out;
}

Tensor Tape::segment_sum(Tensor values, std::span<const int> segment_ids, int num_segments) {
  check_mine(values, "segment_sum");
  const Node& nv = at(values);
  if (static_cast<int>(segment_ids.size()) != nv.rows)
    throw std::invalid_argument("segment_sum: " + std::to_string(segment_ids.size()) +
                                " ids for " + std::to_string(nv.rows) + " rows");
  for (int id : segment_ids)
    if (id < 0 || id >= num_segments)
      throw std::invalid_argument("segment_sum: segment id " + std::to_string(id) +
                                  " outside [0, " + std::to_string(num_segments) + ")");
  Tensor out = make(num_segments, nv.cols, nv.requires_grad);
  Node& no = at(out);
  for (int r = 0; r < nv.rows; ++r) {
    const double* src = nv.val.data() + static_cast<size_t>(r) * nv.cols;
    double* dst = no.val.data() + static_cast<size_t>(segment_ids[r]) * nv.cols;
    for (int j = 0; j < nv.cols; ++j) dst[j] += src[j];
  }
  if (no.requires_grad) {
    const int iv = values.node_, io = out.node_;
    const int rows = nv.rows, cols = nv.cols;
    std::vector<int> ids(segment_ids.begin(), segment_ids.end());
    no.bw = [iv, io, rows, cols, ids = std::move(ids)](auto& adj) {
      const auto& d = adj[io];
      auto& dv = adj_of(adj, iv, static_cast<size_t>(rows) * cols);
      for (int r = 0; r < rows; ++r) {
        const double* src = d.data() + static_cast<size_t>(ids[r]) * cols;
        double* dst = dv.data() + static_cast<size_t>(r) * cols;
        for (int j = 0; j < cols; ++j) dst[j] += src[j];
      }
    };
  }
  return out;
}

Tensor Tape::gather_rows(Tensor a, std::span<const int> row_ids) {
  check_mine(a, "gather_rows");
  const Node& na = at(a);
  for (int id : row_ids)
    if (id < 0 || id >= na.rows)
      throw std::invalid_argument("gather_rows: row id " + std::to_string(id) + " outside [0, " +
                                  std::to_string(na.rows) + ")");
  const int t = static_cast<int>(row_ids.size());
  Tensor out = make(t, na.cols, na.requires_grad);
  Node& no = at(out);
  for (int r = 0; r < t; ++r)
    std::copy_n(na.val.data() + static_cast<size_t>(row_ids[r]) * na.cols, na.cols,
                no.val.data() + static_cast<size_t>(r) * na.cols);
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    const int rows = na.rows, cols = na.cols;
    std::vector<int> ids(row_ids.begin(), row_ids.end());
    no.bw = [ia, io, rows, cols, ids = std::move(ids)](auto& adj) {
      const auto& d = adj[io];
      auto& da = adj_of(adj, ia, static_cast<size_t>(rows) * cols);
      for (size_t r = 0; r < ids.size(); ++r) {
        const double* src = d.data() + r * cols;
        double* dst = da.data() + static_cast<size_t>(ids[r]) * cols;
        for (int j = 0; j < cols; ++j) dst[j] += src[j];
      }
    };
  }
  return out;
}

Tensor Tape::concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  int rows = -1, cols = 0;
  bool rg = false;
  for (Tensor p : parts) {
    check_mine(p, "concat_rows");
    const Node& np = at(p);
    if (rows < 0) rows = np.rows;
    if (np.rows != rows)
      shape_error("concat_rows", rows, cols, np.rows, np.cols);
    cols += np.cols;
    rg = rg || np.requires_grad;
  }
  Tensor out = make(rows, cols, rg);
  Node& no = at(out);
  int off = 0;
  for (Tensor p : parts) {
    const Node& np = at(p);
    for (int i = 0; i < rows; ++i)
      std::copy_n(np.val.data() + static_cast<size_t>(i) * np.cols, np.cols,
                  no.val.data() + static_cast<size_t>(i) * cols + off);
    off += np.cols;
  }
  if (rg) {
    struct Piece {
      int node, cols, offset;
      bool grad;
    };
    std::vector<Piece> pieces;
    int o = 0;
    for (Tensor p : parts) {
      pieces.push_back({p.node_, at(p).cols, o, at(p).requires_grad});
      o += at(p).cols;
    }
    const int io = out.node_;
    no.bw = [io, rows, cols, pieces = std::move(pieces)](auto& adj) {
      const auto& d = adj[io];
      for (const auto& pc : pieces) {
        if (!pc.grad) continue;
        auto& dp = adj_of(adj, pc.node, static_cast<size_t>(rows) * pc.cols);
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < pc.cols; ++j)
            dp[static_cast<size_t>(i) * pc.cols + j] +=
                d[static_cast<size_t>(i) * cols + pc.offset + j];
      }
    };
  }
  return out;
}

Tensor Tape::softmax_row(Tensor a) {
  check_mine(a, "softmax_row");
  const Node& na = at(a);
  Tensor out = make(na.rows, na.cols, na.requires_grad);
  Node& no = at(out);
  for (int i = 0; i < na.rows; ++i) {
    const double* x = na.val.data() + static_cast<size_t>(i) * na.cols;
    double* y = no.val.data() + static_cast<size_t>(i) * na.cols;
    double mx = x[0];
    for (int j = 1; j < na.cols; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < na.cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      z += y[j];
    }
    for (int j = 0; j < na.cols; ++j) y[j] /= z;
  }
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    const int rows = na.rows, cols = na.cols;
    no.bw = [this, ia, io, rows, cols](auto& adj) {
      const auto& d = adj[io];
      const auto& y = nodes_[io]->val;
      auto& da = adj_of(adj, ia, static_cast<size_t>(rows) * cols);
      for (int i = 0; i < rows; ++i) {
        const double* yi = y.data() + static_cast<size_t>(i) * cols;
        const double* di = d.data() + static_cast<size_t>(i) * cols;
        double dot = 0.0;
        for (int j = 0; j < cols; ++j) dot += di[j] * yi[j];
        double* dai = da.data() + static_cast<size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) dai[j] += yi[j] * (di[j] - dot);
      }
    };
  }
  return out;
}

Tensor Tape::log(Tensor a) {
  check_mine(a, "log");
  const Node& na = at(a);
  Tensor out = make(na.rows, na.cols, na.requires_grad);
  Node& no = at(out);
  for (size_t i = 0; i < na.val.size(); ++i) no.val[i] = std::log(na.val[i]);
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    no.bw = [this, ia, io](auto& adj) {
      const auto& d = adj[io];
      const auto& x = nodes_[ia]->val;
      auto& da = adj_of(adj, ia, d.size());
      for (size_t i = 0; i < d.size(); ++i) da[i] += d[i] / x[i];
    };
  }
  return out;
}

Tensor Tape::clamp_min(Tensor a, double floor) {
  check_mine(a, "clamp_min");
  const Node& na = at(a);
  Tensor out = make(na.rows, na.cols, na.requires_grad);
  Node& no = at(out);
  for (size_t i = 0; i < na.val.size(); ++i) no.val[i] = std::max(na.val[i], floor);
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    no.bw = [this, ia, io, floor](auto& adj) {
      const auto& d = adj[io];
      const auto& x = nodes_[ia]->val;
      auto& da = adj_of(adj, ia, d.size());
      for (size_t i = 0; i < d.size(); ++i)
        if (x[i] > floor) da[i] += d[i];
    };
  }
  return out;
}

Tensor Tape::elementwise_mul(Tensor a, Tensor b) {
  check_mine(a, "elementwise_mul");
  check_mine(b, "elementwise_mul");
  const Node &na = at(a), &nb = at(b);
  if (na.rows != nb.rows || na.cols != nb.cols)
    shape_error("elementwise_mul", na.rows, na.cols, nb.rows, nb.cols);
  Tensor out = make(na.rows, na.cols, na.requires_grad || nb.requires_grad);
  Node& no = at(out);
  for (size_t i = 0; i < na.val.size(); ++i) no.val[i] = na.val[i] * nb.val[i];
  if (no.requires_grad) {
    const int ia = a.node_, ib = b.node_, io = out.node_;
    const bool ga = na.requires_grad, gb = nb.requires_grad;
    no.bw = [this, ia, ib, io, ga, gb](auto& adj) {
      const auto& d = adj[io];
      if (ga) {
        const auto& bx = nodes_[ib]->val;
        auto& da = adj_of(adj, ia, d.size());
        for (size_t i = 0; i < d.size(); ++i) da[i] += d[i] * bx[i];
      }
      if (gb) {
        const auto& ax = nodes_[ia]->val;
        auto& db = adj_of(adj, ib, d.size());
        for (size_t i = 0; i < d.size(); ++i) db[i] += d[i] * ax[i];
      }
    };
  }
  return out;
}

Tensor Tape::mse_scalar(Tensor pred, std::span<const double> target) {
  check_mine(pred, "mse_scalar");
  const Node& np = at(pred);
  if (target.size() != np.val.size())
    throw std::invalid_argument("mse_scalar: target length " + std::to_string(target.size()) +
                                " vs prediction " + shape_str(np.rows, np.cols));
  Tensor out = make(1, 1, np.requires_grad);
  double s = 0.0;
  for (size_t i = 0; i < target.size(); ++i) {
    const double r = np.val[i] - target[i];
    s += r * r;
  }
  at(out).val[0] = s;
  if (at(out).requires_grad) {
    const int ip = pred.node_, io = out.node_;
    std::vector<double> tgt(target.begin(), target.end());
    at(out).bw = [this, ip, io, tgt = std::move(tgt)](auto& adj) {
      const double d = adj[io][0];
      const auto& x = nodes_[ip]->val;
      auto& dp = adj_of(adj, ip, x.size());
      for (size_t i = 0; i < x.size(); ++i) dp[i] += 2.0 * (x[i] - tgt[i]) * d;
    };
  }
  return out;
}

Tensor Tape::mse_scalar(Tensor pred, double target) {
  return mse_scalar(pred, std::span<const double>(&target, 1));
}

Tensor Tape::dropout(Tensor a, double rate, Rng& rng, bool train) {
  check_mine(a, "dropout");
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must be in [0, 1)");
  if (!train || rate == 0.0) return a;
  const Node& na = at(a);
  std::vector<double> mask(na.val.size());
  const double keep = 1.0 - rate;
  for (double& m : mask) m = rng.next_double() >= rate ? 1.0 / keep : 0.0;
  Tensor out = make(na.rows, na.cols, na.requires_grad);
  Node& no = at(out);
  for (size_t i = 0; i < mask.size(); ++i) no.val[i] = na.val[i] * mask[i];
  if (no.requires_grad) {
    const int ia = a.node_, io = out.node_;
    no.bw = [ia, io, mask = std::move(mask)](auto& adj) {
      const auto& d = adj[io];
      auto& da = adj_of(adj, ia, d.size());
      for (size_t i = 0; i < d.size(); ++i) da[i] += d[i] * mask[i];
    };
  }
  return out;
}

double gradcheck(const TensorProgram& program, const std::vector<GradcheckInput>& inputs,
                 double step) {
  // Reverse-mode gradients.
  std::vector<std::vector<double>> ad_grads;
  {
    Tape tape;
    std::vector<Tensor> leaves;
    leaves.reserve(inputs.size());
    for (const auto& in : inputs) leaves.push_back(tape.leaf(in.rows, in.cols, in.values, true));
    Tensor loss = program(tape, leaves);
    tape.backward(loss);
    for (Tensor l : leaves) ad_grads.emplace_back(l.grad().begin(), l.grad().end());
  }
  // Central differences, one coordinate at a time.
  auto eval = [&](const std::vector<GradcheckInput>& pts) {
    Tape tape;
    std::vector<Tensor> leaves;
    leaves.reserve(pts.size());
    for (const auto& in : pts) leaves.push_back(tape.leaf(in.rows, in.cols, in.values, false));
    return program(tape, leaves).scalar();
  };
  double worst = 0.0;
  std::vector<GradcheckInput> pts = inputs;
  for (size_t t = 0; t < inputs.size(); ++t) {
    for (size_t i = 0; i < inputs[t].values.size(); ++i) {
      const double x0 = inputs[t].values[i];
      pts[t].values[i] = x0 + step;
      const double fp = eval(pts);
      pts[t].values[i] = x0 - step;
      const double fm = eval(pts);
      pts[t].values[i] = x0;
      const double fd = (fp - fm) / (2.0 * step);
      const double ad = ad_grads[t][i];
      const double err = std::abs(ad - fd) / std::max({1.0, std::abs(ad), std::abs(fd)});
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace augward::ad
