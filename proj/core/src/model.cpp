#include "augward/model.hpp"

#include <algorithm>
#include <cmath>

#include "augward/errors.hpp"

namespace augward {

namespace {

Param uniform_param(const std::string& name, int rows, int cols, Rng& rng) {
  Param p{name, rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols)};
  const double bound = std::sqrt(6.0 / (rows + cols));
  for (double& v : p.value) v = (2.0 * rng.next_double() - 1.0) * bound;
  return p;
}

Param zero_param(const std::string& name, int rows, int cols) {
  return Param{name, rows, cols, std::vector<double>(static_cast<size_t>(rows) * cols, 0.0)};
}

ad::Tensor linear(ad::Tape& tape, ad::Tensor x, ad::Tensor w, ad::Tensor b) {
  return tape.add(tape.matmul(x, w), b);
}

// Directed edge arrays (both directions) sorted by (dst, src); the sorted
// order makes the segment accumulation canonical.
void directed_edges(const Graph& g, std::vector<int>& src, std::vector<int>& dst) {
  src.clear();
  dst.clear();
  std::vector<std::pair<int, int>> di;
  di.reserve(2 * g.edges.size());
  for (auto [u, v] : g.edges) {
    di.emplace_back(v, u);  // message u -> v, keyed by destination first
    di.emplace_back(u, v);
  }
  std::sort(di.begin(), di.end());
  for (auto [d, s] : di) {
    dst.push_back(d);
    src.push_back(s);
  }
}

}  // namespace

GinEncoder GinEncoder::init(int in_dim, int hidden, int layers, Rng rng) {
  GinEncoder enc;
  enc.in_dim = in_dim;
  enc.hidden = hidden;
  enc.layers = layers;
  for (int l = 0; l < layers; ++l) {
    const int in = (l == 0) ? in_dim : hidden;
    const std::string tag = "enc.l" + std::to_string(l);
    enc.params.push_back(uniform_param(tag + ".w1", in, hidden, rng));
    enc.params.push_back(zero_param(tag + ".b1", 1, hidden));
    enc.params.push_back(uniform_param(tag + ".w2", hidden, hidden, rng));
    enc.params.push_back(zero_param(tag + ".b2", 1, hidden));
  }
  return enc;
}

Classifier Classifier::init(int in_dim, int num_classes, Rng rng) {
  Classifier clf;
  clf.in_dim = in_dim;
  clf.num_classes = num_classes;
  clf.params.push_back(uniform_param("clf.w", in_dim, num_classes, rng));
  clf.params.push_back(zero_param("clf.b", 1, num_classes));
  return clf;
}

AwareHead AwareHead::init(int embed_dim, Rng rng) {
  AwareHead head;
  head.in_dim = 2 * embed_dim;
  head.params.push_back(uniform_param("head.w", head.in_dim, 1, rng));
  head.params.push_back(zero_param("head.b", 1, 1));
  return head;
}

std::vector<Param*> Model::parameters() {
  std::vector<Param*> out;
  for (auto& p : encoder.params) out.push_back(&p);
  for (auto& p : classifier.params) out.push_back(&p);
  for (auto& p : head.params) out.push_back(&p);
  return out;
}

std::vector<const Param*> Model::parameters() const {
  std::vector<const Param*> out;
  for (const auto& p : encoder.params) out.push_back(&p);
  for (const auto& p : classifier.params) out.push_back(&p);
  for (const auto& p : head.params) out.push_back(&p);
  return out;
}

size_t Model::param_count() const {
  size_t n = 0;
  for (const Param* p : parameters()) n += p->count();
  return n;
}

Model Model::init(int in_dim, int hidden, int layers, int num_classes, uint64_t seed) {
  Rng master(seed);
  Model m;
  m.encoder = GinEncoder::init(in_dim, hidden, layers, master.child(rng_tag::init, 0));
  m.classifier =
      Classifier::init(m.encoder.embed_dim(), num_classes, master.child(rng_tag::init, 1));
  m.head = AwareHead::init(m.encoder.embed_dim(), master.child(rng_tag::init, 2));
  return m;
}

std::vector<ad::Tensor> ModelLeaves::all() const {
  std::vector<ad::Tensor> out;
  out.reserve(encoder.size() + classifier.size() + head.size());
  out.insert(out.end(), encoder.begin(), encoder.end());
  out.insert(out.end(), classifier.begin(), classifier.end());
  out.insert(out.end(), head.begin(), head.end());
  return out;
}

ModelLeaves make_leaves(ad::Tape& tape, const Model& model, bool requires_grad) {
  ModelLeaves leaves;
  auto lift = [&](const std::vector<Param>& ps, std::vector<ad::Tensor>& out) {
    for (const Param& p : ps) out.push_back(tape.leaf(p.rows, p.cols, p.value, requires_grad));
  };
  lift(model.encoder.params, leaves.encoder);
  lift(model.classifier.params, leaves.classifier);
  lift(model.head.params, leaves.head);
  return leaves;
}

ad::Tensor encode(ad::Tape& tape, const GinEncoder& enc,
                  std::span<const ad::Tensor> enc_leaves, const Graph& g) {
  if (g.feature_dim() != enc.in_dim)
    throw DataError("encode: graph feature dim " + std::to_string(g.feature_dim()) +
                    " != encoder input dim " + std::to_string(enc.in_dim));
  std::vector<int> src, dst;
  directed_edges(g, src, dst);

  ad::Tensor h = tape.constant(g.num_nodes, enc.in_dim, g.features.vec());
  std::vector<ad::Tensor> readouts;
  readouts.push_back(tape.row_sum(h));
  for (int l = 0; l < enc.layers; ++l) {
    ad::Tensor agg =
        tape.segment_sum(tape.gather_rows(h, src), dst, g.num_nodes);
    ad::Tensor combined = tape.add(h, agg);
    ad::Tensor hidden = tape.relu(
        linear(tape, combined, enc_leaves[4 * l + 0], enc_leaves[4 * l + 1]));
    h = linear(tape, hidden, enc_leaves[4 * l + 2], enc_leaves[4 * l + 3]);
    readouts.push_back(tape.row_sum(h));
  }
  return tape.concat_rows(readouts);
}

ad::Tensor classify(ad::Tape& tape, const Classifier& clf,
                    std::span<const ad::Tensor> clf_leaves, ad::Tensor z) {
  if (z.cols() != clf.in_dim)
    throw DataError("classify: embedding dim " + std::to_string(z.cols()) +
                    " != classifier input dim " + std::to_string(clf.in_dim));
  return tape.softmax_row(linear(tape, z, clf_leaves[0], clf_leaves[1]));
}

ad::Tensor predict_difference(ad::Tape& tape, const AwareHead& head,
                              std::span<const ad::Tensor> head_leaves, ad::Tensor z_g,
                              ad::Tensor z_gplus) {
  if (z_g.cols() != z_gplus.cols())
    throw DataError("predict_difference: embedding dims differ");
  const ad::Tensor pair[2] = {z_g, z_gplus};
  return linear(tape, tape.concat_rows(pair), head_leaves[0], head_leaves[1]);
}

std::vector<double> embed(const Model& model, const Graph& g) {
  ad::Tape tape;
  const ModelLeaves leaves = make_leaves(tape, model, false);
  const ad::Tensor z = encode(tape, model.encoder, leaves.encoder, g);
  return std::vector<double>(z.value().begin(), z.value().end());
}

std::vector<double> predict_probs(const Model& model, const Graph& g) {
  ad::Tape tape;
  const ModelLeaves leaves = make_leaves(tape, model, false);
  const ad::Tensor z = encode(tape, model.encoder, leaves.encoder, g);
  const ad::Tensor p = classify(tape, model.classifier, leaves.classifier, z);
  return std::vector<double>(p.value().begin(), p.value().end());
}

double head_output(const Model& model, std::span<const double> z_g,
                   std::span<const double> z_gplus) {
  const Param& w = model.head.params[0];
  const Param& b = model.head.params[1];
  const size_t k = z_g.size();
  if (z_gplus.size() != k || w.value.size() != 2 * k)
    throw DataError("head_output: embedding sizes do not match the head");
  double s = 0.0;
  for (size_t i = 0; i < k; ++i) s += w.value[i] * z_g[i];
  for (size_t i = 0; i < k; ++i) s += w.value[k + i] * z_gplus[i];
  return s + b.value[0];
}

}  // namespace augward
