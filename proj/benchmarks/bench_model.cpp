#include <benchmark/benchmark.h>

#include "augward/augment.hpp"
#include "augward/losses.hpp"
#include "augward/model.hpp"
#include "augward/synthetic.hpp"

namespace {

using namespace augward;

void BM_EncodeForward(benchmark::State& state) {
  const Dataset ds = make_cycles_stars(8, 7);
  const Model model = Model::init(ds.feature_dim(), 64, 4, 2, 1);
  for (auto _ : state) {
    for (const Graph& g : ds.graphs) {
      auto z = embed(model, g);
      benchmark::DoNotOptimize(z.data());
    }
  }
}
BENCHMARK(BM_EncodeForward);

void BM_ForwardBackward(benchmark::State& state) {
  const Dataset ds = make_cycles_stars(8, 7);
  Model model = Model::init(ds.feature_dim(), 64, 4, 2, 1);
  for (auto _ : state) {
    ad::Tape tape;
    const ModelLeaves leaves = make_leaves(tape, model, true);
    ad::Tensor batch;
    for (const Graph& g : ds.graphs) {
      ad::Tensor z = encode(tape, model.encoder, leaves.encoder, g);
      ad::Tensor p = classify(tape, model.classifier, leaves.classifier, z);
      ad::Tensor ce = cross_entropy(tape, p, *g.label);
      batch = batch.valid() ? tape.add(batch, ce) : ce;
    }
    tape.backward(batch);
    benchmark::DoNotOptimize(batch.scalar());
  }
}
BENCHMARK(BM_ForwardBackward);

void BM_NodeDrop(benchmark::State& state) {
  const Dataset ds = make_cycles_stars(8, 7);
  Rng rng(4);
  for (auto _ : state) {
    for (const Graph& g : ds.graphs) {
      auto pair = node_drop(g, 0.2, rng);
      benchmark::DoNotOptimize(pair.augmented.num_nodes);
    }
  }
}
BENCHMARK(BM_NodeDrop);

}  // namespace
