#include "augward/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "augward/errors.hpp"
#include "augward/losses.hpp"
#include "augward/synthetic.hpp"

namespace augward {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int argmax_prob(std::span<const double> probs) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(probs.size()); ++i)
    if (probs[i] > probs[best]) best = i;  // ties keep the smaller index
  return best;
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

double evaluate(const Model& model, const Dataset& ds, std::span<const int> indices) {
  if (indices.empty()) throw DataError("evaluate: empty index list");
  int correct = 0;
  // Chunked tapes so parameter leaves are copied once per chunk, not per graph.
  constexpr int kChunk = 64;
  for (size_t begin = 0; begin < indices.size(); begin += kChunk) {
    const size_t end = std::min(indices.size(), begin + kChunk);
    ad::Tape tape;
    const ModelLeaves leaves = make_leaves(tape, model, false);
    for (size_t k = begin; k < end; ++k) {
      const Graph& g = ds.graphs[indices[k]];
      if (!g.label) throw DataError("evaluate: unlabeled graph");
      const ad::Tensor z = encode(tape, model.encoder, leaves.encoder, g);
      const ad::Tensor probs = classify(tape, model.classifier, leaves.classifier, z);
      if (argmax_prob(probs.value()) + 1 == *g.label) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

TrainResult train(const Dataset& ds, const Split& split, const TrainConfig& cfg) {
  validate_config(cfg);
  if (ds.graphs.empty()) throw DataError("train: empty dataset");
  if (split.train_indices.empty()) throw DataError("train: empty train split");

  const Rng master(cfg.seed);
  Model model = Model::init(ds.feature_dim(), cfg.hidden_dim, cfg.num_layers, ds.num_classes,
                            master.child(rng_tag::init).next_u64());
  auto params = model.parameters();
  AdamState adam = AdamState::init(params);
  const AugmentOptions aug_opts = cfg.augment_options(ds);
  const FgwConfig fgw_cfg = cfg.fgw_config();
  const bool use_aware = cfg.lambda_aware > 0.0;
  const bool use_cr = cfg.lambda_cr > 0.0;

  TrainResult result{Model{}, {}};
  result.metrics.reserve(cfg.epochs);
  int step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto epoch_start = Clock::now();
    EpochMetrics em;
    em.epoch = epoch;

    std::vector<int> order = split.train_indices;
    {
      Rng shuffle_rng = master.child(rng_tag::shuffle, epoch);
      shuffle_rng.shuffle(order);
    }
    // Per-pair distance memo keyed by (graph id, draw id); draws happen once
    // per graph per epoch so this mostly documents the cache key.
    std::unordered_map<long long, double> target_memo;

    double sum_total = 0.0, sum_base = 0.0, sum_aware = 0.0, sum_cr = 0.0;
    const auto num_train = static_cast<double>(order.size());

    for (size_t batch_begin = 0; batch_begin < order.size();
         batch_begin += static_cast<size_t>(cfg.batch_size)) {
      const size_t batch_end =
          std::min(order.size(), batch_begin + static_cast<size_t>(cfg.batch_size));
      const int batch_count = static_cast<int>(batch_end - batch_begin);

      // Phase 1: augmentation draws and difference targets, off the tape.
      std::vector<AugmentedPair> pairs;
      std::vector<double> targets(batch_count, 0.0);
      pairs.reserve(batch_count);
      {
        const auto t0 = Clock::now();
        for (size_t k = batch_begin; k < batch_end; ++k) {
          Rng aug_rng = master.child(rng_tag::augment, epoch, order[k]);
          pairs.push_back(sample(ds.graphs[order[k]], cfg.augment, cfg.p, aug_rng, aug_opts));
          ++em.work.augment_draws;
        }
        em.wall.augment += seconds_since(t0);
      }
      if (use_aware) {
        for (int b = 0; b < batch_count; ++b) {
          const int graph_id = order[batch_begin + b];
          const long long memo_key =
              (static_cast<long long>(graph_id) << 20) | static_cast<long long>(epoch);
          if (auto hit = target_memo.find(memo_key); hit != target_memo.end()) {
            targets[b] = hit->second;
            continue;
          }
          const auto t0 = Clock::now();
          if (cfg.diff_metric == DiffMetric::Fgwd) {
            const FgwResult res = fgwd(pairs[b].original, pairs[b].augmented, cfg.alpha, fgw_cfg);
            targets[b] = res.value;
            em.work.fgw_iterations += res.iterations;
            em.wall.fgwd += seconds_since(t0);
          } else {
            targets[b] = diff_metric(pairs[b], cfg.diff_metric, cfg.alpha, fgw_cfg);
            em.wall.augment += seconds_since(t0);
          }
          target_memo.emplace(memo_key, targets[b]);
        }
      }

      // Phase 2: forward both graphs, backward, one Adam step.
      const auto t_fb = Clock::now();
      ad::Tape tape;
      const ModelLeaves leaves = make_leaves(tape, model, true);
      ad::Tensor batch_sum;
      for (int b = 0; b < batch_count; ++b) {
        const Graph& g = pairs[b].original;
        const Graph& gp = pairs[b].augmented;
        const int graph_id = order[batch_begin + b];
        ad::Tensor z_g = encode(tape, model.encoder, leaves.encoder, g);
        ad::Tensor z_gp = encode(tape, model.encoder, leaves.encoder, gp);
        Rng do_rng = master.child(rng_tag::dropout, epoch, graph_id);
        ad::Tensor p_g = classify(tape, model.classifier, leaves.classifier,
                                  tape.dropout(z_g, cfg.dropout, do_rng, true));
        ad::Tensor p_gp = classify(tape, model.classifier, leaves.classifier,
                                   tape.dropout(z_gp, cfg.dropout, do_rng, true));
        ad::Tensor base = loss_base_supervised(tape, p_g, p_gp, *g.label);
        ad::Tensor graph_total = base;
        double aware_val = 0.0, cr_val = 0.0;
        if (use_aware) {
          ad::Tensor head_out = predict_difference(tape, model.head, leaves.head, z_g, z_gp);
          ad::Tensor aware = loss_aware(tape, head_out, targets[b]);
          aware_val = aware.scalar();
          graph_total = tape.add(graph_total, tape.scale(aware, cfg.lambda_aware));
        }
        if (use_cr) {
          ad::Tensor cr = loss_cr(tape, p_g, p_gp);
          cr_val = cr.scalar();
          graph_total = tape.add(graph_total, tape.scale(cr, cfg.lambda_cr));
        }
        sum_base += base.scalar();
        sum_aware += aware_val;
        sum_cr += cr_val;
        sum_total += graph_total.scalar();
        batch_sum = batch_sum.valid() ? tape.add(batch_sum, graph_total) : graph_total;
      }
      ad::Tensor batch_loss = tape.scale(batch_sum, 1.0 / batch_count);
      if (!std::isfinite(batch_loss.scalar()))
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch));
      tape.backward(batch_loss);
      em.work.tape_nodes += static_cast<long>(tape.size());

      const std::vector<ad::Tensor> leaf_list = leaves.all();
      std::vector<std::span<const double>> grads;
      grads.reserve(leaf_list.size());
      for (const ad::Tensor& leaf : leaf_list) grads.push_back(leaf.grad());
      adam_step(params, grads, adam, cfg.learning_rate, ++step);
      em.work.optimizer_updates += static_cast<long>(params.size());
      em.wall.forward_backward += seconds_since(t_fb);
    }

    em.total = sum_total / num_train;
    em.base = sum_base / num_train;
    em.aware = sum_aware / num_train;
    em.cr = sum_cr / num_train;
    em.train_acc = evaluate(model, ds, split.train_indices);
    em.test_acc = evaluate(model, ds, split.test_indices);
    em.wall.other =
        std::max(0.0, seconds_since(epoch_start) - em.wall.augment - em.wall.fgwd -
                          em.wall.forward_backward);
    result.metrics.push_back(em);
  }
  result.model = std::move(model);
  return result;
}

std::string metrics_csv_text(std::span<const EpochMetrics> metrics) {
  std::string out = "epoch,total,base,aware,cr,train_acc,test_acc,t_augment,t_fgwd,t_fb,t_other\n";
  for (const EpochMetrics& em : metrics) {
    out += std::to_string(em.epoch);
    out += ',';
    out += fmt9(em.total);
    out += ',';
    out += fmt9(em.base);
    out += ',';
    out += fmt9(em.aware);
    out += ',';
    out += fmt9(em.cr);
    out += ',';
    out += fmt9(em.train_acc);
    out += ',';
    out += fmt9(em.test_acc);
    out += ',';
    out += fmt9(static_cast<double>(em.work.augment_draws));
    out += ',';
    out += fmt9(static_cast<double>(em.work.fgw_iterations));
    out += ',';
    out += fmt9(static_cast<double>(em.work.tape_nodes));
    out += ',';
    out += fmt9(static_cast<double>(em.work.optimizer_updates));
    out += '\n';
  }
  return out;
}

void write_metrics_csv(const std::string& path, std::span<const EpochMetrics> metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << metrics_csv_text(metrics);
}

void write_timing_csv(const std::string& path, std::span<const EpochMetrics> metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "epoch,t_augment,t_fgwd,t_fb,t_other\n";
  for (const EpochMetrics& em : metrics)
    out << em.epoch << ',' << fmt9(em.wall.augment) << ',' << fmt9(em.wall.fgwd) << ','
        << fmt9(em.wall.forward_backward) << ',' << fmt9(em.wall.other) << '\n';
}

}  // namespace augward
