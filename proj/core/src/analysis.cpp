#include "augward/analysis.hpp"

#include <algorithm>
#include <iterator>

#include "augward/errors.hpp"
#include "augward/stats.hpp"

namespace augward {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("squared_distance: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

CorrelationReport correlation_analysis(const Model& model, const Dataset& ds, AugmentKind kind,
                                       std::span<const double> p_list, int samples_per_p,
                                       double alpha, const FgwConfig& fgw_cfg,
                                       const AugmentOptions& aug_opts, uint64_t seed) {
  if (p_list.empty()) throw ConfigError("correlation analysis needs a non-empty p list");
  if (samples_per_p < 1) throw ConfigError("samples_per_p must be >= 1");
  if (ds.graphs.empty()) throw DataError("correlation analysis on an empty dataset");

  Rng master = Rng(seed).child(rng_tag::analysis);
  CorrelationReport report;
  report.graph_index = master.uniform_int(ds.size());
  const Graph& g = ds.graphs[report.graph_index];
  const std::vector<double> z_g = embed(model, g);

  std::vector<double> xs, ys;
  for (size_t pi = 0; pi < p_list.size(); ++pi) {
    for (int s = 0; s < samples_per_p; ++s) {
      Rng draw = master.child(pi, s);
      const AugmentedPair pair = sample(g, kind, p_list[pi], draw, aug_opts);
      const std::vector<double> z_gp = embed(model, pair.augmented);
      CorrelationRow row;
      row.p = p_list[pi];
      row.repr_sq_dist = squared_distance(z_g, z_gp);
      row.fgwd_value = fgwd(pair.original, pair.augmented, alpha, fgw_cfg).value;
      row.head_fwd = head_output(model, z_g, z_gp);
      row.head_rev = head_output(model, z_gp, z_g);
      xs.push_back(row.repr_sq_dist);
      ys.push_back(row.fgwd_value);
      report.rows.push_back(row);
    }
  }
  report.pcc_value = pcc(xs, ys);
  return report;
}

DispersionReport dispersion_analysis(const Model& model, const Dataset& ds,
                                     std::span<const double> p_list, int samples_per_p,
                                     const AugmentOptions& aug_opts, uint64_t seed) {
  if (p_list.empty()) throw ConfigError("dispersion analysis needs a non-empty p list");
  if (samples_per_p < 1) throw ConfigError("samples_per_p must be >= 1");
  if (ds.graphs.empty()) throw DataError("dispersion analysis on an empty dataset");

  Rng master = Rng(seed).child(rng_tag::analysis);
  DispersionReport report;
  report.graph_index = master.uniform_int(ds.size());
  const Graph& g = ds.graphs[report.graph_index];
  const std::vector<double> z_g = embed(model, g);

  const AugmentKind kinds[] = {AugmentKind::NodeDrop, AugmentKind::EdgeDrop,
                               AugmentKind::AttrMask, AugmentKind::Subgraph};
  for (size_t ki = 0; ki < std::size(kinds); ++ki) {
    for (size_t pi = 0; pi < p_list.size(); ++pi) {
      double sum = 0.0, sum_sq = 0.0;
      for (int s = 0; s < samples_per_p; ++s) {
        Rng draw = master.child(ki, pi, s);
        const AugmentedPair pair = sample(g, kinds[ki], p_list[pi], draw, aug_opts);
        const double d = squared_distance(z_g, embed(model, pair.augmented));
        report.rows.push_back({kinds[ki], p_list[pi], s, d});
        sum += d;
        sum_sq += d * d;
      }
      const double mean = sum / samples_per_p;
      report.summaries.push_back(
          {kinds[ki], p_list[pi], mean, std::max(0.0, sum_sq / samples_per_p - mean * mean)});
    }
  }
  return report;
}

}  // namespace augward
