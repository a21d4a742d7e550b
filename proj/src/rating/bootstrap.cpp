#include "laughboard/rating/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "laughboard/core/parallel.hpp"
#include "laughboard/core/random.hpp"

namespace laughboard::rating {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

// One iteration gives up after this many consecutive disconnected draws; the
// overall rate check below normally fires long before.
constexpr int kMaxAttemptsPerIteration = 1000;

}  // namespace

BootstrapResult bootstrap_ci(const MatchHistoryGraph& graph, const BootstrapOptions& options) {
  if (options.n_boot < 1) throw ValidationError("n_boot must be at least 1");
  if (!(options.lower_quantile >= 0.0 && options.lower_quantile <= options.upper_quantile &&
        options.upper_quantile <= 1.0)) {
    throw ValidationError("bootstrap quantiles must satisfy 0 <= low <= high <= 1");
  }
  const auto edges = graph.active_edges();
  if (edges.empty()) throw ValidationError("cannot bootstrap an empty match history");
  const std::size_t k = graph.models().size();
  std::vector<std::string> ids;
  for (const auto& m : graph.models()) ids.push_back(m.model_id);

  // The point fit must be well posed before resampling means anything.
  (void)fit_bradley_terry(graph, options.bt);

  const auto n = static_cast<std::size_t>(options.n_boot);
  BootstrapResult out;
  out.model_ids = ids;
  out.samples.resize(n);
  std::vector<int> redraws(n, 0);

  parallel_for(n, options.threads, [&](std::size_t b) {
    rng::Engine engine(rng::derive_seed(options.seed, /*stream=*/0xb007, b));
    std::vector<std::size_t> picks(edges.size());
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxAttemptsPerIteration) {
        throw BootstrapError("bootstrap iteration " + std::to_string(b) + " found no connected resample in " +
                             std::to_string(kMaxAttemptsPerIteration) + " draws");
      }
      for (auto& p : picks) p = static_cast<std::size_t>(engine.below(edges.size()));
      const auto tally = PairwiseTally::from_edges(k, edges, picks);
      if (connected_components(tally).size() > 1) {
        ++redraws[b];
        continue;
      }
      const BtFit fit = fit_bradley_terry(tally, ids, options.bt);
      auto& row = out.samples[b];
      row.reserve(k);
      for (const auto& id : ids) row.push_back(fit.ratings.at(id));
      return;
    }
  });

  for (int r : redraws) out.redraws += r;
  const double rate = static_cast<double>(out.redraws) / static_cast<double>(out.redraws + options.n_boot);
  if (rate > options.max_redraw_rate) {
    throw BootstrapError("graph too sparse for bootstrap: " + std::to_string(out.redraws) + " of " +
                         std::to_string(out.redraws + options.n_boot) + " resamples were disconnected");
  }

  for (std::size_t m = 0; m < k; ++m) {
    std::vector<double> column;
    column.reserve(n);
    for (const auto& row : out.samples) column.push_back(row[m]);
    out.intervals.emplace(ids[m], Interval{quantile(column, options.lower_quantile),
                                           quantile(std::move(column), options.upper_quantile)});
  }
  return out;
}

}  // namespace laughboard::rating
