#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "laughboard/rating/bradley_terry.hpp"

namespace laughboard::rating {

struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool operator==(const Interval&) const = default;
};

struct BootstrapOptions {
  int n_boot = 100;
  double lower_quantile = 0.025;
  double upper_quantile = 0.975;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Redrawn (disconnected) resamples may make up at most this share of all draws.
  double max_redraw_rate = 0.5;
  BtOptions bt;
};

struct BootstrapResult {
  std::vector<std::string> model_ids;
  std::map<std::string, Interval, std::less<>> intervals;
  std::vector<std::vector<double>> samples;  // n_boot x K, registration order
  int redraws = 0;

  bool operator==(const BootstrapResult&) const = default;
};

class BootstrapError : public Error {
 public:
  using Error::Error;
};

// Linear-interpolation quantile of unsorted values (q in [0, 1]).
double quantile(std::vector<double> values, double q);

// Percentile intervals from refitting Bradley-Terry on match-level resamples
// drawn with replacement. Resamples whose comparison graph is disconnected are
// redrawn. Each iteration owns a sub-seed, so `threads` never changes the output.
BootstrapResult bootstrap_ci(const MatchHistoryGraph& graph, const BootstrapOptions& options = {});

}  // namespace laughboard::rating
