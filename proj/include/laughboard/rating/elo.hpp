#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laughboard/core/match_graph.hpp"

namespace laughboard::rating {

inline constexpr double kDefaultKFactor = 32.0;
inline constexpr double kInitialRating = 1000.0;
inline constexpr int kDefaultShuffles = 10;

// Elo-scaled logistic win probability of a player rated r_i against r_j.
double expected_score(double r_i, double r_j);

struct EloState {
  std::map<std::string, double, std::less<>> ratings;
  double k_factor = kDefaultKFactor;
  double initial_rating = kInitialRating;

  // Every model of the graph at the initial rating.
  static EloState fresh(std::span<const ModelEntry> models, double k_factor = kDefaultKFactor,
                        double initial_rating = kInitialRating);
};

struct EloDelta {
  double i = 0.0;
  double j = 0.0;
};

// One sequential update; score_for_i must be 0, 0.5 or 1.
EloDelta elo_update(EloState& state, std::string_view model_i, std::string_view model_j, double score_for_i);

// Terminal ratings after applying every active record in `order`, a
// permutation of [0, active_count) indexing graph.active_positions().
EloState replay_elo(const MatchHistoryGraph& graph, std::span<const std::size_t> order,
                    double k_factor = kDefaultKFactor, double initial_rating = kInitialRating);

// Ledger-order replay (the scheduler's tracking ratings).
EloState replay_elo(const MatchHistoryGraph& graph, double k_factor = kDefaultKFactor,
                    double initial_rating = kInitialRating);

struct StableEloResult {
  std::vector<std::string> model_ids;  // column order, registration order
  std::map<std::string, double, std::less<>> mean_ratings;
  std::vector<std::vector<double>> per_shuffle_ratings;  // n_shuffles x K
  std::map<std::string, double, std::less<>> sigma;     // population std-dev per model
  int n_shuffles = 0;

  bool operator==(const StableEloResult&) const = default;
};

struct StableEloOptions {
  int n_shuffles = kDefaultShuffles;
  std::uint64_t seed = 0;
  double k_factor = kDefaultKFactor;
  double initial_rating = kInitialRating;
  unsigned threads = 1;
};

// Replays the history over n_shuffles seeded uniform permutations. Each
// shuffle draws from its own sub-seed, so the thread count never changes
// the result.
StableEloResult stable_elo(const MatchHistoryGraph& graph, const StableEloOptions& options = {});

}  // namespace laughboard::rating
