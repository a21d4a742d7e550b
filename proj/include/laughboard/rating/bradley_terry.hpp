#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "laughboard/core/errors.hpp"
#include "laughboard/core/match_graph.hpp"

namespace laughboard::rating {

// Sufficient statistics for the Bradley-Terry likelihood over K models.
// A tie counts as half a win for each side.
class PairwiseTally {
 public:
  explicit PairwiseTally(std::size_t k = 0) : k_(k), wins_(k * k, 0.0), games_(k * k, 0.0) {}

  static PairwiseTally from_graph(const MatchHistoryGraph& graph);
  // Tally of edges[picks[0]], edges[picks[1]], ... (picks may repeat).
  static PairwiseTally from_edges(std::size_t k, std::span<const Edge> edges, std::span<const std::size_t> picks);

  void add(int a, int b, double score_for_a);

  std::size_t size() const { return k_; }
  double wins(std::size_t i, std::size_t j) const { return wins_[i * k_ + j]; }
  double games(std::size_t i, std::size_t j) const { return games_[i * k_ + j]; }
  double total_wins(std::size_t i) const;

 private:
  std::size_t k_;
  std::vector<double> wins_;
  std::vector<double> games_;
};

// Connected components of the comparison graph, each sorted ascending.
std::vector<std::vector<int>> connected_components(const PairwiseTally& tally);

// True when a finite maximizer exists: every model reaches every other along
// "scored against" edges (a tie points both ways). Otherwise the likelihood
// keeps growing as some group drifts off and MM never truly settles.
bool has_finite_mle(const PairwiseTally& tally);

// Log-likelihood of log-strengths theta (pi = exp(theta)).
double bt_log_likelihood(const PairwiseTally& tally, std::span<const double> theta);

// One raw MM update: pi_i <- W_i / sum_j n_ij / (pi_i + pi_j), returned as
// log-strengths. A model without wins maps to -infinity.
std::vector<double> mm_step(const PairwiseTally& tally, std::span<const double> theta);

// Elo points per unit of log-strength: 400 / ln 10.
inline constexpr double kEloPerNat = 173.71779276130073;

struct BtOptions {
  double epsilon = 1e-6;
  int max_iterations = 10000;
  double anchor = 1000.0;
  // Log-strengths are kept within this many nats of the leader.
  double floor_gap = 25.0;
};

struct BtFit {
  std::vector<std::string> model_ids;  // registration order
  std::map<std::string, double, std::less<>> ratings;  // Elo scale, mean = anchor
  std::map<std::string, double, std::less<>> log_strengths;
  int iterations = 0;
  bool converged = false;
  double epsilon = 1e-6;
  std::vector<std::string> floored;  // models clamped at the floor (MLE diverges)
  bool finite_mle = true;
};

class DisconnectedGraphError : public Error {
 public:
  DisconnectedGraphError(std::vector<std::vector<std::string>> components);
  const std::vector<std::vector<std::string>>& components() const { return components_; }

 private:
  std::vector<std::vector<std::string>> components_;
};

// Global MLE via minorization-maximization. Throws DisconnectedGraphError
// when some model cannot be reached through played matches.
BtFit fit_bradley_terry(const MatchHistoryGraph& graph, const BtOptions& options = {});

// Same fit over a prepared tally; model_ids label the K rows.
BtFit fit_bradley_terry(const PairwiseTally& tally, std::span<const std::string> model_ids,
                        const BtOptions& options = {});

}  // namespace laughboard::rating
