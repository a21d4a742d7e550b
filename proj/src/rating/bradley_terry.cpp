#include "laughboard/rating/bradley_terry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace laughboard::rating {

PairwiseTally PairwiseTally::from_graph(const MatchHistoryGraph& graph) {
  PairwiseTally tally(graph.models().size());
  const auto edges = graph.edges();
  for (std::size_t pos = 0; pos < edges.size(); ++pos) {
    if (graph.is_active(pos)) tally.add(edges[pos].side_a, edges[pos].side_b, edges[pos].score_for_a);
  }
  return tally;
}

PairwiseTally PairwiseTally::from_edges(std::size_t k, std::span<const Edge> edges,
                                        std::span<const std::size_t> picks) {
  PairwiseTally tally(k);
  for (std::size_t idx : picks) tally.add(edges[idx].side_a, edges[idx].side_b, edges[idx].score_for_a);
  return tally;
}

void PairwiseTally::add(int a, int b, double score_for_a) {
  const auto ua = static_cast<std::size_t>(a);
  const auto ub = static_cast<std::size_t>(b);
  wins_[ua * k_ + ub] += score_for_a;
  wins_[ub * k_ + ua] += 1.0 - score_for_a;
  games_[ua * k_ + ub] += 1.0;
  games_[ub * k_ + ua] += 1.0;
}

double PairwiseTally::total_wins(std::size_t i) const {
  double w = 0.0;
  for (std::size_t j = 0; j < k_; ++j) w += wins(i, j);
  return w;
}

std::vector<std::vector<int>> connected_components(const PairwiseTally& tally) {
  const std::size_t k = tally.size();
  std::vector<int> label(k, -1);
  std::vector<std::vector<int>> out;
  for (std::size_t start = 0; start < k; ++start) {
    if (label[start] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{start};
    label[start] = id;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      out.back().push_back(static_cast<int>(i));
      for (std::size_t j = 0; j < k; ++j) {
        if (label[j] < 0 && tally.games(i, j) > 0.0) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

bool has_finite_mle(const PairwiseTally& tally) {
  const std::size_t k = tally.size();
  if (k <= 1) return true;
  const auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < k; ++j) {
        if (seen[j] || (forward ? tally.wins(i, j) : tally.wins(j, i)) <= 0.0) continue;
        seen[j] = true;
        ++count;
        stack.push_back(j);
      }
    }
    return count == k;
  };
  return reaches_all(true) && reaches_all(false);
}

double bt_log_likelihood(const PairwiseTally& tally, std::span<const double> theta) {
  double ll = 0.0;
  const std::size_t k = tally.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double w = tally.wins(i, j);
      if (i == j || w == 0.0) continue;
      // log P(i beats j) = -log(1 + exp(theta_j - theta_i))
      const double x = theta[j] - theta[i];
      ll -= w * (x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)));
    }
  }
  return ll;
}

namespace {

// Dense copy of the sufficient statistics: total points W and game counts n.
struct Stats {
  std::size_t k = 0;
  std::vector<double> w;
  std::vector<double> n;  // k x k

  explicit Stats(const PairwiseTally& tally) : k(tally.size()), w(k), n(k * k) {
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = tally.total_wins(i);
      for (std::size_t j = 0; j < k; ++j) n[i * k + j] = i == j ? 0.0 : tally.games(i, j);
    }
  }
};

void mm_update(const Stats& st, std::span<const double> theta, std::span<double> next) {
  for (std::size_t i = 0; i < st.k; ++i) {
    if (st.w[i] <= 0.0) {
      next[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    // sum_j n_ij / (pi_i + pi_j), scaled by pi_i to stay in range
    double denom = 0.0;
    const double* row = &st.n[i * st.k];
    for (std::size_t j = 0; j < st.k; ++j) {
      if (row[j] != 0.0) denom += row[j] / (1.0 + std::exp(theta[j] - theta[i]));
    }
    next[i] = theta[i] + std::log(st.w[i] / denom);
  }
}

}  // namespace

std::vector<double> mm_step(const PairwiseTally& tally, std::span<const double> theta) {
  std::vector<double> next(tally.size());
  mm_update(Stats(tally), theta, next);
  return next;
}

namespace {

std::string describe(const std::vector<std::vector<std::string>>& components) {
  std::string out = "comparison graph is disconnected; components:";
  for (const auto& c : components) {
    out += " {";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + c[i];
    out += "}";
  }
  return out;
}

}  // namespace

DisconnectedGraphError::DisconnectedGraphError(std::vector<std::vector<std::string>> components)
    : Error(describe(components)), components_(std::move(components)) {}

BtFit fit_bradley_terry(const PairwiseTally& tally, std::span<const std::string> model_ids,
                        const BtOptions& options) {
  const std::size_t k = tally.size();
  if (model_ids.size() != k) throw ValidationError("model_ids and tally disagree on the number of models");
  if (!(options.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (options.max_iterations < 1) throw ValidationError("max_iterations must be positive");

  const auto components = connected_components(tally);
  if (components.size() > 1) {
    std::vector<std::vector<std::string>> named;
    for (const auto& c : components) {
      named.emplace_back();
      for (int i : c) named.back().push_back(model_ids[static_cast<std::size_t>(i)]);
    }
    throw DisconnectedGraphError(std::move(named));
  }

  BtFit fit;
  fit.epsilon = options.epsilon;
  fit.model_ids.assign(model_ids.begin(), model_ids.end());
  fit.finite_mle = has_finite_mle(tally);

  std::vector<double> theta(k, 0.0);
  std::vector<double> next(k);
  std::vector<bool> clamped(k, false);
  if (k <= 1) {
    fit.converged = true;
  } else {
    const Stats stats(tally);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
      mm_update(stats, theta, next);
      double top = -std::numeric_limits<double>::infinity();
      for (double t : next) top = std::max(top, t);
      const double floor = top - options.floor_gap;
      for (std::size_t i = 0; i < k; ++i) {
        clamped[i] = !(next[i] >= floor);
        if (clamped[i]) next[i] = floor;
      }
      const double mean = std::accumulate(next.begin(), next.end(), 0.0) / static_cast<double>(k);
      double change = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        next[i] -= mean;
        change = std::max(change, std::abs(next[i] - theta[i]));
      }
      theta.swap(next);
      fit.iterations = iter;
      if (change < options.epsilon) {
        fit.converged = true;
        break;
      }
    }
  }

  double mean_elo = 0.0;
  for (double t : theta) mean_elo += kEloPerNat * t;
  mean_elo = k > 0 ? mean_elo / static_cast<double>(k) : 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    fit.log_strengths.emplace(model_ids[i], theta[i]);
    fit.ratings.emplace(model_ids[i], kEloPerNat * theta[i] - mean_elo + options.anchor);
    if (clamped[i]) fit.floored.push_back(model_ids[i]);
  }
  return fit;
}

BtFit fit_bradley_terry(const MatchHistoryGraph& graph, const BtOptions& options) {
  std::vector<std::string> ids;
  for (const auto& m : graph.models()) ids.push_back(m.model_id);
  return fit_bradley_terry(PairwiseTally::from_graph(graph), ids, options);
}

}  // namespace laughboard::rating
