#include "laughboard/rating/elo.hpp"

#include <cmath>
#include <numeric>

#include "laughboard/core/errors.hpp"
#include "laughboard/core/parallel.hpp"
#include "laughboard/core/random.hpp"

namespace laughboard::rating {

double expected_score(double r_i, double r_j) {
  if (!std::isfinite(r_i) || !std::isfinite(r_j)) throw ValidationError("ratings must be finite");
  return 1.0 / (1.0 + std::pow(10.0, (r_j - r_i) / 400.0));
}

EloState EloState::fresh(std::span<const ModelEntry> models, double k_factor, double initial_rating) {
  EloState state;
  state.k_factor = k_factor;
  state.initial_rating = initial_rating;
  for (const auto& m : models) state.ratings.emplace(m.model_id, initial_rating);
  return state;
}

namespace {

void check_score(double score) {
  if (score != 0.0 && score != 0.5 && score != 1.0) throw ValidationError("score must be 0.0, 0.5 or 1.0");
}

// Index-based replay shared by every public entry point.
std::vector<double> replay(std::span<const Edge> edges, std::span<const std::size_t> order, std::size_t k,
                           double k_factor, double initial_rating) {
  std::vector<double> r(k, initial_rating);
  for (std::size_t idx : order) {
    const Edge& e = edges[idx];
    auto& ra = r[static_cast<std::size_t>(e.side_a)];
    auto& rb = r[static_cast<std::size_t>(e.side_b)];
    const double delta = k_factor * (e.score_for_a - 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0)));
    ra += delta;
    rb -= delta;
  }
  return r;
}

EloState to_state(const MatchHistoryGraph& graph, const std::vector<double>& r, double k_factor,
                  double initial_rating) {
  EloState state;
  state.k_factor = k_factor;
  state.initial_rating = initial_rating;
  for (const auto& m : graph.models()) {
    state.ratings.emplace(m.model_id, r[static_cast<std::size_t>(m.registration_index)]);
  }
  return state;
}

}  // namespace

EloDelta elo_update(EloState& state, std::string_view model_i, std::string_view model_j, double score_for_i) {
  check_score(score_for_i);
  const auto it_i = state.ratings.find(model_i);
  const auto it_j = state.ratings.find(model_j);
  if (it_i == state.ratings.end()) throw NotFoundError("unknown model '" + std::string(model_i) + "'");
  if (it_j == state.ratings.end()) throw NotFoundError("unknown model '" + std::string(model_j) + "'");
  if (it_i == it_j) throw ValidationError("a model cannot play itself");
  const double expected = expected_score(it_i->second, it_j->second);
  // R_j moves by K((1 - S) - (1 - E)), the exact negation of R_i's change.
  const double delta = state.k_factor * (score_for_i - expected);
  it_i->second += delta;
  it_j->second -= delta;
  return EloDelta{delta, -delta};
}

EloState replay_elo(const MatchHistoryGraph& graph, std::span<const std::size_t> order, double k_factor,
                    double initial_rating) {
  const auto edges = graph.active_edges();
  if (order.size() != edges.size()) {
    throw ValidationError("replay order must cover all " + std::to_string(edges.size()) + " active records");
  }
  std::vector<bool> seen(edges.size(), false);
  for (std::size_t idx : order) {
    if (idx >= edges.size() || seen[idx]) throw ValidationError("replay order is not a permutation");
    seen[idx] = true;
  }
  return to_state(graph, replay(edges, order, graph.models().size(), k_factor, initial_rating), k_factor,
                  initial_rating);
}

EloState replay_elo(const MatchHistoryGraph& graph, double k_factor, double initial_rating) {
  std::vector<std::size_t> order(graph.active_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return replay_elo(graph, order, k_factor, initial_rating);
}

StableEloResult stable_elo(const MatchHistoryGraph& graph, const StableEloOptions& options) {
  if (options.n_shuffles < 1) throw ValidationError("n_shuffles must be at least 1");
  const auto edges = graph.active_edges();
  const std::size_t k = graph.models().size();
  const auto n = static_cast<std::size_t>(options.n_shuffles);

  StableEloResult out;
  out.n_shuffles = options.n_shuffles;
  out.per_shuffle_ratings.resize(n);
  parallel_for(n, options.threads, [&](std::size_t s) {
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng::Engine engine(rng::derive_seed(options.seed, /*stream=*/0x5eed, s));
    rng::shuffle(order, engine);
    out.per_shuffle_ratings[s] = replay(edges, order, k, options.k_factor, options.initial_rating);
  });

  for (const auto& m : graph.models()) {
    const auto col = static_cast<std::size_t>(m.registration_index);
    double sum = 0.0;
    for (const auto& row : out.per_shuffle_ratings) sum += row[col];
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (const auto& row : out.per_shuffle_ratings) sq += (row[col] - mean) * (row[col] - mean);
    out.model_ids.push_back(m.model_id);
    out.mean_ratings.emplace(m.model_id, mean);
    out.sigma.emplace(m.model_id, std::sqrt(sq / static_cast<double>(n)));
  }
  return out;
}

}  // namespace laughboard::rating
