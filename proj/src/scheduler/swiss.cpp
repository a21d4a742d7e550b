#include "laughboard/scheduler/swiss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "laughboard/core/errors.hpp"

namespace laughboard::scheduler {

void SchedulerConfig::validate() const {
  if (!exhaustive && c_max < 0) throw ValidationError("c_max must be non-negative");
  if (min_rounds_per_model < 0) throw ValidationError("min_rounds_per_model must be non-negative");
  if (max_rounds_per_model < 1) throw ValidationError("max_rounds_per_model must be at least 1");
  if (min_rounds_per_model > max_rounds_per_model) {
    throw ValidationError("min_rounds_per_model exceeds max_rounds_per_model");
  }
}

std::int64_t effective_budget(const SchedulerConfig& config, std::size_t n_models, std::size_t n_prompts) {
  if (!config.exhaustive) return config.c_max;
  const auto k = static_cast<std::int64_t>(n_models);
  return k * (k - 1) / 2 * static_cast<std::int64_t>(n_prompts);
}

void PromptEligibility::mark_missing(std::string model_id, std::string prompt_id) {
  missing_.emplace(std::move(model_id), std::move(prompt_id));
}

bool PromptEligibility::has(const std::string& model_id, const std::string& prompt_id) const {
  return missing_.empty() || !missing_.contains({model_id, prompt_id});
}

namespace {

// A pair/prompt slot that aborted this many times is not offered again.
constexpr int kAbortLimit = 2;

struct PairSlot {
  bool open = false;     // under-sampled: below quota with a prompt to play
  int next_prompt = -1;  // prompt registration index
};

class RoundState {
 public:
  RoundState(const MatchHistoryGraph& graph, const PromptEligibility& eligibility, std::int64_t budget)
      : k_(static_cast<int>(graph.models().size())), slots_(static_cast<std::size_t>(k_ * k_)) {
    const std::int64_t n_pairs = static_cast<std::int64_t>(k_) * (k_ - 1) / 2;
    const auto n_prompts = static_cast<std::int64_t>(graph.prompts().size());
    if (n_prompts == 0 || n_pairs == 0) return;
    const std::int64_t quota = (budget + n_pairs - 1) / n_pairs;
    const std::int64_t repeat_cap = (quota + n_prompts - 1) / n_prompts;

    std::vector<int> prompt_order(static_cast<std::size_t>(n_prompts));
    std::iota(prompt_order.begin(), prompt_order.end(), 0);
    std::sort(prompt_order.begin(), prompt_order.end(),
              [&](int x, int y) { return graph.prompt(x).prompt_id < graph.prompt(y).prompt_id; });

    std::vector<char> has;  // model x prompt, empty when everything is eligible
    if (!eligibility.empty()) {
      has.resize(static_cast<std::size_t>(k_ * n_prompts));
      for (int m = 0; m < k_; ++m) {
        for (int p = 0; p < n_prompts; ++p) {
          has[static_cast<std::size_t>(m * n_prompts + p)] =
              eligibility.has(graph.model(m).model_id, graph.prompt(p).prompt_id) ? 1 : 0;
        }
      }
    }

    for (int i = 0; i < k_; ++i) {
      for (int j = i + 1; j < k_; ++j) {
        const auto active = graph.active_prompt_counts(i, j);
        const auto aborted = graph.aborted_prompt_counts(i, j);
        const auto at = [](std::span<const int> v, int p) {
          return static_cast<std::size_t>(p) < v.size() ? v[static_cast<std::size_t>(p)] : 0;
        };
        std::int64_t total = 0;
        int best_prompt = -1;
        int best_count = std::numeric_limits<int>::max();
        for (int p : prompt_order) {
          const int count = at(active, p);
          total += count;
          if (!has.empty() && (!has[static_cast<std::size_t>(i * n_prompts + p)] ||
                               !has[static_cast<std::size_t>(j * n_prompts + p)])) {
            continue;
          }
          if (at(aborted, p) >= kAbortLimit) continue;
          if (count < best_count) {
            best_count = count;
            best_prompt = p;
          }
        }
        if (total < quota && best_prompt >= 0 && best_count < repeat_cap) {
          slot(i, j) = PairSlot{true, best_prompt};
          slot(j, i) = slot(i, j);
          any_open_ = true;
        }
      }
    }
  }

  bool any_open() const { return any_open_; }
  const PairSlot& slot(int i, int j) const { return slots_[static_cast<std::size_t>(i * k_ + j)]; }

  bool has_open_pair(int m) const {
    for (int j = 0; j < k_; ++j) {
      if (j != m && slot(m, j).open) return true;
    }
    return false;
  }

 private:
  PairSlot& slot(int i, int j) { return slots_[static_cast<std::size_t>(i * k_ + j)]; }

  int k_;
  std::vector<PairSlot> slots_;
  bool any_open_ = false;
};

// Matches each model has received overall and within the current epoch. An
// epoch closes once every model has played min_rounds_per_model more times,
// so the epoch count is what a model played beyond the completed epochs.
struct Exposure {
  std::vector<int> epoch;
  std::vector<int> total;
};

Exposure exposure(const MatchHistoryGraph& graph, const SchedulerConfig& config) {
  const auto k = graph.models().size();
  Exposure out{std::vector<int>(k, 0), std::vector<int>(k, 0)};
  const auto edges = graph.edges();
  for (std::size_t pos = 0; pos < edges.size(); ++pos) {
    if (!graph.is_active(pos)) continue;
    ++out.total[static_cast<std::size_t>(edges[pos].side_a)];
    ++out.total[static_cast<std::size_t>(edges[pos].side_b)];
  }
  const int floor = *std::min_element(out.total.begin(), out.total.end());
  const int closed = config.min_rounds_per_model > 0
                         ? floor / config.min_rounds_per_model * config.min_rounds_per_model
                         : floor;
  for (std::size_t m = 0; m < k; ++m) out.epoch[m] = out.total[m] - closed;
  return out;
}

using Match = std::pair<int, int>;

// Greedy top-down: the highest-rated unmatched model takes its nearest-rated
// under-sampled partner. A model with no such partner sits the round out.
std::vector<Match> greedy(const std::vector<int>& ranked, const std::vector<double>& rating,
                          const RoundState& state) {
  std::vector<int> remaining = ranked;
  std::vector<Match> out;
  while (remaining.size() >= 2) {
    const int i = remaining.front();
    std::size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      const int j = remaining[k];
      if (!state.slot(i, j).open) continue;
      const double gap = std::abs(rating[static_cast<std::size_t>(i)] - rating[static_cast<std::size_t>(j)]);
      if (gap < best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    if (best != 0) {
      out.emplace_back(i, remaining[best]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    remaining.erase(remaining.begin());
  }
  return out;
}

std::vector<Match> build_round(const std::vector<int>& ranked, const std::vector<double>& rating,
                               const RoundState& state, const Exposure& seen) {
  if (ranked.size() % 2 == 0) return greedy(ranked, rating, state);

  // Odd field: one model sits out. Prefer the most-exposed model (overall,
  // then this epoch, then latest registered), but never at the cost of a pairing.
  std::vector<int> sit_out = ranked;
  std::sort(sit_out.begin(), sit_out.end(), [&](int x, int y) {
    const auto ux = static_cast<std::size_t>(x);
    const auto uy = static_cast<std::size_t>(y);
    if (seen.total[ux] != seen.total[uy]) return seen.total[ux] > seen.total[uy];
    if (seen.epoch[ux] != seen.epoch[uy]) return seen.epoch[ux] > seen.epoch[uy];
    return x > y;
  });
  const std::size_t perfect = ranked.size() / 2;
  std::vector<Match> best;
  bool have_best = false;
  for (int bye : sit_out) {
    std::vector<int> field;
    field.reserve(ranked.size() - 1);
    for (int m : ranked) {
      if (m != bye) field.push_back(m);
    }
    auto matches = greedy(field, rating, state);
    if (!have_best || matches.size() > best.size()) {
      best = std::move(matches);
      have_best = true;
    }
    if (best.size() == perfect) break;
  }
  return best;
}

}  // namespace

RoundPlan next_round(const MatchHistoryGraph& graph, const Ratings& ratings, const SchedulerConfig& config,
                     const PromptEligibility& eligibility) {
  config.validate();
  const auto models = graph.models();
  if (models.size() < 2) throw ValidationError("pairing needs at least two registered models");

  RoundPlan plan;
  const std::int64_t budget = effective_budget(config, models.size(), graph.prompts().size());
  const auto used = static_cast<std::int64_t>(graph.active_count());
  const RoundState state(graph, eligibility, budget);
  if (used >= budget || !state.any_open()) {
    for (const auto& m : models) plan.byes.push_back(m.model_id);
    plan.exhausted = true;
    return plan;
  }

  std::vector<double> rating(models.size());
  for (const auto& m : models) {
    const auto it = ratings.find(m.model_id);
    if (it == ratings.end()) throw NotFoundError("no tracking rating for model '" + m.model_id + "'");
    if (!std::isfinite(it->second)) throw ValidationError("tracking rating for '" + m.model_id + "' is not finite");
    rating[static_cast<std::size_t>(m.registration_index)] = it->second;
  }

  std::vector<int> ranked(models.size());
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](int x, int y) {
    return rating[static_cast<std::size_t>(x)] > rating[static_cast<std::size_t>(y)];
  });

  const Exposure seen = exposure(graph, config);
  const auto field = [&](bool respect_epoch) {
    std::vector<int> out;
    for (int m : ranked) {
      if (!state.has_open_pair(m)) continue;
      if (respect_epoch && seen.epoch[static_cast<std::size_t>(m)] >= config.max_rounds_per_model) continue;
      out.push_back(m);
    }
    return out;
  };

  auto matches = build_round(field(true), rating, state, seen);
  // Everyone still playable is capped for the epoch: start a fresh one.
  if (matches.empty()) matches = build_round(field(false), rating, state, seen);

  const auto room = static_cast<std::size_t>(budget - used);
  if (matches.size() > room) matches.resize(room);

  std::vector<bool> playing(models.size(), false);
  for (const auto& [i, j] : matches) {
    playing[static_cast<std::size_t>(i)] = playing[static_cast<std::size_t>(j)] = true;
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    plan.pairings.push_back(Pairing{graph.model(lo).model_id, graph.model(hi).model_id,
                                    graph.prompt(state.slot(i, j).next_prompt).prompt_id});
  }
  for (int m : ranked) {
    if (!playing[static_cast<std::size_t>(m)]) plan.byes.push_back(graph.model(m).model_id);
  }
  return plan;
}

bool is_exhausted(const MatchHistoryGraph& graph, const SchedulerConfig& config,
                  const PromptEligibility& eligibility) {
  config.validate();
  const std::int64_t budget = effective_budget(config, graph.models().size(), graph.prompts().size());
  if (static_cast<std::int64_t>(graph.active_count()) >= budget) return true;
  return !RoundState(graph, eligibility, budget).any_open();
}

}  // namespace laughboard::scheduler
