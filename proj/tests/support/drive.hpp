#pragma once

#include <functional>
#include <vector>

#include "builders.hpp"
#include "laughboard/rating/elo.hpp"
#include "laughboard/scheduler/swiss.hpp"

namespace lbtest {

// Score for canonical side A given (a, b, prompt) indices.
using Outcome = std::function<double(int, int, int)>;

// Plays scheduler rounds until the exhausted signal, updating tracking Elo in
// ledger order. Returns every plan, the final exhausted one excluded.
inline std::vector<laughboard::scheduler::RoundPlan> drive(laughboard::MatchHistoryGraph& g,
                                                           const laughboard::scheduler::SchedulerConfig& cfg,
                                                           const Outcome& outcome, int max_rounds = 1 << 20) {
  using namespace laughboard;
  auto elo = rating::EloState::fresh(g.models());
  std::vector<scheduler::RoundPlan> plans;
  for (int r = 0; r < max_rounds; ++r) {
    auto plan = scheduler::next_round(g, elo.ratings, cfg);
    if (plan.exhausted) break;
    for (const auto& p : plan.pairings) {
      const int a = g.require_model(p.model_a);
      const int b = g.require_model(p.model_b);
      const int q = g.require_prompt(p.prompt_id);
      const double s = outcome(a, b, q);
      g.append_match(make_record(p.model_a, p.model_b, p.prompt_id, s));
      rating::elo_update(elo, p.model_a, p.model_b, s);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace lbtest
