#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "laughboard/core/match_graph.hpp"

namespace laughboard::scheduler {

struct SchedulerConfig {
  std::int64_t c_max = 1;  // total comparison budget
  int min_rounds_per_model = 2;
  int max_rounds_per_model = 3;
  bool exhaustive = false;  // overrides c_max with C(K,2) * P

  void validate() const;
};

// c_max after resolving the exhaustive flag against the graph's size.
std::int64_t effective_budget(const SchedulerConfig& config, std::size_t n_models, std::size_t n_prompts);

// Which (model, prompt) generations exist. Default-constructed: all of them.
class PromptEligibility {
 public:
  void mark_missing(std::string model_id, std::string prompt_id);
  bool has(const std::string& model_id, const std::string& prompt_id) const;
  bool eligible(const std::string& model_a, const std::string& model_b, const std::string& prompt_id) const {
    return has(model_a, prompt_id) && has(model_b, prompt_id);
  }
  bool empty() const { return missing_.empty(); }

 private:
  std::set<std::pair<std::string, std::string>> missing_;
};

struct Pairing {
  std::string model_a;  // canonical order: lower registration index first
  std::string model_b;
  std::string prompt_id;

  bool operator==(const Pairing&) const = default;
};

struct RoundPlan {
  std::vector<Pairing> pairings;
  std::vector<std::string> byes;  // every registered model left unmatched
  bool exhausted = false;  // empty-plan signal: budget spent or nothing left to play

  bool operator==(const RoundPlan&) const = default;
};

using Ratings = std::map<std::string, double, std::less<>>;

// One round of greedy top-down pairing over the tracking ratings. Pure.
RoundPlan next_round(const MatchHistoryGraph& graph, const Ratings& ratings, const SchedulerConfig& config,
                     const PromptEligibility& eligibility = {});

bool is_exhausted(const MatchHistoryGraph& graph, const SchedulerConfig& config,
                  const PromptEligibility& eligibility = {});

}  // namespace laughboard::scheduler
