#include "laughboard/core/match_graph.hpp"

#include <cmath>
#include <string>

#include "laughboard/analytics/taxonomy.hpp"
#include "laughboard/core/errors.hpp"

namespace laughboard {

namespace {

void check_features(const std::vector<std::string>& features, taxonomy::Axis axis,
                    std::string_view field) {
  if (features.size() > 3) {
    throw ValidationError(std::string(field) + " has more than 3 entries");
  }
  for (const auto& tag : features) {
    if (!taxonomy::contains(axis, tag)) {
      throw ValidationError(std::string(field) + " contains unknown tag '" + tag + "'");
    }
  }
}

}  // namespace

const ModelEntry& MatchHistoryGraph::register_model(std::string model_id,
                                                    std::string display_name) {
  if (model_id.empty()) throw ValidationError("model_id must be non-empty");
  if (model_lookup_.contains(model_id)) {
    throw ValidationError("model '" + model_id + "' is already registered");
  }
  const int index = static_cast<int>(models_.size());
  if (display_name.empty()) display_name = model_id;
  model_lookup_.emplace(model_id, index);
  models_.push_back(ModelEntry{std::move(model_id), std::move(display_name), index});
  return models_.back();
}

const PromptItem& MatchHistoryGraph::register_prompt(PromptItem prompt) {
  if (prompt.prompt_id.empty()) throw ValidationError("prompt_id must be non-empty");
  if (prompt_lookup_.contains(prompt.prompt_id)) {
    throw ValidationError("prompt '" + prompt.prompt_id + "' is already registered");
  }
  prompt_lookup_.emplace(prompt.prompt_id, static_cast<int>(prompts_.size()));
  prompts_.push_back(std::move(prompt));
  return prompts_.back();
}

MatchHistoryGraph::PromptTally& MatchHistoryGraph::tally_for(PairKey key) {
  auto& tally = prompt_tallies_[key];
  if (tally.active.size() < prompts_.size()) {
    tally.active.resize(prompts_.size(), 0);
    tally.aborted.resize(prompts_.size(), 0);
  }
  return tally;
}

const MatchRecord& MatchHistoryGraph::append_match(MatchRecord record) {
  const int a = require_model(record.side_a_model);
  const int b = require_model(record.side_b_model);
  if (a == b) throw ValidationError("a model cannot play itself ('" + record.side_a_model + "')");
  const int prompt = require_prompt(record.prompt_id);

  const std::int64_t expected_id = next_match_id();
  if (record.match_id != 0 && record.match_id != expected_id) {
    throw ValidationError("match_id " + std::to_string(record.match_id) + " breaks the sequence (expected " +
                          std::to_string(expected_id) + ")");
  }
  record.match_id = expected_id;

  if (!std::isfinite(record.elo_delta_a)) throw ValidationError("elo_delta_a must be finite");

  std::optional<std::size_t> voided_position;
  if (record.voids) {
    if (!record.tombstone) throw ValidationError("only a tombstone may void another record");
    const std::int64_t target = *record.voids;
    if (target < 1 || target >= expected_id) {
      throw NotFoundError("voided match_id " + std::to_string(target) + " does not exist");
    }
    const auto pos = static_cast<std::size_t>(target - 1);
    const MatchRecord& old = records_[pos];
    if (!active_[pos]) {
      throw ValidationError("match_id " + std::to_string(target) + " is not active and cannot be voided");
    }
    if (old.prompt_id != record.prompt_id ||
        PairKey::of(a, b) != PairKey::of(edges_[pos].side_a, edges_[pos].side_b)) {
      throw ValidationError("a voiding tombstone must name the same pair and prompt as its target");
    }
    voided_position = pos;
  }

  if (!record.tombstone) {
    if (record.score_for_a != score_for_a(record.verdict.decision)) {
      throw ValidationError("score_for_a disagrees with the verdict decision");
    }
    check_features(record.verdict.winner_humor_features, taxonomy::Axis::kMechanism,
                   "winner_humor_features");
    check_features(record.verdict.winner_delivery_features, taxonomy::Axis::kDelivery,
                   "winner_delivery_features");
    check_features(record.verdict.loser_features, taxonomy::Axis::kFailure, "loser_features");
  }

  const PairKey key = PairKey::of(a, b);
  auto& tally = tally_for(key);
  const auto p = static_cast<std::size_t>(prompt);
  if (voided_position) {
    active_[*voided_position] = false;
    --active_count_;
    --tally.active[p];
  } else if (record.tombstone) {
    ++tally.aborted[p];
  } else {
    ++tally.active[p];
    ++active_count_;
  }
  ++pair_counts_[key];

  edges_.push_back(Edge{a, b, prompt, record.score_for_a});
  active_.push_back(!record.tombstone);
  records_.push_back(std::move(record));
  return records_.back();
}

PairCoverage MatchHistoryGraph::coverage(std::string_view model_a, std::string_view model_b) const {
  const int a = require_model(model_a);
  const int b = require_model(model_b);
  if (a == b) throw ValidationError("coverage needs two distinct models");
  PairCoverage out;
  const auto it = prompt_tallies_.find(PairKey::of(a, b));
  if (it == prompt_tallies_.end()) return out;
  for (std::size_t p = 0; p < it->second.active.size(); ++p) {
    if (it->second.active[p] > 0) out.per_prompt[prompts_[p].prompt_id] = it->second.active[p];
    if (it->second.aborted[p] > 0) out.aborted_per_prompt[prompts_[p].prompt_id] = it->second.aborted[p];
    out.total += it->second.active[p];
  }
  return out;
}

int MatchHistoryGraph::pair_count(int a, int b) const {
  const auto it = pair_counts_.find(PairKey::of(a, b));
  return it == pair_counts_.end() ? 0 : it->second;
}

std::optional<int> MatchHistoryGraph::model_index(std::string_view model_id) const {
  const auto it = model_lookup_.find(std::string(model_id));
  if (it == model_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> MatchHistoryGraph::prompt_index(std::string_view prompt_id) const {
  const auto it = prompt_lookup_.find(std::string(prompt_id));
  if (it == prompt_lookup_.end()) return std::nullopt;
  return it->second;
}

int MatchHistoryGraph::require_model(std::string_view model_id) const {
  if (auto index = model_index(model_id)) return *index;
  throw NotFoundError("unknown model '" + std::string(model_id) + "'");
}

int MatchHistoryGraph::require_prompt(std::string_view prompt_id) const {
  if (auto index = prompt_index(prompt_id)) return *index;
  throw NotFoundError("unknown prompt '" + std::string(prompt_id) + "'");
}

std::vector<std::size_t> MatchHistoryGraph::active_positions() const {
  std::vector<std::size_t> out;
  out.reserve(active_count_);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i]) out.push_back(i);
  }
  return out;
}

std::vector<Edge> MatchHistoryGraph::active_edges() const {
  std::vector<Edge> out;
  out.reserve(active_count_);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i]) out.push_back(edges_[i]);
  }
  return out;
}

int MatchHistoryGraph::prompt_count(int a, int b, int prompt) const {
  const auto it = prompt_tallies_.find(PairKey::of(a, b));
  if (it == prompt_tallies_.end()) return 0;
  const auto p = static_cast<std::size_t>(prompt);
  return p < it->second.active.size() ? it->second.active[p] : 0;
}

int MatchHistoryGraph::aborted_count(int a, int b, int prompt) const {
  const auto it = prompt_tallies_.find(PairKey::of(a, b));
  if (it == prompt_tallies_.end()) return 0;
  const auto p = static_cast<std::size_t>(prompt);
  return p < it->second.aborted.size() ? it->second.aborted[p] : 0;
}

std::span<const int> MatchHistoryGraph::active_prompt_counts(int a, int b) const {
  const auto it = prompt_tallies_.find(PairKey::of(a, b));
  if (it == prompt_tallies_.end()) return {};
  return it->second.active;
}

std::span<const int> MatchHistoryGraph::aborted_prompt_counts(int a, int b) const {
  const auto it = prompt_tallies_.find(PairKey::of(a, b));
  if (it == prompt_tallies_.end()) return {};
  return it->second.aborted;
}

}  // namespace laughboard
