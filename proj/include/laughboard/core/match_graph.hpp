#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "laughboard/core/types.hpp"

namespace laughboard {

// Unordered model pair keyed by registration index, smaller index first.
struct PairKey {
  int lo = 0;
  int hi = 0;

  static PairKey of(int a, int b) { return a < b ? PairKey{a, b} : PairKey{b, a}; }
  auto operator<=>(const PairKey&) const = default;
};

// Index-level view of one record, used by the estimators.
struct Edge {
  int side_a = 0;  // registration index
  int side_b = 0;
  int prompt = 0;  // prompt registration index
  double score_for_a = 0.5;
};

struct PairCoverage {
  std::map<std::string, int> per_prompt;          // estimator-visible records
  std::map<std::string, int> aborted_per_prompt;  // tombstones (aborts only)
  int total = 0;
};

// The tournament ledger: registered models and prompts plus the append-only
// list of match records. Appends go through one writer; a const graph may be
// read from any number of threads.
class MatchHistoryGraph {
 public:
  const ModelEntry& register_model(std::string model_id, std::string display_name = {});
  const PromptItem& register_prompt(PromptItem prompt);

  // Validates and appends. The record's match_id must be 0 (assign the next
  // id) or equal to next_match_id(); the stored copy is returned.
  const MatchRecord& append_match(MatchRecord record);

  PairCoverage coverage(std::string_view model_a, std::string_view model_b) const;

  std::span<const ModelEntry> models() const { return models_; }
  std::span<const PromptItem> prompts() const { return prompts_; }
  std::span<const MatchRecord> records() const { return records_; }
  std::span<const Edge> edges() const { return edges_; }

  // Multiplicity of all records (tombstones included) per unordered pair.
  const std::map<PairKey, int>& pair_counts() const { return pair_counts_; }
  int pair_count(int a, int b) const;

  std::optional<int> model_index(std::string_view model_id) const;
  std::optional<int> prompt_index(std::string_view prompt_id) const;
  int require_model(std::string_view model_id) const;
  int require_prompt(std::string_view prompt_id) const;
  const ModelEntry& model(int index) const { return models_.at(static_cast<std::size_t>(index)); }
  const PromptItem& prompt(int index) const { return prompts_.at(static_cast<std::size_t>(index)); }

  // True for a non-tombstone record that no later tombstone voided.
  bool is_active(std::size_t position) const { return active_[position]; }
  std::size_t active_count() const { return active_count_; }
  // Positions (into records()) of active records, in ledger order.
  std::vector<std::size_t> active_positions() const;
  std::vector<Edge> active_edges() const;

  // Estimator-visible records and aborts for a pair on one prompt.
  int prompt_count(int a, int b, int prompt) const;
  int aborted_count(int a, int b, int prompt) const;
  // Per-prompt counts for a pair, indexed by prompt registration index. May be
  // shorter than prompts(); missing entries are zero.
  std::span<const int> active_prompt_counts(int a, int b) const;
  std::span<const int> aborted_prompt_counts(int a, int b) const;

  std::int64_t next_match_id() const { return static_cast<std::int64_t>(records_.size()) + 1; }

 private:
  struct PromptTally {
    std::vector<int> active;
    std::vector<int> aborted;
  };

  PromptTally& tally_for(PairKey key);

  std::vector<ModelEntry> models_;
  std::vector<PromptItem> prompts_;
  std::vector<MatchRecord> records_;
  std::vector<Edge> edges_;
  std::vector<bool> active_;
  std::size_t active_count_ = 0;
  std::map<PairKey, int> pair_counts_;
  std::map<PairKey, PromptTally> prompt_tallies_;
  std::unordered_map<std::string, int> model_lookup_;
  std::unordered_map<std::string, int> prompt_lookup_;
};

}  // namespace laughboard
