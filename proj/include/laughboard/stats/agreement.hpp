#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laughboard/core/match_graph.hpp"
#include "laughboard/core/types.hpp"
#include "laughboard/rating/elo.hpp"

namespace laughboard::stats {

struct KendallResult {
  double tau = 0.0;
  // Exact two-sided p-value under uniformly random orderings.
  double p_value = 1.0;
  int concordant = 0;
  int discordant = 0;
};

// Tau-a between two strict rankings of the same model set (rank 1 first).
// Throws ValidationError on duplicates, a set mismatch or fewer than 2 models.
KendallResult kendall_tau(std::span<const std::string> a, std::span<const std::string> b);

// P(|tau| >= |tau_obs|) for n items, from the exact inversion-count law.
double kendall_exact_p(int n, int discordant);

struct TransitivityResult {
  std::optional<double> score;  // nullopt: no triad has all three edges
  int complete_triads = 0;
  int cyclic_triads = 0;
};

// Majority-preference digraph over active records: i -> j when i's score
// against j exceeds one half. Score = 1 - cyclic / complete triads.
TransitivityResult transitivity_score(const MatchHistoryGraph& graph);

// Nominal labels per unit, keyed by annotator.
class AnnotationTable {
 public:
  void add(const std::string& unit_id, const std::string& annotator_id, Decision label);

  const std::map<std::string, std::map<std::string, Decision>>& units() const { return units_; }

 private:
  std::map<std::string, std::map<std::string, Decision>> units_;
};

struct AlphaResult {
  // nullopt when expected disagreement is zero (one label everywhere).
  std::optional<double> alpha;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  int usable_units = 0;
  long pairable_values = 0;

  // The convention for the degenerate table: perfect homogeneity reads as 1.
  double value_or_convention() const { return alpha.value_or(1.0); }
  bool degenerate() const { return !alpha.has_value(); }
};

// Krippendorff's alpha, nominal metric, via the coincidence matrix. Units
// with fewer than two values are skipped; fewer than two usable units
// throws ValidationError. Labels are small non-negative integers.
AlphaResult krippendorff_alpha(const std::vector<std::vector<int>>& units);
AlphaResult krippendorff_alpha(const AnnotationTable& table);

// Share of agreeing ordered value pairs within usable units.
std::optional<double> percent_agreement(const AnnotationTable& table);

struct StabilityReport {
  double sigma_max = 0.0;
  double sigma_mean = 0.0;
  std::map<std::string, double, std::less<>> sigma;
  int n_shuffles = 0;
};

// Spread of the shuffled Stable Elo replays; needs at least 2 shuffles.
StabilityReport stability_report(const rating::StableEloResult& stable);

}  // namespace laughboard::stats
