#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "laughboard/app/config.hpp"
#include "laughboard/app/dataset.hpp"

namespace laughboard::app {

struct SimulationConfig {
  int models = 9;
  int prompts = 50;
  double spacing = 100.0;  // Elo gap between neighbouring latent ratings
  double budget_fraction = 1.0;  // of C(K,2) * P
  int trials = 20;
  std::uint64_t seed = 0;
  int bootstrap_iterations = 100;
  double tie_probability = 0.0;
  unsigned threads = 1;

  void validate() const;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::int64_t matches = 0;
  double tau = 0.0;  // recovered BT order against the truth
  int covered = 0;   // models whose CI holds the true anchored rating
  int cells = 0;
  std::vector<std::string> recovered_order;
};

struct SimulationReport {
  SimulationConfig config;
  std::int64_t budget = 0;
  std::vector<std::string> true_order;
  std::vector<double> true_ratings;  // anchored to mean 1000, model order
  std::vector<TrialResult> trials;
  double mean_tau = 0.0;
  double coverage = 0.0;  // covered / cells over all trials
};

// Synthetic population: "sim0" is strongest, each next model `spacing` lower.
TournamentConfig simulation_tournament(const SimulationConfig& config, std::uint64_t trial_seed);
Dataset simulation_dataset(const SimulationConfig& config);

// Runs `trials` oracle tournaments in memory and scores rank recovery.
SimulationReport simulate(const SimulationConfig& config);

nlohmann::ordered_json to_json(const SimulationReport& report);
std::string format_text(const SimulationReport& report);

}  // namespace laughboard::app
