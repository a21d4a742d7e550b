#include "laughboard/app/simulate.hpp"

#include <cmath>

#include <fmt/format.h>

#include "laughboard/app/orchestrator.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/random.hpp"
#include "laughboard/rating/bootstrap.hpp"
#include "laughboard/stats/agreement.hpp"

namespace laughboard::app {

void SimulationConfig::validate() const {
  if (models < 2) throw ValidationError("simulate needs at least 2 models");
  if (prompts < 1) throw ValidationError("simulate needs at least 1 prompt");
  if (!(spacing >= 0.0) || !std::isfinite(spacing)) throw ValidationError("spacing must be non-negative");
  if (!(budget_fraction >= 0.0 && budget_fraction <= 1.0)) throw ValidationError("budget fraction must lie in [0, 1]");
  if (trials < 1) throw ValidationError("simulate needs at least 1 trial");
  if (bootstrap_iterations < 1) throw ValidationError("bootstrap_iterations must be >= 1");
  if (!(tie_probability >= 0.0 && tie_probability < 1.0)) throw ValidationError("tie_probability must lie in [0, 1)");
}

namespace {

std::int64_t budget_of(const SimulationConfig& c) {
  const double full = c.models * (c.models - 1) / 2.0 * c.prompts;
  return std::llround(c.budget_fraction * full);
}

std::string sim_model(int i) { return "sim" + std::to_string(i); }
std::string sim_prompt(int p) { return fmt::format("s{:04d}", p); }

}  // namespace

TournamentConfig simulation_tournament(const SimulationConfig& c, std::uint64_t trial_seed) {
  TournamentConfig t;
  for (int i = 0; i < c.models; ++i) {
    t.models.push_back({sim_model(i), sim_model(i), 1000.0 - c.spacing * i});
  }
  t.judge.judge_id = "oracle";
  t.judge.max_in_flight = 1;
  t.oracle.tie_probability = c.tie_probability;
  t.scheduler.exhaustive = false;
  t.scheduler.c_max = budget_of(c);
  t.rating.bootstrap_iterations = c.bootstrap_iterations;
  t.seed = trial_seed;
  t.threads = c.threads;
  return t;
}

Dataset simulation_dataset(const SimulationConfig& c) {
  std::vector<PromptItem> prompts;
  std::vector<Generation> generations;
  std::vector<std::string> ids;
  for (int p = 0; p < c.prompts; ++p) prompts.push_back({sim_prompt(p), "headline " + std::to_string(p), TaskKind::kHeadline});
  for (int i = 0; i < c.models; ++i) {
    ids.push_back(sim_model(i));
    for (int p = 0; p < c.prompts; ++p) generations.push_back({sim_model(i), sim_prompt(p), "joke " + sim_model(i)});
  }
  return make_dataset(std::move(prompts), generations, ids);
}

SimulationReport simulate(const SimulationConfig& c) {
  c.validate();
  SimulationReport out;
  out.config = c;
  out.budget = budget_of(c);
  const Dataset dataset = simulation_dataset(c);
  double mean_latent = 0.0;
  for (int i = 0; i < c.models; ++i) mean_latent += (1000.0 - c.spacing * i) / c.models;
  for (int i = 0; i < c.models; ++i) {
    out.true_order.push_back(sim_model(i));
    out.true_ratings.push_back(1000.0 - c.spacing * i - mean_latent + 1000.0);
  }

  PlayOptions quiet;
  quiet.clock = nullptr;
  long covered = 0, cells = 0;
  double tau_sum = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    TrialResult trial;
    trial.seed = rng::derive_seed(c.seed, static_cast<std::uint64_t>(t));
    const auto config = simulation_tournament(c, trial.seed);
    const auto judge = make_judge(config);
    auto graph = empty_graph(config, dataset);
    play_tournament(graph, config, dataset, *judge, {}, {}, quiet);
    trial.matches = static_cast<std::int64_t>(graph.active_count());

    rating::BootstrapOptions bo;
    bo.n_boot = c.bootstrap_iterations;
    bo.seed = trial.seed;
    bo.threads = c.threads;
    std::optional<rating::BtFit> fit;
    std::optional<rating::BootstrapResult> ci;
    try {
      fit = rating::fit_bradley_terry(graph, bo.bt);
      ci = rating::bootstrap_ci(graph, bo);
    } catch (const Error&) {
      // Too few matches to connect the graph: no order and nothing covered.
    }
    if (fit) {
      trial.recovered_order = out.true_order;
      std::stable_sort(trial.recovered_order.begin(), trial.recovered_order.end(),
                       [&](const std::string& a, const std::string& b) {
                         return fit->ratings.find(a)->second > fit->ratings.find(b)->second;
                       });
      trial.tau = stats::kendall_tau(trial.recovered_order, out.true_order).tau;
    }
    trial.cells = c.models;
    if (ci) {
      for (int i = 0; i < c.models; ++i) {
        const auto& iv = ci->intervals.find(sim_model(i))->second;
        const double truth = out.true_ratings[static_cast<std::size_t>(i)];
        trial.covered += iv.low <= truth && truth <= iv.high;
      }
    }
    covered += trial.covered;
    cells += trial.cells;
    tau_sum += trial.tau;
    out.trials.push_back(std::move(trial));
  }
  out.mean_tau = tau_sum / c.trials;
  out.coverage = static_cast<double>(covered) / static_cast<double>(cells);
  return out;
}

nlohmann::ordered_json to_json(const SimulationReport& r) {
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"seed", t.seed},
                      {"matches", t.matches},
                      {"tau", t.tau},
                      {"covered", t.covered},
                      {"cells", t.cells},
                      {"recovered_order", t.recovered_order}});
  }
  const auto& c = r.config;
  return {{"models", c.models},
          {"prompts", c.prompts},
          {"spacing", c.spacing},
          {"budget_fraction", c.budget_fraction},
          {"budget", r.budget},
          {"trials", c.trials},
          {"seed", c.seed},
          {"bootstrap_iterations", c.bootstrap_iterations},
          {"true_order", r.true_order},
          {"true_ratings", r.true_ratings},
          {"mean_tau", r.mean_tau},
          {"coverage", r.coverage},
          {"per_trial", std::move(trials)}};
}

std::string format_text(const SimulationReport& r) {
  const auto& c = r.config;
  return fmt::format(
      "{} models, {} prompts, spacing {} Elo, budget {} of {} ({:.0f}%), {} trials\n"
      "mean Kendall tau vs truth: {:.4f}\n"
      "95% CI coverage of true ratings: {:.1f}%\n",
      c.models, c.prompts, c.spacing, r.budget, c.models * (c.models - 1) / 2 * c.prompts, c.budget_fraction * 100.0,
      c.trials, r.mean_tau, r.coverage * 100.0);
}

}  // namespace laughboard::app
