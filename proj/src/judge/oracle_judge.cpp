#include "laughboard/judge/oracle_judge.hpp"

#include <cmath>

#include "laughboard/analytics/taxonomy.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/random.hpp"
#include "laughboard/rating/elo.hpp"

namespace laughboard::judge {

namespace {

// Each model leans on one tag per axis; the judge names it most of the time.
constexpr double kSignatureWeight = 0.7;

std::string pick_tag(rng::Engine& engine, taxonomy::Axis axis, const std::string& model_id) {
  const auto list = taxonomy::tags(axis);
  const auto salt = static_cast<std::uint64_t>(axis) + 1;
  std::size_t idx = rng::derive_seed(rng::hash_string(model_id), salt) % list.size();
  if (engine.uniform() >= kSignatureWeight) idx = static_cast<std::size_t>(engine.below(list.size()));
  return std::string(list[idx]);
}

}  // namespace

void OracleConfig::validate() const {
  if (!(tie_probability >= 0.0 && tie_probability < 1.0)) {
    throw ValidationError("tie_probability must lie in [0, 1)");
  }
  for (const auto& [model, rating] : latent_ratings) {
    if (!std::isfinite(rating)) throw ValidationError("latent rating of '" + model + "' is not finite");
  }
}

OracleJudge::OracleJudge(std::string judge_id, OracleConfig config)
    : judge_id_(std::move(judge_id)), config_(std::move(config)) {
  if (judge_id_.empty()) throw ValidationError("judge_id must be non-empty");
  config_.validate();
}

double OracleJudge::latent(const std::string& model_id) const {
  const auto it = config_.latent_ratings.find(model_id);
  if (it == config_.latent_ratings.end()) throw NotFoundError("no latent rating for '" + model_id + "'");
  return it->second;
}

Adjudication OracleJudge::adjudicate(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b,
                                     std::uint64_t position_seed) const {
  check_pairing(prompt, gen_a, gen_b);
  Adjudication out;
  out.attempts = 1;
  out.swapped = config_.forced_swap.value_or(presentation_swapped(position_seed));
  const Generation& shown_a = out.swapped ? gen_b : gen_a;
  const Generation& shown_b = out.swapped ? gen_a : gen_b;

  rng::Engine engine(rng::derive_seed(config_.seed, /*stream=*/0x0e1c, position_seed));
  Decision presented = Decision::kTie;
  if (engine.uniform() >= config_.tie_probability) {
    const double p = rating::expected_score(latent(shown_a.model_id), latent(shown_b.model_id));
    presented = engine.uniform() < p ? Decision::kA : Decision::kB;
  }

  JudgeVerdict& v = out.verdict;
  v.decision = out.swapped ? swap_sides(presented) : presented;
  out.score_for_a = score_for_a(v.decision);
  if (v.decision == Decision::kTie) {
    v.reasoning = "Both land about equally.";
  } else {
    const bool a_won = v.decision == Decision::kA;
    const std::string& winner = a_won ? gen_a.model_id : gen_b.model_id;
    const std::string& loser = a_won ? gen_b.model_id : gen_a.model_id;
    v.reasoning = "The joke by " + winner + " is funnier.";
    if (config_.emit_features) {
      v.winner_humor_features.push_back(pick_tag(engine, taxonomy::Axis::kMechanism, winner));
      v.winner_delivery_features.push_back(pick_tag(engine, taxonomy::Axis::kDelivery, winner));
      v.loser_features.push_back(pick_tag(engine, taxonomy::Axis::kFailure, loser));
    }
  }
  return out;
}

}  // namespace laughboard::judge
