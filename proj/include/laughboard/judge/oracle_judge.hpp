#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "laughboard/judge/judge.hpp"

namespace laughboard::judge {

struct OracleConfig {
  std::map<std::string, double, std::less<>> latent_ratings;  // Elo scale
  double tie_probability = 0.0;
  std::uint64_t seed = 0;
  // Attach synthetic feature tags so analytics has something to count.
  bool emit_features = true;
  // Overrides the position coin. Only for checking swap symmetry.
  std::optional<bool> forced_swap;

  void validate() const;
};

// Synthetic judge with known ground truth: a tie fires with tie_probability,
// otherwise the side shown as A wins with the Elo-logistic probability of
// its latent rating against the other.
class OracleJudge final : public Judge {
 public:
  OracleJudge(std::string judge_id, OracleConfig config);

  const std::string& judge_id() const override { return judge_id_; }
  Adjudication adjudicate(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b,
                          std::uint64_t position_seed) const override;

 private:
  double latent(const std::string& model_id) const;

  std::string judge_id_;
  OracleConfig config_;
};

}  // namespace laughboard::judge
