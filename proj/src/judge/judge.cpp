#include "laughboard/judge/judge.hpp"

#include <cmath>

#include "laughboard/core/errors.hpp"
#include "laughboard/core/random.hpp"

namespace laughboard::judge {

std::string_view to_string(JudgeKind kind) {
  return kind == JudgeKind::kLlmHttp ? "llm_http" : "synthetic_oracle";
}

JudgeKind parse_judge_kind(std::string_view text) {
  if (text == "llm_http" || text == "llm") return JudgeKind::kLlmHttp;
  if (text == "synthetic_oracle" || text == "oracle") return JudgeKind::kSyntheticOracle;
  throw ValidationError("unknown judge kind '" + std::string(text) + "'");
}

void JudgeConfig::validate() const {
  if (judge_id.empty()) throw ValidationError("judge_id must be non-empty");
  if (!(temperature >= 0.0)) throw ValidationError("temperature must be >= 0");
  if (max_new_tokens < 1) throw ValidationError("max_new_tokens must be positive");
  if (max_retries < 0) throw ValidationError("max_retries must be >= 0");
  if (!(backoff_base_seconds >= 1.0)) throw ValidationError("backoff_base_seconds must be >= 1");
  if (!(backoff_cap_seconds >= 0.0)) throw ValidationError("backoff_cap_seconds must be >= 0");
  if (!(timeout_seconds > 0.0)) throw ValidationError("timeout_seconds must be positive");
  if (max_in_flight < 1) throw ValidationError("max_in_flight must be positive");
  if (kind == JudgeKind::kLlmHttp) {
    if (!endpoint_url || endpoint_url->empty()) throw ValidationError("an llm_http judge needs endpoint_url");
    if (!model_name || model_name->empty()) throw ValidationError("an llm_http judge needs model_name");
  }
}

double retry_delay(int attempt, double base, double cap) {
  if (attempt < 1) throw ValidationError("attempt must be >= 1");
  return std::min(std::pow(base, attempt), cap);
}

bool presentation_swapped(std::uint64_t position_seed) {
  rng::Engine engine(rng::derive_seed(position_seed, /*stream=*/0x5a4b));
  return engine.coin();
}

void check_pairing(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b) {
  if (gen_a.model_id == gen_b.model_id) throw ValidationError("a model cannot be judged against itself");
  if (gen_a.prompt_id != prompt.prompt_id || gen_b.prompt_id != prompt.prompt_id) {
    throw ValidationError("generations do not answer prompt '" + prompt.prompt_id + "'");
  }
}

}  // namespace laughboard::judge
