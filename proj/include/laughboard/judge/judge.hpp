#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "laughboard/core/types.hpp"

namespace laughboard::judge {

enum class JudgeKind { kLlmHttp, kSyntheticOracle };

std::string_view to_string(JudgeKind kind);
JudgeKind parse_judge_kind(std::string_view text);

struct JudgeConfig {
  std::string judge_id = "oracle";
  JudgeKind kind = JudgeKind::kSyntheticOracle;
  double temperature = 0.1;
  int max_new_tokens = 512;
  int max_retries = 3;
  double backoff_base_seconds = 2.0;
  double backoff_cap_seconds = 4.0;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> model_name;
  std::optional<std::string> auth_env_var;  // names the variable, never holds the token
  double timeout_seconds = 60.0;
  int max_in_flight = 4;

  // Throws ValidationError.
  void validate() const;

  bool operator==(const JudgeConfig&) const = default;
};

// Seconds to wait before retry number `attempt` (1-based): min(base^attempt, cap).
double retry_delay(int attempt, double base, double cap);

// Whether the judge is shown canonical side B as "JOKE A" for this match.
bool presentation_swapped(std::uint64_t position_seed);

struct Adjudication {
  JudgeVerdict verdict;  // canonical sides
  double score_for_a = 0.5;
  bool swapped = false;
  bool aborted = false;
  std::string error;  // last failure when aborted
  int attempts = 0;
  int dropped_tags = 0;
  int truncated_tags = 0;
};

class Judge {
 public:
  virtual ~Judge() = default;

  virtual const std::string& judge_id() const = 0;

  // gen_a and gen_b are in canonical order and must answer `prompt` from two
  // different models. Safe to call from several threads at once.
  virtual Adjudication adjudicate(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b,
                                  std::uint64_t position_seed) const = 0;
};

// Shared precondition check for adjudicate(); throws ValidationError.
void check_pairing(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b);

}  // namespace laughboard::judge
