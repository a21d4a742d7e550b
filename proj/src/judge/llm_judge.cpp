#include "laughboard/judge/llm_judge.hpp"

#include <chrono>
#include <thread>

#include "laughboard/judge/prompt.hpp"
#include "laughboard/judge/verdict_parser.hpp"

namespace laughboard::judge {

void sleep_seconds(double seconds) {
  if (seconds > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

LlmJudge::LlmJudge(JudgeConfig config, std::shared_ptr<ChatTransport> transport, SleepFn sleep)
    : config_(std::move(config)), transport_(std::move(transport)), sleep_(std::move(sleep)) {
  config_.validate();
  if (config_.kind != JudgeKind::kLlmHttp) throw ValidationError("LlmJudge needs an llm_http config");
  if (!transport_) throw ValidationError("LlmJudge needs a transport");
  if (!sleep_) sleep_ = sleep_seconds;
}

Adjudication LlmJudge::adjudicate(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b,
                                  std::uint64_t position_seed) const {
  check_pairing(prompt, gen_a, gen_b);
  Adjudication out;
  out.swapped = presentation_swapped(position_seed);
  const Generation& shown_a = out.swapped ? gen_b : gen_a;
  const Generation& shown_b = out.swapped ? gen_a : gen_b;
  const RenderedPrompt rendered = render_prompt(prompt.text, shown_a.text, shown_b.text);
  const ChatRequest request{*config_.model_name, rendered.system_text, rendered.user_text, config_.temperature,
                            config_.max_new_tokens};

  for (int attempt = 1; attempt <= config_.max_retries + 1; ++attempt) {
    out.attempts = attempt;
    try {
      ParsedVerdict parsed = parse_verdict(transport_->complete(request));
      out.verdict = std::move(parsed.verdict);
      if (out.swapped) out.verdict.decision = swap_sides(out.verdict.decision);
      out.score_for_a = score_for_a(out.verdict.decision);
      out.dropped_tags = parsed.dropped_tags;
      out.truncated_tags = parsed.truncated_tags;
      out.error.clear();
      return out;
    } catch (const TransportError& e) {
      out.error = e.what();
    } catch (const VerdictParseError& e) {
      out.error = e.what();
    }
    if (attempt <= config_.max_retries) {
      sleep_(retry_delay(attempt, config_.backoff_base_seconds, config_.backoff_cap_seconds));
    }
  }
  out.aborted = true;
  out.verdict = JudgeVerdict{};
  out.score_for_a = 0.5;
  return out;
}

}  // namespace laughboard::judge
