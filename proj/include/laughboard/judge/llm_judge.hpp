#pragma once

#include <functional>
#include <memory>
#include <string>

#include "laughboard/core/errors.hpp"
#include "laughboard/judge/judge.hpp"

namespace laughboard::judge {

struct ChatRequest {
  std::string model;
  std::string system_text;
  std::string user_text;
  double temperature = 0.1;
  int max_tokens = 512;
};

// Network or protocol failure; the judge retries these.
class TransportError : public Error {
 public:
  using Error::Error;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Returns the assistant message text. Must be callable concurrently.
  virtual std::string complete(const ChatRequest& request) = 0;
};

using SleepFn = std::function<void(double seconds)>;

// Blocks the calling thread.
void sleep_seconds(double seconds);

// Judge backed by a chat-completion model. Transport failures and
// unparseable replies are retried up to max_retries times with capped
// exponential backoff, after which the match comes back aborted.
class LlmJudge final : public Judge {
 public:
  LlmJudge(JudgeConfig config, std::shared_ptr<ChatTransport> transport, SleepFn sleep = sleep_seconds);

  const std::string& judge_id() const override { return config_.judge_id; }
  Adjudication adjudicate(const PromptItem& prompt, const Generation& gen_a, const Generation& gen_b,
                          std::uint64_t position_seed) const override;

 private:
  JudgeConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  SleepFn sleep_;
};

}  // namespace laughboard::judge
