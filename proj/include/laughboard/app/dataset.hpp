#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "laughboard/core/types.hpp"
#include "laughboard/scheduler/swiss.hpp"

namespace laughboard::app {

struct Dataset {
  std::vector<PromptItem> prompts;  // file order
  std::map<std::pair<std::string, std::string>, Generation> generations;  // (model_id, prompt_id)
  // (model, prompt) combinations with no generation; those pairs skip the prompt.
  std::vector<std::pair<std::string, std::string>> missing;
  int ignored_generations = 0;  // for models outside the tournament

  const Generation& generation(const std::string& model_id, const std::string& prompt_id) const;
  scheduler::PromptEligibility eligibility() const;
};

// Line-delimited JSON: prompts {prompt_id, text, task_kind?}, generations
// {model_id, prompt_id, text}. Errors name the file and line.
Dataset ingest_dataset(const std::filesystem::path& prompts_path, const std::filesystem::path& generations_path,
                       std::span<const std::string> model_ids);

// Parsers behind ingest_dataset, for in-memory text.
std::vector<PromptItem> parse_prompts(std::string_view jsonl);
std::vector<Generation> parse_generations(std::string_view jsonl);

// Assembles and checks a dataset from parsed parts.
Dataset make_dataset(std::vector<PromptItem> prompts, const std::vector<Generation>& generations,
                     std::span<const std::string> model_ids);

std::string to_jsonl(std::span<const PromptItem> prompts);
std::string to_jsonl(std::span<const Generation> generations);

}  // namespace laughboard::app
