#include "laughboard/app/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "laughboard/core/errors.hpp"

namespace laughboard::app {

using nlohmann::json;

namespace {

// Calls fn(object, line_number) for every non-blank line.
template <class Fn>
void each_line(std::string_view text, Fn&& fn) {
  long number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      const json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) throw FormatError("not valid JSON", number);
      if (!j.is_object()) throw FormatError("expected a JSON object", number);
      fn(j, number);
    }
    start = end + 1;
  }
}

std::string field(const json& j, const char* key, long line, bool required = true) {
  const auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw FormatError(std::string("missing \"") + key + "\"", line);
    return {};
  }
  if (!it->is_string()) throw FormatError(std::string("\"") + key + "\" must be a string", line);
  auto value = it->get<std::string>();
  if (required && value.empty()) throw FormatError(std::string("\"") + key + "\" is empty", line);
  return value;
}

void only(const json& j, std::initializer_list<std::string_view> keys, long line) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw FormatError("unknown field \"" + key + "\"", line);
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

template <class Fn>
auto with_file_context(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn(slurp(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::vector<PromptItem> parse_prompts(std::string_view jsonl) {
  std::vector<PromptItem> out;
  std::set<std::string> seen;
  each_line(jsonl, [&](const json& j, long line) {
    only(j, {"prompt_id", "text", "task_kind"}, line);
    PromptItem p{field(j, "prompt_id", line), field(j, "text", line), TaskKind::kHeadline};
    const auto kind = field(j, "task_kind", line, false);
    if (!kind.empty()) {
      try {
        p.task_kind = parse_task_kind(kind);
      } catch (const ValidationError& e) {
        throw FormatError(e.what(), line);
      }
    }
    if (!seen.insert(p.prompt_id).second) throw FormatError("duplicate prompt_id '" + p.prompt_id + "'", line);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<Generation> parse_generations(std::string_view jsonl) {
  std::vector<Generation> out;
  std::set<std::pair<std::string, std::string>> seen;
  each_line(jsonl, [&](const json& j, long line) {
    only(j, {"model_id", "prompt_id", "text"}, line);
    Generation g{field(j, "model_id", line), field(j, "prompt_id", line), field(j, "text", line)};
    if (!seen.emplace(g.model_id, g.prompt_id).second) {
      throw FormatError("duplicate generation for ('" + g.model_id + "', '" + g.prompt_id + "')", line);
    }
    out.push_back(std::move(g));
  });
  return out;
}

Dataset make_dataset(std::vector<PromptItem> prompts, const std::vector<Generation>& generations,
                     std::span<const std::string> model_ids) {
  Dataset d;
  d.prompts = std::move(prompts);
  std::set<std::string> prompt_ids;
  for (const auto& p : d.prompts) prompt_ids.insert(p.prompt_id);
  const std::set<std::string> models(model_ids.begin(), model_ids.end());
  for (const auto& g : generations) {
    if (!models.contains(g.model_id)) {
      ++d.ignored_generations;
      continue;
    }
    if (!prompt_ids.contains(g.prompt_id)) {
      throw ValidationError("generation by '" + g.model_id + "' names unknown prompt '" + g.prompt_id + "'");
    }
    if (!d.generations.emplace(std::make_pair(g.model_id, g.prompt_id), g).second) {
      throw ValidationError("duplicate generation for ('" + g.model_id + "', '" + g.prompt_id + "')");
    }
  }
  for (const auto& m : model_ids) {
    for (const auto& p : d.prompts) {
      if (!d.generations.contains({m, p.prompt_id})) d.missing.emplace_back(m, p.prompt_id);
    }
  }
  return d;
}

Dataset ingest_dataset(const std::filesystem::path& prompts_path, const std::filesystem::path& generations_path,
                       std::span<const std::string> model_ids) {
  auto prompts = with_file_context(prompts_path, [](const std::string& t) { return parse_prompts(t); });
  const auto generations = with_file_context(generations_path, [](const std::string& t) { return parse_generations(t); });
  return make_dataset(std::move(prompts), generations, model_ids);
}

const Generation& Dataset::generation(const std::string& model_id, const std::string& prompt_id) const {
  const auto it = generations.find({model_id, prompt_id});
  if (it == generations.end()) throw NotFoundError("no generation by '" + model_id + "' for '" + prompt_id + "'");
  return it->second;
}

scheduler::PromptEligibility Dataset::eligibility() const {
  scheduler::PromptEligibility e;
  for (const auto& [model, prompt] : missing) e.mark_missing(model, prompt);
  return e;
}

std::string to_jsonl(std::span<const PromptItem> prompts) {
  std::string out;
  for (const auto& p : prompts) {
    nlohmann::ordered_json j{{"prompt_id", p.prompt_id}, {"text", p.text}, {"task_kind", to_string(p.task_kind)}};
    out += j.dump() + '\n';
  }
  return out;
}

std::string to_jsonl(std::span<const Generation> generations) {
  std::string out;
  for (const auto& g : generations) {
    nlohmann::ordered_json j{{"model_id", g.model_id}, {"prompt_id", g.prompt_id}, {"text", g.text}};
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace laughboard::app
