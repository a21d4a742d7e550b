#include "laughboard/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "laughboard/core/errors.hpp"

namespace laughboard {

namespace {

std::string fold(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(TaskKind kind) {
  return kind == TaskKind::kHeadline ? "headline" : "word_combination";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "headline") return TaskKind::kHeadline;
  if (text == "word_combination") return TaskKind::kWordCombination;
  throw ValidationError("unknown task_kind '" + std::string(text) + "'");
}

std::string_view to_string(Decision decision) {
  switch (decision) {
    case Decision::kA:
      return "A";
    case Decision::kB:
      return "B";
    case Decision::kTie:
      return "TIE";
  }
  return "TIE";
}

std::string_view to_string(Confidence confidence) {
  switch (confidence) {
    case Confidence::kLow:
      return "low";
    case Confidence::kMedium:
      return "medium";
    case Confidence::kHigh:
      return "high";
  }
  return "medium";
}

std::optional<Decision> parse_decision(std::string_view text) {
  const std::string key = fold(text);
  if (key == "a") return Decision::kA;
  if (key == "b") return Decision::kB;
  if (key == "tie") return Decision::kTie;
  return std::nullopt;
}

std::optional<Confidence> parse_confidence(std::string_view text) {
  const std::string key = fold(text);
  if (key == "low") return Confidence::kLow;
  if (key == "medium") return Confidence::kMedium;
  if (key == "high") return Confidence::kHigh;
  return std::nullopt;
}

Decision swap_sides(Decision decision) {
  switch (decision) {
    case Decision::kA:
      return Decision::kB;
    case Decision::kB:
      return Decision::kA;
    case Decision::kTie:
      return Decision::kTie;
  }
  return decision;
}

double score_for_a(Decision decision) {
  switch (decision) {
    case Decision::kA:
      return 1.0;
    case Decision::kB:
      return 0.0;
    case Decision::kTie:
      return 0.5;
  }
  return 0.5;
}

}  // namespace laughboard
