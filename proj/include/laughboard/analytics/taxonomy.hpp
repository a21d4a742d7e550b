#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>

// The closed feature vocabularies a judge may attach to a verdict. Order is
// part of the contract: prompts list them in this order and every exported
// matrix uses it for columns.
namespace laughboard::taxonomy {

enum class Axis { kMechanism, kDelivery, kFailure };

inline constexpr std::array<std::string_view, 8> kMechanisms = {
    "incongruity", "wordplay", "absurdity",     "surprise",
    "irony",       "sarcasm",  "observational", "narrative"};

inline constexpr std::array<std::string_view, 6> kDelivery = {
    "timing",     "conciseness",           "deadpan",
    "escalation", "punchline_positioning", "framing_commitment"};

// Stored keys are ASCII; "cliche" displays as "cliché".
inline constexpr std::array<std::string_view, 6> kFailure = {
    "cliche",        "confusing",        "offensive",
    "overexplained", "buried_punchline", "weak_punchline"};

inline constexpr std::array<Axis, 3> kAxes = {Axis::kMechanism, Axis::kDelivery,
                                              Axis::kFailure};

inline std::span<const std::string_view> tags(Axis axis) {
  switch (axis) {
    case Axis::kMechanism:
      return kMechanisms;
    case Axis::kDelivery:
      return kDelivery;
    case Axis::kFailure:
      return kFailure;
  }
  return {};
}

inline std::string_view display_name(std::string_view key) {
  return key == "cliche" ? std::string_view{"clich\xC3\xA9"} : key;
}

inline std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::kMechanism:
      return "mechanism";
    case Axis::kDelivery:
      return "delivery";
    case Axis::kFailure:
      return "failure";
  }
  return "unknown";
}

inline std::optional<Axis> parse_axis(std::string_view text) {
  for (Axis axis : kAxes) {
    if (to_string(axis) == text) return axis;
  }
  return std::nullopt;
}

inline bool contains(Axis axis, std::string_view key) {
  const auto list = tags(axis);
  return std::find(list.begin(), list.end(), key) != list.end();
}

// Maps loose judge output ("Cliché", "punchline positioning", " Wordplay ")
// onto a stored key of `axis`, or nullopt when it is not in the vocabulary.
inline std::optional<std::string> normalize_tag(Axis axis, std::string_view raw) {
  std::string key;
  key.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(raw[i]);
    // U+00E9 / U+00C9 fold to 'e'.
    if (c == 0xC3 && i + 1 < raw.size() &&
        (static_cast<unsigned char>(raw[i + 1]) == 0xA9 ||
         static_cast<unsigned char>(raw[i + 1]) == 0x89)) {
      key.push_back('e');
      ++i;
    } else if (c == ' ' || c == '-' || c == '_') {
      key.push_back('_');
    } else {
      key.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  const auto first = key.find_first_not_of('_');
  if (first == std::string::npos) return std::nullopt;
  key = key.substr(first, key.find_last_not_of('_') - first + 1);
  if (!contains(axis, key)) return std::nullopt;
  return key;
}

}  // namespace laughboard::taxonomy
