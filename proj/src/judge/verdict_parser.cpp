#include "laughboard/judge/verdict_parser.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laughboard/analytics/taxonomy.hpp"

namespace laughboard::judge {

namespace {

using nlohmann::json;

// Objects tried before giving up; bounds the work on adversarial input.
constexpr int kMaxCandidates = 64;

// End (one past the closing brace) of the object opening at `start`, or npos
// when the braces never balance.
std::size_t balanced_end(std::string_view text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<json> first_object(std::string_view raw) {
  int tried = 0;
  for (std::size_t pos = raw.find('{'); pos != std::string_view::npos && tried < kMaxCandidates;
       pos = raw.find('{', pos + 1)) {
    const std::size_t end = balanced_end(raw, pos);
    if (end == std::string_view::npos) continue;
    ++tried;
    json parsed = json::parse(raw.substr(pos, end - pos), nullptr, /*allow_exceptions=*/false);
    if (parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw VerdictParseError(std::string("verdict is missing \"") + key + "\"");
  return *it;
}

std::vector<std::string> tag_list(const json& value, taxonomy::Axis axis, const char* key, ParsedVerdict& out) {
  std::vector<json> items;
  if (value.is_array()) {
    items.assign(value.begin(), value.end());
  } else if (value.is_string()) {
    items.push_back(value);  // a lone tag instead of a one-element list
  } else if (!value.is_null()) {
    throw VerdictParseError(std::string("\"") + key + "\" is not a list");
  }
  std::vector<std::string> tags;
  for (const auto& item : items) {
    const auto tag = item.is_string() ? taxonomy::normalize_tag(axis, item.get_ref<const std::string&>())
                                      : std::nullopt;
    if (!tag || std::find(tags.begin(), tags.end(), *tag) != tags.end()) {
      ++out.dropped_tags;
      continue;
    }
    tags.push_back(*tag);
  }
  if (tags.size() > kMaxTagsPerList) {
    out.truncated_tags += static_cast<int>(tags.size() - kMaxTagsPerList);
    tags.resize(kMaxTagsPerList);
  }
  return tags;
}

}  // namespace

ParsedVerdict parse_verdict(std::string_view raw) {
  const auto obj = first_object(raw);
  if (!obj) throw VerdictParseError("no JSON object in judge output");

  ParsedVerdict out;
  const json& decision = require(*obj, "decision");
  const auto parsed = decision.is_string() ? parse_decision(decision.get_ref<const std::string&>()) : std::nullopt;
  if (!parsed) throw VerdictParseError("unrecognized decision " + decision.dump(-1, ' ', false, json::error_handler_t::replace));
  out.verdict.decision = *parsed;

  const json& reasoning = require(*obj, "reasoning");
  if (reasoning.is_string()) {
    out.verdict.reasoning = reasoning.get<std::string>();
  } else if (!reasoning.is_null()) {
    out.verdict.reasoning = reasoning.dump(-1, ' ', false, json::error_handler_t::replace);
  }

  out.verdict.winner_humor_features =
      tag_list(require(*obj, "winner_humor_features"), taxonomy::Axis::kMechanism, "winner_humor_features", out);
  out.verdict.winner_delivery_features = tag_list(require(*obj, "winner_delivery_features"),
                                                  taxonomy::Axis::kDelivery, "winner_delivery_features", out);
  out.verdict.loser_features =
      tag_list(require(*obj, "loser_features"), taxonomy::Axis::kFailure, "loser_features", out);

  if (const auto it = obj->find("confidence"); it != obj->end() && it->is_string()) {
    out.verdict.confidence = parse_confidence(it->get_ref<const std::string&>());
  }
  return out;
}

}  // namespace laughboard::judge
