#include "laughboard/judge/prompt.hpp"

#include "laughboard/analytics/taxonomy.hpp"
#include "laughboard/core/errors.hpp"

namespace laughboard::judge {

namespace {

constexpr std::string_view kSystem =
    "You are a comedy critic judging which of two jokes is funnier.\n"
    "Analyze both the underlying logic (humor mechanisms) and the presentation (delivery).\n"
    "Be direct and honest. If one joke is clearly better, pick it. "
    "If they are genuinely equal in quality, say TIE.\n"
    "Do not overthink it --- trust your first impression. Output JSON only.";

std::string list_for(taxonomy::Axis axis) {
  std::string out;
  for (const auto tag : taxonomy::tags(axis)) {
    if (!out.empty()) out += ", ";
    out += '"';
    out += taxonomy::display_name(tag);
    out += '"';
  }
  return out;
}

std::string build_user(std::string_view headline, std::string_view joke_a, std::string_view joke_b) {
  std::string out;
  out += "Prompt: \"";
  out += headline;
  out += "\"\n\n";
  out += "JOKE A: ";
  out += joke_a;
  out += "\n\n";
  out += "JOKE B: ";
  out += joke_b;
  out += "\n\n";
  out += "Which is funnier? Return JSON:\n";
  out += "{\n";
  out += "  \"reasoning\": \"brief explanation\",\n";
  out += "  \"decision\": \"A\" or \"B\" or \"TIE\",\n";
  out += "  \"winner_humor_features\": [list ALL that apply, 1-3, from: " + list_for(taxonomy::Axis::kMechanism) +
         "],\n";
  out += "  \"winner_delivery_features\": [list ALL that apply, 1-3, from: " + list_for(taxonomy::Axis::kDelivery) +
         "],\n";
  out += "  \"loser_features\": [list ALL that apply, 1-3, from: " + list_for(taxonomy::Axis::kFailure) + "]\n";
  out += "}";
  return out;
}

}  // namespace

std::string_view system_prompt() { return kSystem; }

std::string user_template() { return build_user("{headline}", "{joke_a}", "{joke_b}"); }

RenderedPrompt render_prompt(std::string_view headline, std::string_view joke_a, std::string_view joke_b) {
  if (headline.empty()) throw ValidationError("headline must be non-empty");
  if (joke_a.empty() || joke_b.empty()) throw ValidationError("both jokes must be non-empty");
  return RenderedPrompt{std::string(kSystem), build_user(headline, joke_a, joke_b)};
}

}  // namespace laughboard::judge
