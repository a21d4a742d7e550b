#pragma once

#include <string>
#include <string_view>

namespace laughboard::judge {

struct RenderedPrompt {
  std::string system_text;
  std::string user_text;

  bool operator==(const RenderedPrompt&) const = default;
};

// The fixed judge system message.
std::string_view system_prompt();

// The user message with {headline}, {joke_a} and {joke_b} left as literal
// placeholders and the feature lists filled in. Hashed into run manifests.
std::string user_template();

// Fills the judge template. Texts are inserted verbatim (no escaping); all
// three must be non-empty.
RenderedPrompt render_prompt(std::string_view headline, std::string_view joke_a, std::string_view joke_b);

}  // namespace laughboard::judge
