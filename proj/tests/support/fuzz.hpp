#pragma once

#include <string>
#include <string_view>

#include "laughboard/core/random.hpp"

namespace lbtest {

// One to four random edits: byte flips, deletions, duplicated slices,
// truncation and splices of JSON-ish tokens.
inline std::string mutate(std::string s, laughboard::rng::Engine& e) {
  static constexpr std::string_view kTokens[] = {"{", "}", "\"", "\\", "[", "]", ",", ":", "null", "\"decision\"",
                                                 "\"TIE\"", "\xC3", "\xFF", "{\"a\":", "\n", "1e999"};
  const int edits = 1 + static_cast<int>(e.below(4));
  for (int i = 0; i < edits; ++i) {
    const std::size_t n = s.size();
    const auto at = [&] { return n == 0 ? std::size_t{0} : static_cast<std::size_t>(e.below(n)); };
    switch (e.below(6)) {
      case 0:
        if (n) s[at()] = static_cast<char>(e.below(256));
        break;
      case 1:
        if (n) s.erase(at(), 1 + e.below(8));
        break;
      case 2: {
        if (!n) break;
        const std::size_t from = at();
        s.insert(at(), s.substr(from, 1 + e.below(16)));
        break;
      }
      case 3:
        s.resize(at());
        break;
      default: {
        const auto& tok = kTokens[e.below(std::size(kTokens))];
        s.insert(n ? at() : 0, tok);
        break;
      }
    }
  }
  return s;
}

inline std::string random_bytes(laughboard::rng::Engine& e, std::size_t max_len) {
  std::string s(static_cast<std::size_t>(e.below(max_len + 1)), '\0');
  for (auto& c : s) c = static_cast<char>(e.below(256));
  return s;
}

}  // namespace lbtest
