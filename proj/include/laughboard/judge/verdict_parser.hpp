#pragma once

#include <string_view>

#include "laughboard/core/errors.hpp"
#include "laughboard/core/types.hpp"

namespace laughboard::judge {

class VerdictParseError : public Error {
 public:
  using Error::Error;
};

struct ParsedVerdict {
  JudgeVerdict verdict;
  int dropped_tags = 0;    // outside the vocabulary, duplicated or not a string
  int truncated_tags = 0;  // valid tags cut by the 3-per-list limit
};

inline constexpr std::size_t kMaxTagsPerList = 3;

// Pulls the first balanced JSON object out of free-form judge output and
// checks it against the verdict schema. Throws VerdictParseError on anything
// unusable; never throws anything else.
ParsedVerdict parse_verdict(std::string_view raw);

}  // namespace laughboard::judge
