#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace laughboard::csv {

// Quotes a field when it holds a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

// Splits CSV text into rows of fields. Handles quoted fields with embedded
// separators and doubled quotes; accepts LF or CRLF line ends.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace laughboard::csv
