#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laughboard/core/match_graph.hpp"
#include "laughboard/core/types.hpp"

// Ledger persistence: one MatchRecord per line of UTF-8 JSON, plus a sidecar
// header holding the registered models and prompts. Field order on disk is
// fixed so that parse -> serialize reproduces a line byte for byte.
namespace laughboard::ledger {

inline constexpr std::string_view kHeaderFormat = "laughboard-ledger/1";

struct LedgerHeader {
  std::vector<ModelEntry> models;
  std::vector<PromptItem> prompts;
  std::string prompts_path;
  std::string generations_path;
};

nlohmann::ordered_json verdict_to_json(const JudgeVerdict& verdict);
JudgeVerdict verdict_from_json(const nlohmann::json& j);

nlohmann::ordered_json record_to_json(const MatchRecord& record);
MatchRecord record_from_json(const nlohmann::json& j);

// Single line, no trailing newline.
std::string serialize_record(const MatchRecord& record);
MatchRecord parse_record(std::string_view line, long line_number = 0);

nlohmann::ordered_json header_to_json(const LedgerHeader& header);
LedgerHeader header_from_json(const nlohmann::json& j);

// "runs/ledger.jsonl" -> "runs/ledger.header.json"
std::filesystem::path header_path_for(const std::filesystem::path& ledger_path);

void write_header(const std::filesystem::path& ledger_path, const LedgerHeader& header);
LedgerHeader read_header(const std::filesystem::path& ledger_path);

struct ReadResult {
  std::vector<MatchRecord> records;
  bool dropped_partial_tail = false;  // an unterminated, unparsable last line
};

// A missing file reads as empty. A torn final line (no newline, not valid
// JSON) is reported rather than fatal; anything else malformed throws
// FormatError naming the line.
ReadResult read_records(const std::filesystem::path& ledger_path);

// Header models/prompts registered in order, then every record replayed.
MatchHistoryGraph build_graph(const LedgerHeader& header, std::span<const MatchRecord> records);

LedgerHeader header_from_graph(const MatchHistoryGraph& graph);

// Appends records line by line, flushing after each so an interrupted run
// leaves a readable prefix.
class LedgerWriter {
 public:
  // truncate_to: byte length to cut the file to before appending (used to
  // drop a torn tail); npos keeps the file as is.
  explicit LedgerWriter(const std::filesystem::path& path,
                        std::uintmax_t truncate_to = static_cast<std::uintmax_t>(-1));

  void append(const MatchRecord& record);

 private:
  std::ofstream out_;
};

// Byte length of the file without its torn tail, if any.
std::uintmax_t intact_length(const std::filesystem::path& ledger_path);

}  // namespace laughboard::ledger
