#include "laughboard/core/ledger_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "laughboard/core/errors.hpp"

namespace laughboard::ledger {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require_keys(const json& j, std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional, std::string_view what) {
  if (!j.is_object()) throw FormatError(std::string(what) + " must be a JSON object");
  for (auto key : required) {
    if (!j.contains(key)) throw FormatError(std::string(what) + " is missing '" + std::string(key) + "'");
  }
  for (const auto& [key, value] : j.items()) {
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw FormatError(std::string(what) + " has unknown field '" + key + "'");
  }
}

std::vector<std::string> string_list(const json& j, std::string_view field) {
  if (!j.is_array()) throw FormatError(std::string(field) + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw FormatError(std::string(field) + " must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

template <class T>
T typed(const json& j, std::string_view field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw FormatError("field '" + std::string(field) + "' has the wrong type");
  }
}

}  // namespace

ordered_json verdict_to_json(const JudgeVerdict& verdict) {
  ordered_json j;
  j["decision"] = to_string(verdict.decision);
  j["reasoning"] = verdict.reasoning;
  j["winner_humor_features"] = verdict.winner_humor_features;
  j["winner_delivery_features"] = verdict.winner_delivery_features;
  j["loser_features"] = verdict.loser_features;
  j["confidence"] = verdict.confidence ? ordered_json(to_string(*verdict.confidence)) : ordered_json(nullptr);
  return j;
}

JudgeVerdict verdict_from_json(const json& j) {
  require_keys(j, {"decision", "reasoning", "winner_humor_features", "winner_delivery_features", "loser_features"},
               {"confidence"}, "verdict");
  JudgeVerdict v;
  const auto decision = parse_decision(typed<std::string>(j.at("decision"), "decision"));
  if (!decision) throw FormatError("verdict has an unrecognized decision");
  v.decision = *decision;
  v.reasoning = typed<std::string>(j.at("reasoning"), "reasoning");
  v.winner_humor_features = string_list(j.at("winner_humor_features"), "winner_humor_features");
  v.winner_delivery_features = string_list(j.at("winner_delivery_features"), "winner_delivery_features");
  v.loser_features = string_list(j.at("loser_features"), "loser_features");
  if (j.contains("confidence") && !j.at("confidence").is_null()) {
    v.confidence = parse_confidence(typed<std::string>(j.at("confidence"), "confidence"));
    if (!v.confidence) throw FormatError("verdict has an unrecognized confidence");
  }
  return v;
}

ordered_json record_to_json(const MatchRecord& r) {
  ordered_json j;
  j["match_id"] = r.match_id;
  j["prompt_id"] = r.prompt_id;
  j["side_a_model"] = r.side_a_model;
  j["side_b_model"] = r.side_b_model;
  j["position_seed_applied"] = r.position_seed_applied;
  j["verdict"] = verdict_to_json(r.verdict);
  j["score_for_a"] = r.score_for_a;
  j["judge_id"] = r.judge_id;
  j["timestamp"] = r.timestamp;
  j["elo_delta_a"] = r.elo_delta_a;
  j["tombstone"] = r.tombstone;
  j["voids"] = r.voids ? ordered_json(*r.voids) : ordered_json(nullptr);
  return j;
}

MatchRecord record_from_json(const json& j) {
  require_keys(j,
               {"match_id", "prompt_id", "side_a_model", "side_b_model", "position_seed_applied", "verdict",
                "score_for_a", "judge_id", "timestamp", "elo_delta_a"},
               {"tombstone", "voids"}, "record");
  MatchRecord r;
  r.match_id = typed<std::int64_t>(j.at("match_id"), "match_id");
  r.prompt_id = typed<std::string>(j.at("prompt_id"), "prompt_id");
  r.side_a_model = typed<std::string>(j.at("side_a_model"), "side_a_model");
  r.side_b_model = typed<std::string>(j.at("side_b_model"), "side_b_model");
  r.position_seed_applied = typed<bool>(j.at("position_seed_applied"), "position_seed_applied");
  r.verdict = verdict_from_json(j.at("verdict"));
  if (!j.at("score_for_a").is_number()) throw FormatError("field 'score_for_a' has the wrong type");
  r.score_for_a = j.at("score_for_a").get<double>();
  if (r.score_for_a != 0.0 && r.score_for_a != 0.5 && r.score_for_a != 1.0) {
    throw FormatError("score_for_a must be 0.0, 0.5 or 1.0");
  }
  r.judge_id = typed<std::string>(j.at("judge_id"), "judge_id");
  r.timestamp = typed<std::string>(j.at("timestamp"), "timestamp");
  if (!j.at("elo_delta_a").is_number()) throw FormatError("field 'elo_delta_a' has the wrong type");
  r.elo_delta_a = j.at("elo_delta_a").get<double>();
  if (j.contains("tombstone")) r.tombstone = typed<bool>(j.at("tombstone"), "tombstone");
  if (j.contains("voids") && !j.at("voids").is_null()) r.voids = typed<std::int64_t>(j.at("voids"), "voids");
  return r;
}

std::string serialize_record(const MatchRecord& record) {
  return record_to_json(record).dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

MatchRecord parse_record(std::string_view line, long line_number) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw FormatError("not valid JSON", line_number);
  try {
    return record_from_json(j);
  } catch (const FormatError& e) {
    if (line_number > 0) throw FormatError(e.what(), line_number);
    throw;
  }
}

ordered_json header_to_json(const LedgerHeader& header) {
  ordered_json j;
  j["format"] = kHeaderFormat;
  j["models"] = ordered_json::array();
  for (const auto& m : header.models) {
    j["models"].push_back(ordered_json{{"model_id", m.model_id},
                                       {"display_name", m.display_name},
                                       {"registration_index", m.registration_index}});
  }
  j["prompts"] = ordered_json::array();
  for (const auto& p : header.prompts) {
    j["prompts"].push_back(
        ordered_json{{"prompt_id", p.prompt_id}, {"text", p.text}, {"task_kind", to_string(p.task_kind)}});
  }
  j["prompts_path"] = header.prompts_path;
  j["generations_path"] = header.generations_path;
  return j;
}

LedgerHeader header_from_json(const json& j) {
  require_keys(j, {"format", "models", "prompts"}, {"prompts_path", "generations_path"}, "ledger header");
  if (j.at("format") != kHeaderFormat) throw FormatError("unsupported ledger header format");
  LedgerHeader header;
  for (const auto& m : j.at("models")) {
    require_keys(m, {"model_id", "display_name", "registration_index"}, {}, "header model");
    ModelEntry entry{typed<std::string>(m.at("model_id"), "model_id"),
                     typed<std::string>(m.at("display_name"), "display_name"),
                     typed<int>(m.at("registration_index"), "registration_index")};
    if (entry.registration_index != static_cast<int>(header.models.size())) {
      throw FormatError("header registration_index values must be dense and ordered");
    }
    header.models.push_back(std::move(entry));
  }
  for (const auto& p : j.at("prompts")) {
    require_keys(p, {"prompt_id", "text", "task_kind"}, {}, "header prompt");
    PromptItem item{typed<std::string>(p.at("prompt_id"), "prompt_id"), typed<std::string>(p.at("text"), "text"),
                    TaskKind::kHeadline};
    try {
      item.task_kind = parse_task_kind(typed<std::string>(p.at("task_kind"), "task_kind"));
    } catch (const ValidationError& e) {
      throw FormatError(e.what());
    }
    header.prompts.push_back(std::move(item));
  }
  if (j.contains("prompts_path")) header.prompts_path = typed<std::string>(j.at("prompts_path"), "prompts_path");
  if (j.contains("generations_path")) {
    header.generations_path = typed<std::string>(j.at("generations_path"), "generations_path");
  }
  return header;
}

std::filesystem::path header_path_for(const std::filesystem::path& ledger_path) {
  auto out = ledger_path;
  out.replace_extension(".header.json");
  return out;
}

void write_header(const std::filesystem::path& ledger_path, const LedgerHeader& header) {
  const auto path = header_path_for(ledger_path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write ledger header " + path.string());
  out << header_to_json(header).dump(2, ' ', false, ordered_json::error_handler_t::replace) << '\n';
}

LedgerHeader read_header(const std::filesystem::path& ledger_path) {
  const auto path = header_path_for(ledger_path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open ledger header " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw FormatError("ledger header " + path.string() + " is not valid JSON");
  return header_from_json(j);
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

struct Split {
  std::vector<std::pair<long, std::string_view>> lines;
  std::uintmax_t intact = 0;
  bool torn = false;
};

Split split_lines(std::string_view data) {
  Split out;
  std::size_t start = 0;
  long number = 0;
  while (start < data.size()) {
    const auto end = data.find('\n', start);
    ++number;
    if (end == std::string_view::npos) {
      const auto tail = data.substr(start);
      if (json::accept(tail)) {
        out.lines.emplace_back(number, tail);
        out.intact = data.size();
      } else {
        out.torn = true;
      }
      return out;
    }
    const auto line = data.substr(start, end - start);
    if (!line.empty()) out.lines.emplace_back(number, line);
    start = end + 1;
    out.intact = start;
  }
  return out;
}

}  // namespace

ReadResult read_records(const std::filesystem::path& ledger_path) {
  ReadResult result;
  if (!std::filesystem::exists(ledger_path)) return result;
  const std::string data = slurp(ledger_path);
  const Split split = split_lines(data);
  result.dropped_partial_tail = split.torn;
  for (const auto& [number, line] : split.lines) {
    result.records.push_back(parse_record(line, number));
  }
  return result;
}

std::uintmax_t intact_length(const std::filesystem::path& ledger_path) {
  if (!std::filesystem::exists(ledger_path)) return 0;
  return split_lines(slurp(ledger_path)).intact;
}

MatchHistoryGraph build_graph(const LedgerHeader& header, std::span<const MatchRecord> records) {
  MatchHistoryGraph graph;
  for (const auto& m : header.models) graph.register_model(m.model_id, m.display_name);
  for (const auto& p : header.prompts) graph.register_prompt(p);
  for (const auto& r : records) graph.append_match(r);
  return graph;
}

LedgerHeader header_from_graph(const MatchHistoryGraph& graph) {
  LedgerHeader header;
  header.models.assign(graph.models().begin(), graph.models().end());
  header.prompts.assign(graph.prompts().begin(), graph.prompts().end());
  return header;
}

LedgerWriter::LedgerWriter(const std::filesystem::path& path, std::uintmax_t truncate_to) {
  if (truncate_to != static_cast<std::uintmax_t>(-1) && std::filesystem::exists(path) &&
      std::filesystem::file_size(path) != truncate_to) {
    std::filesystem::resize_file(path, truncate_to);
  }
  // A complete last record may lack its newline; keep the next one off its line.
  bool needs_newline = false;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path, std::ios::binary);
    in.seekg(-1, std::ios::end);
    needs_newline = in.get() != '\n';
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open ledger " + path.string() + " for append");
  if (needs_newline) out_ << '\n';
}

void LedgerWriter::append(const MatchRecord& record) {
  out_ << serialize_record(record) << '\n';
  out_.flush();
  if (!out_) throw Error("ledger write failed");
}

}  // namespace laughboard::ledger
