#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laughboard/judge/judge.hpp"
#include "laughboard/scheduler/swiss.hpp"

namespace laughboard::app {

struct ModelSpec {
  std::string model_id;
  std::string display_name;  // defaults to model_id
  std::optional<double> latent_rating;  // ground truth for the oracle judge

  bool operator==(const ModelSpec&) const = default;
};

struct RatingConfig {
  double k_factor = 32.0;
  double initial = 1000.0;
  double bt_epsilon = 1e-6;
  int bootstrap_iterations = 100;
  int stable_shuffles = 10;

  bool operator==(const RatingConfig&) const = default;
};

struct OracleSettings {
  double tie_probability = 0.0;
  bool emit_features = true;

  bool operator==(const OracleSettings&) const = default;
};

struct TournamentConfig {
  std::vector<ModelSpec> models;
  std::filesystem::path prompts_path;
  std::filesystem::path generations_path;
  judge::JudgeConfig judge;
  OracleSettings oracle;
  // No c_max in the file means exhaustive coverage.
  scheduler::SchedulerConfig scheduler{.c_max = 1, .exhaustive = true};
  RatingConfig rating;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  unsigned threads = 1;  // estimator workers

  // Throws ValidationError.
  void validate() const;
};

// Unknown keys are rejected so that typos do not silently fall back to
// defaults. Relative paths resolve against base_dir.
TournamentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::ordered_json to_json(const TournamentConfig& config);
TournamentConfig load_config(const std::filesystem::path& path);

// SHA-256 of the canonical JSON form, hex encoded.
std::string config_hash(const TournamentConfig& config);
std::string sha256_hex(std::string_view data);

}  // namespace laughboard::app
