#include "laughboard/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <openssl/evp.h>

#include "laughboard/core/errors.hpp"

namespace laughboard::app {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(where) + "." + key + " has the wrong type");
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, std::string_view where) {
  T value{};
  if (!j.contains(key) || j.at(key).is_null()) return;
  read(j, key, value, where);
  out = value;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

void TournamentConfig::validate() const {
  if (models.size() < 2) throw ValidationError("a tournament needs at least 2 models");
  std::set<std::string> ids;
  for (const auto& m : models) {
    if (m.model_id.empty()) throw ValidationError("model_id must be non-empty");
    if (!ids.insert(m.model_id).second) throw ValidationError("model '" + m.model_id + "' listed twice");
    if (judge.kind == judge::JudgeKind::kSyntheticOracle && !m.latent_rating) {
      throw ValidationError("the oracle judge needs latent_rating for model '" + m.model_id + "'");
    }
  }
  judge.validate();
  scheduler.validate();
  if (!(oracle.tie_probability >= 0.0 && oracle.tie_probability < 1.0)) {
    throw ValidationError("oracle.tie_probability must lie in [0, 1)");
  }
  if (!(rating.k_factor > 0.0)) throw ValidationError("rating.k_factor must be positive");
  if (!(rating.bt_epsilon > 0.0)) throw ValidationError("rating.bt_epsilon must be positive");
  if (rating.bootstrap_iterations < 1) throw ValidationError("rating.bootstrap_iterations must be >= 1");
  if (rating.stable_shuffles < 1) throw ValidationError("rating.stable_shuffles must be >= 1");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

TournamentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j,
            {"models", "prompts_path", "generations_path", "judge", "oracle", "scheduler", "rating", "seed",
             "output_dir", "threads"},
            "config");
  TournamentConfig c;
  if (!j.contains("models") || !j.at("models").is_array()) throw ValidationError("config.models must be a list");
  for (const auto& m : j.at("models")) {
    ModelSpec spec;
    if (m.is_string()) {
      spec.model_id = m.get<std::string>();
    } else {
      only_keys(m, {"model_id", "display_name", "latent_rating"}, "config.models[]");
      read(m, "model_id", spec.model_id, "model");
      read(m, "display_name", spec.display_name, "model");
      read(m, "latent_rating", spec.latent_rating, "model");
    }
    if (spec.display_name.empty()) spec.display_name = spec.model_id;
    c.models.push_back(std::move(spec));
  }
  std::string prompts, generations, output = c.output_dir.string();
  read(j, "prompts_path", prompts, "config");
  read(j, "generations_path", generations, "config");
  read(j, "output_dir", output, "config");
  c.prompts_path = prompts.empty() ? std::filesystem::path{} : resolve(base_dir, prompts);
  c.generations_path = generations.empty() ? std::filesystem::path{} : resolve(base_dir, generations);
  c.output_dir = resolve(base_dir, output);
  read(j, "seed", c.seed, "config");
  read(j, "threads", c.threads, "config");

  if (j.contains("judge")) {
    const json& jj = j.at("judge");
    only_keys(jj,
              {"judge_id", "kind", "temperature", "max_new_tokens", "max_retries", "backoff_base_seconds",
               "backoff_cap_seconds", "endpoint_url", "model_name", "auth_env_var", "timeout_seconds",
               "max_in_flight"},
              "config.judge");
    auto& jc = c.judge;
    std::string kind(to_string(jc.kind));
    read(jj, "kind", kind, "judge");
    jc.kind = judge::parse_judge_kind(kind);
    read(jj, "judge_id", jc.judge_id, "judge");
    read(jj, "temperature", jc.temperature, "judge");
    read(jj, "max_new_tokens", jc.max_new_tokens, "judge");
    read(jj, "max_retries", jc.max_retries, "judge");
    read(jj, "backoff_base_seconds", jc.backoff_base_seconds, "judge");
    read(jj, "backoff_cap_seconds", jc.backoff_cap_seconds, "judge");
    read(jj, "endpoint_url", jc.endpoint_url, "judge");
    read(jj, "model_name", jc.model_name, "judge");
    read(jj, "auth_env_var", jc.auth_env_var, "judge");
    read(jj, "timeout_seconds", jc.timeout_seconds, "judge");
    read(jj, "max_in_flight", jc.max_in_flight, "judge");
  }
  if (j.contains("oracle")) {
    only_keys(j.at("oracle"), {"tie_probability", "emit_features"}, "config.oracle");
    read(j.at("oracle"), "tie_probability", c.oracle.tie_probability, "oracle");
    read(j.at("oracle"), "emit_features", c.oracle.emit_features, "oracle");
  }
  if (j.contains("scheduler")) {
    const json& js = j.at("scheduler");
    only_keys(js, {"c_max", "exhaustive", "min_rounds_per_model", "max_rounds_per_model"}, "config.scheduler");
    auto& s = c.scheduler;
    s.exhaustive = !js.contains("c_max") || js.at("c_max").is_null();
    read(js, "c_max", s.c_max, "scheduler");
    read(js, "exhaustive", s.exhaustive, "scheduler");
    read(js, "min_rounds_per_model", s.min_rounds_per_model, "scheduler");
    read(js, "max_rounds_per_model", s.max_rounds_per_model, "scheduler");
  }
  if (j.contains("rating")) {
    const json& jr = j.at("rating");
    only_keys(jr, {"k_factor", "initial", "bt_epsilon", "bootstrap_iterations", "stable_shuffles"}, "config.rating");
    read(jr, "k_factor", c.rating.k_factor, "rating");
    read(jr, "initial", c.rating.initial, "rating");
    read(jr, "bt_epsilon", c.rating.bt_epsilon, "rating");
    read(jr, "bootstrap_iterations", c.rating.bootstrap_iterations, "rating");
    read(jr, "stable_shuffles", c.rating.stable_shuffles, "rating");
  }
  c.validate();
  return c;
}

ordered_json to_json(const TournamentConfig& c) {
  ordered_json j;
  j["models"] = ordered_json::array();
  for (const auto& m : c.models) {
    j["models"].push_back(
        {{"model_id", m.model_id}, {"display_name", m.display_name}, {"latent_rating", opt(m.latent_rating)}});
  }
  j["prompts_path"] = c.prompts_path.string();
  j["generations_path"] = c.generations_path.string();
  const auto& jc = c.judge;
  j["judge"] = {{"judge_id", jc.judge_id},
                {"kind", to_string(jc.kind)},
                {"temperature", jc.temperature},
                {"max_new_tokens", jc.max_new_tokens},
                {"max_retries", jc.max_retries},
                {"backoff_base_seconds", jc.backoff_base_seconds},
                {"backoff_cap_seconds", jc.backoff_cap_seconds},
                {"endpoint_url", opt(jc.endpoint_url)},
                {"model_name", opt(jc.model_name)},
                {"auth_env_var", opt(jc.auth_env_var)},
                {"timeout_seconds", jc.timeout_seconds},
                {"max_in_flight", jc.max_in_flight}};
  j["oracle"] = {{"tie_probability", c.oracle.tie_probability}, {"emit_features", c.oracle.emit_features}};
  const auto& s = c.scheduler;
  j["scheduler"] = {{"c_max", s.exhaustive ? ordered_json(nullptr) : ordered_json(s.c_max)},
                    {"exhaustive", s.exhaustive},
                    {"min_rounds_per_model", s.min_rounds_per_model},
                    {"max_rounds_per_model", s.max_rounds_per_model}};
  j["rating"] = {{"k_factor", c.rating.k_factor},
                 {"initial", c.rating.initial},
                 {"bt_epsilon", c.rating.bt_epsilon},
                 {"bootstrap_iterations", c.rating.bootstrap_iterations},
                 {"stable_shuffles", c.rating.stable_shuffles}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.string();
  j["threads"] = c.threads;
  return j;
}

TournamentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open config " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError("config " + path.string() + " is not valid JSON");
  return config_from_json(j, path.parent_path());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string config_hash(const TournamentConfig& config) { return sha256_hex(to_json(config).dump()); }

}  // namespace laughboard::app
