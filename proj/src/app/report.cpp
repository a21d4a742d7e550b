#include "laughboard/app/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "laughboard/analytics/features.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/ledger_io.hpp"
#include "laughboard/judge/prompt.hpp"
#include "laughboard/rating/bootstrap.hpp"

namespace laughboard::app {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<std::string> order_by(const MatchHistoryGraph& graph, const std::map<std::string, double, std::less<>>& r) {
  std::vector<std::string> ids;
  for (const auto& m : graph.models()) ids.push_back(m.model_id);
  std::stable_sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
    return r.find(a)->second > r.find(b)->second;
  });
  return ids;
}

std::string fixed(const std::optional<double>& v, int digits = 3) {
  return v ? fmt::format("{:.{}f}", *v, digits) : "n/a";
}

}  // namespace

std::string prompt_template_hash() {
  std::string text(judge::system_prompt());
  text += '\0';
  text += judge::user_template();
  return sha256_hex(text);
}

RunManifest make_run_manifest(const TournamentConfig& config) {
  RunManifest m;
  m.config_hash = config_hash(config);
  m.seed = config.seed;
  m.judge_id = config.judge.judge_id;
  m.prompt_template_sha256 = prompt_template_hash();
  m.config = to_json(config);
  return m;
}

ordered_json to_json(const RunManifest& m) {
  return {{"config_hash", opt(m.config_hash)},
          {"seed", opt(m.seed)},
          {"judge_id", opt(m.judge_id)},
          {"prompt_template_sha256", m.prompt_template_sha256},
          {"config", m.config}};
}

RunManifest manifest_from_json(const ordered_json& j) {
  RunManifest m;
  try {
    if (!j.at("config_hash").is_null()) m.config_hash = j.at("config_hash").get<std::string>();
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("judge_id").is_null()) m.judge_id = j.at("judge_id").get<std::string>();
    m.prompt_template_sha256 = j.at("prompt_template_sha256").get<std::string>();
    m.config = j.value("config", ordered_json(nullptr));
  } catch (const json::exception& e) {
    throw FormatError(std::string("run manifest: ") + e.what());
  }
  return m;
}

std::optional<RunManifest> read_run_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  const ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded()) throw FormatError(path.string() + " is not valid JSON");
  return manifest_from_json(j);
}

ReportSettings settings_from_config(const TournamentConfig& config) {
  ReportSettings s;
  s.rating = config.rating;
  s.seed = config.seed;
  s.threads = config.threads;
  return s;
}

Report build_report(const MatchHistoryGraph& graph, const ReportSettings& settings, const RunManifest& manifest) {
  if (graph.active_count() == 0) throw ValidationError("the ledger holds no completed matches; nothing to fit");
  Report out;
  const auto& rc = settings.rating;

  rating::StableEloOptions so;
  so.n_shuffles = rc.stable_shuffles;
  so.seed = settings.seed;
  so.k_factor = rc.k_factor;
  so.initial_rating = rc.initial;
  so.threads = settings.threads;
  const auto stable = rating::stable_elo(graph, so);

  rating::BtOptions bo;
  bo.epsilon = rc.bt_epsilon;
  bo.anchor = rc.initial;
  std::optional<rating::BtFit> fit;
  try {
    fit = rating::fit_bradley_terry(graph, bo);
    rating::BootstrapOptions bs;
    bs.n_boot = rc.bootstrap_iterations;
    bs.seed = settings.seed;
    bs.threads = settings.threads;
    bs.bt = bo;
    const auto ci = rating::bootstrap_ci(graph, bs);
    out.leaderboard = rating::build_leaderboard(graph, *fit, ci.intervals, stable);
  } catch (const rating::DisconnectedGraphError& e) {
    out.fit_error = e.what();
  } catch (const rating::BootstrapError& e) {
    out.fit_error = e.what();
  }

  std::vector<std::string> order;
  if (!out.leaderboard.empty()) {
    for (const auto& r : out.leaderboard) order.push_back(r.model_id);
  } else {
    for (const auto& m : graph.models()) order.push_back(m.model_id);
  }

  // Statistics.
  ordered_json st;
  const auto reference = settings.reference_order.empty() ? order_by(graph, stable.mean_ratings) : settings.reference_order;
  std::optional<stats::KendallResult> tau;
  if (!out.leaderboard.empty() && order.size() >= 2) tau = stats::kendall_tau(order, reference);
  st["tau"] = tau ? ordered_json(tau->tau) : ordered_json(nullptr);
  st["tau_p_value"] = tau ? ordered_json(tau->p_value) : ordered_json(nullptr);
  st["tau_reference"] = settings.reference_order.empty() ? "stable_elo" : "given";
  std::optional<stats::TransitivityResult> trans;
  if (graph.models().size() >= 3) trans = stats::transitivity_score(graph);
  st["transitivity"] = trans ? opt(trans->score) : ordered_json(nullptr);
  st["complete_triads"] = trans ? ordered_json(trans->complete_triads) : ordered_json(nullptr);
  st["cyclic_triads"] = trans ? ordered_json(trans->cyclic_triads) : ordered_json(nullptr);
  std::optional<stats::AlphaResult> alpha;
  std::optional<double> raw_agreement;
  if (settings.annotations) {
    try {
      alpha = stats::krippendorff_alpha(*settings.annotations);
    } catch (const ValidationError&) {
      // fewer than two doubly-annotated units
    }
    raw_agreement = stats::percent_agreement(*settings.annotations);
  }
  st["alpha"] = alpha ? opt(alpha->alpha) : ordered_json(nullptr);
  st["raw_agreement"] = opt(raw_agreement);
  std::optional<stats::StabilityReport> stability;
  if (stable.n_shuffles >= 2) stability = stats::stability_report(stable);
  st["sigma_max"] = stability ? ordered_json(stability->sigma_max) : ordered_json(nullptr);
  st["sigma_mean"] = stability ? ordered_json(stability->sigma_mean) : ordered_json(nullptr);
  st["stable_elo_shuffles"] = stable.n_shuffles;
  ordered_json sigma = ordered_json::object(), stable_mean = ordered_json::object();
  for (const auto& id : order) {
    sigma[id] = stable.sigma.find(id)->second;
    stable_mean[id] = stable.mean_ratings.find(id)->second;
  }
  st["sigma"] = std::move(sigma);
  st["stable_elo"] = std::move(stable_mean);

  // Tables.
  const auto winrate = analytics::export_winrate_matrix(graph, order);
  out.winrate_csv = analytics::to_csv(winrate);
  const auto features = analytics::tally_features(graph);
  ordered_json heatmaps = ordered_json::object();
  for (auto axis : taxonomy::kAxes) {
    const auto m = analytics::export_heatmap(features, axis, order);
    const std::string name(taxonomy::to_string(axis));
    out.heatmap_csv[name] = analytics::to_csv(m);
    heatmaps[name] = analytics::to_json(m);
  }

  std::int64_t tombstones = 0;
  for (const auto& r : graph.records()) tombstones += r.tombstone;
  auto mj = to_json(manifest);
  mj["records"] = graph.records().size();
  mj["active_records"] = graph.active_count();
  mj["tombstones"] = tombstones;
  mj["models"] = graph.models().size();
  mj["prompts"] = graph.prompts().size();

  ordered_json& j = out.json;
  j["format"] = kReportFormat;
  j["manifest"] = std::move(mj);
  if (fit && !out.leaderboard.empty()) {
    j["fit"] = {{"converged", fit->converged},
                {"iterations", fit->iterations},
                {"epsilon", fit->epsilon},
                {"finite_mle", fit->finite_mle},
                {"floored", fit->floored}};
  } else {
    j["fit"] = nullptr;
  }
  j["fit_error"] = opt(out.fit_error);
  j["leaderboard"] = out.leaderboard.empty() ? ordered_json(nullptr) : rating::to_json(out.leaderboard);
  j["win_rate_matrix"] = analytics::to_json(winrate);
  j["heatmaps"] = std::move(heatmaps);
  j["statistics"] = std::move(st);

  if (out.fit_error) {
    out.text = "Bradley-Terry fit failed: " + *out.fit_error + "\n";
  } else {
    out.text = rating::format_text(out.leaderboard);
    out.leaderboard_csv = rating::format_csv(out.leaderboard);
  }
  out.text += '\n';
  out.text += fmt::format("Kendall tau vs {}: {}", settings.reference_order.empty() ? "Stable Elo" : "reference",
                          tau ? fmt::format("{:.3f} (p = {:.4g})", tau->tau, tau->p_value) : "n/a");
  out.text += '\n';
  out.text += fmt::format("Transitivity: {}\n", trans ? fixed(trans->score) : "n/a");
  out.text += fmt::format("Krippendorff alpha: {}\n", alpha ? fixed(alpha->alpha) : "n/a");
  out.text += stability ? fmt::format("Stable Elo sigma: max {:.1f}, mean {:.1f} over {} shuffles\n",
                                      stability->sigma_max, stability->sigma_mean, stable.n_shuffles)
                        : "Stable Elo sigma: n/a\n";
  if (fit && !fit->finite_mle) {
    out.text += "Warning: some models never lost or never won against the rest; their ratings are floored.\n";
  }
  return out;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.json", report.json.dump(2) + "\n");
  write_file(dir / "leaderboard.txt", report.text);
  if (!report.leaderboard_csv.empty()) write_file(dir / "leaderboard.csv", report.leaderboard_csv);
  write_file(dir / "winrate.csv", report.winrate_csv);
  for (const auto& [axis, text] : report.heatmap_csv) write_file(dir / ("heatmap_" + axis + ".csv"), text);
}

LoadedLedger load_ledger(const std::filesystem::path& ledger_path) {
  if (!std::filesystem::exists(ledger_path)) throw NotFoundError("no ledger at " + ledger_path.string());
  const auto header = ledger::read_header(ledger_path);
  auto read = ledger::read_records(ledger_path);
  LoadedLedger out{ledger::build_graph(header, read.records), std::nullopt, read.dropped_partial_tail};
  out.manifest = read_run_manifest(ledger_path.parent_path() / "run.json");
  return out;
}

ReportSettings settings_for(const LoadedLedger& ledger) {
  ReportSettings s;
  if (!ledger.manifest) return s;
  if (ledger.manifest->seed) s.seed = *ledger.manifest->seed;
  const auto& c = ledger.manifest->config;
  if (c.is_object() && c.contains("rating")) {
    const auto& r = c.at("rating");
    s.rating.k_factor = r.value("k_factor", s.rating.k_factor);
    s.rating.initial = r.value("initial", s.rating.initial);
    s.rating.bt_epsilon = r.value("bt_epsilon", s.rating.bt_epsilon);
    s.rating.bootstrap_iterations = r.value("bootstrap_iterations", s.rating.bootstrap_iterations);
    s.rating.stable_shuffles = r.value("stable_shuffles", s.rating.stable_shuffles);
  }
  if (c.is_object()) s.threads = c.value("threads", s.threads);
  return s;
}

}  // namespace laughboard::app
