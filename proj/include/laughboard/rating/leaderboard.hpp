#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laughboard/core/match_graph.hpp"
#include "laughboard/rating/bootstrap.hpp"
#include "laughboard/rating/bradley_terry.hpp"
#include "laughboard/rating/elo.hpp"

namespace laughboard::rating {

struct WinLossTie {
  int wins = 0;
  int losses = 0;
  int ties = 0;

  int matches() const { return wins + losses + ties; }
};

// Active-record outcomes for one model.
WinLossTie record_of(const MatchHistoryGraph& graph, std::string_view model_id);

// (wins + ties / 2) / matches; nullopt when the model has not played.
std::optional<double> win_rate(const MatchHistoryGraph& graph, std::string_view model_id);

struct LeaderboardRow {
  int rank = 0;
  std::string model_id;
  std::string display_name;
  double bt_rating = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double stable_elo = 0.0;
  std::optional<double> win_rate;
  int matches = 0;
};

using Intervals = std::map<std::string, Interval, std::less<>>;

// Rows by BT rating, best first; equal ratings keep registration order.
std::vector<LeaderboardRow> build_leaderboard(const MatchHistoryGraph& graph, const BtFit& bt,
                                              const Intervals& ci, const StableEloResult& stable);

// Aligned text table: Rank, Model, BT Rating, 95% CI, Win Rate.
std::string format_text(const std::vector<LeaderboardRow>& rows);
std::string format_csv(const std::vector<LeaderboardRow>& rows);
nlohmann::ordered_json to_json(const std::vector<LeaderboardRow>& rows);

}  // namespace laughboard::rating
