#include "laughboard/rating/leaderboard.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "laughboard/core/csv.hpp"
#include "laughboard/core/errors.hpp"

namespace laughboard::rating {

WinLossTie record_of(const MatchHistoryGraph& graph, std::string_view model_id) {
  const int m = graph.require_model(model_id);
  WinLossTie out;
  const auto edges = graph.edges();
  for (std::size_t pos = 0; pos < edges.size(); ++pos) {
    if (!graph.is_active(pos)) continue;
    const Edge& e = edges[pos];
    if (e.side_a != m && e.side_b != m) continue;
    const double s = e.side_a == m ? e.score_for_a : 1.0 - e.score_for_a;
    if (s == 1.0) {
      ++out.wins;
    } else if (s == 0.0) {
      ++out.losses;
    } else {
      ++out.ties;
    }
  }
  return out;
}

std::optional<double> win_rate(const MatchHistoryGraph& graph, std::string_view model_id) {
  const WinLossTie r = record_of(graph, model_id);
  if (r.matches() == 0) return std::nullopt;
  return (r.wins + 0.5 * r.ties) / r.matches();
}

std::vector<LeaderboardRow> build_leaderboard(const MatchHistoryGraph& graph, const BtFit& bt,
                                              const Intervals& ci, const StableEloResult& stable) {
  const auto models = graph.models();
  const auto same_set = [&](const auto& map) {
    if (map.size() != models.size()) return false;
    return std::all_of(models.begin(), models.end(), [&](const ModelEntry& m) { return map.contains(m.model_id); });
  };
  if (!same_set(bt.ratings)) throw ValidationError("Bradley-Terry fit covers a different model set");
  if (!same_set(ci)) throw ValidationError("confidence intervals cover a different model set");
  if (!same_set(stable.mean_ratings)) throw ValidationError("Stable Elo result covers a different model set");

  std::vector<LeaderboardRow> rows;
  for (const auto& m : models) {
    LeaderboardRow row;
    row.model_id = m.model_id;
    row.display_name = m.display_name.empty() ? m.model_id : m.display_name;
    row.bt_rating = bt.ratings.find(m.model_id)->second;
    const Interval& iv = ci.find(m.model_id)->second;
    if (iv.low > iv.high) throw ValidationError("interval for '" + m.model_id + "' has low > high");
    row.ci_low = iv.low;
    row.ci_high = iv.high;
    row.stable_elo = stable.mean_ratings.find(m.model_id)->second;
    const WinLossTie r = record_of(graph, m.model_id);
    row.matches = r.matches();
    if (row.matches > 0) row.win_rate = (r.wins + 0.5 * r.ties) / row.matches;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LeaderboardRow& x, const LeaderboardRow& y) { return x.bt_rating > y.bt_rating; });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i) + 1;
  return rows;
}

namespace {

std::string percent(const std::optional<double>& rate) {
  return rate ? fmt::format("{:.1f}%", *rate * 100.0) : "n/a";
}

// Display width in code points, so accented names still line up.
std::size_t width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

std::string format_text(const std::vector<LeaderboardRow>& rows) {
  std::vector<std::vector<std::string>> cells{{"Rank", "Model", "BT Rating", "95% CI", "Win Rate"}};
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.rank), r.display_name, fmt::format("{:.1f}", r.bt_rating),
                     fmt::format("[{:.1f}, {:.1f}]", r.ci_low, r.ci_high), percent(r.win_rate)});
  }
  std::vector<std::size_t> widths(5, 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      const std::string& v = cells[r][c];
      const std::string pad(widths[c] - width(v), ' ');
      if (c) line += "  ";
      // Text columns flush left, numbers flush right.
      line += c == 1 ? v + pad : pad + v;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (r == 0) {
      std::size_t total = 2 * (widths.size() - 1);
      for (auto w : widths) total += w;
      out += std::string(total, '-') + '\n';
    }
  }
  return out;
}

std::string format_csv(const std::vector<LeaderboardRow>& rows) {
  std::string out = "rank,model,bt_rating,ci_low,ci_high,win_rate,stable_elo,matches\n";
  for (const auto& r : rows) {
    out += csv::join({std::to_string(r.rank), r.model_id, fmt::format("{}", r.bt_rating), fmt::format("{}", r.ci_low),
                      fmt::format("{}", r.ci_high), r.win_rate ? fmt::format("{}", *r.win_rate) : "",
                      fmt::format("{}", r.stable_elo), std::to_string(r.matches)});
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const std::vector<LeaderboardRow>& rows) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["rank"] = r.rank;
    row["model_id"] = r.model_id;
    row["display_name"] = r.display_name;
    row["bt_rating"] = r.bt_rating;
    row["ci_low"] = r.ci_low;
    row["ci_high"] = r.ci_high;
    row["win_rate"] = r.win_rate ? nlohmann::ordered_json(*r.win_rate) : nlohmann::ordered_json(nullptr);
    row["stable_elo"] = r.stable_elo;
    row["matches"] = r.matches;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace laughboard::rating
