#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laughboard/analytics/taxonomy.hpp"
#include "laughboard/core/match_graph.hpp"

namespace laughboard::analytics {

// Tag counts for one model on one axis. Mechanism and delivery rows count
// tags on the model's wins, failure rows count tags on its losses.
struct FeatureDistribution {
  std::string model_id;
  taxonomy::Axis axis = taxonomy::Axis::kMechanism;
  std::vector<long> counts;  // taxonomy order
  long outcomes = 0;         // wins, or losses for the failure axis

  long total() const;
  long count(std::string_view tag) const;
  // Share of all tags on this row, in percent (row sums to 100). nullopt
  // when the row has no tags at all.
  std::optional<std::vector<double>> percentages() const;
};

// One row per (model, axis), models in registration order, axes in
// taxonomy order. Ties and inactive records contribute nothing.
std::vector<FeatureDistribution> tally_features(const MatchHistoryGraph& graph);

struct HeatmapMatrix {
  taxonomy::Axis axis = taxonomy::Axis::kMechanism;
  std::vector<std::string> rows;     // model ids
  std::vector<std::string> columns;  // tag keys, taxonomy order
  std::vector<std::vector<double>> values;  // percent; all zero on an undefined row
  std::vector<bool> defined;

  bool operator==(const HeatmapMatrix&) const = default;
};

// Percentages for `axis` with rows in `row_order` (leaderboard rank order).
// Every id in row_order needs a distribution on that axis.
HeatmapMatrix export_heatmap(std::span<const FeatureDistribution> distributions, taxonomy::Axis axis,
                             std::span<const std::string> row_order);
// Axis by name ("mechanism", "delivery", "failure"); anything else throws.
HeatmapMatrix export_heatmap(std::span<const FeatureDistribution> distributions, std::string_view axis,
                             std::span<const std::string> row_order);

// CSV: "model,<tag>,..." then one line per row; an undefined row leaves its
// cells empty.
std::string to_csv(const HeatmapMatrix& m);
HeatmapMatrix heatmap_from_csv(std::string_view text, taxonomy::Axis axis);
nlohmann::ordered_json to_json(const HeatmapMatrix& m);

// Pairwise score percentages: cell[i][j] = (wins of i over j + ties / 2) /
// matches(i, j) * 100. Diagonal and unplayed pairs are nullopt.
struct WinRateMatrix {
  std::vector<std::string> models;
  std::vector<std::vector<std::optional<double>>> cells;
};

// Rows and columns follow `order` when given, registration order otherwise.
WinRateMatrix export_winrate_matrix(const MatchHistoryGraph& graph, std::span<const std::string> order = {});

std::string to_csv(const WinRateMatrix& m);
nlohmann::ordered_json to_json(const WinRateMatrix& m);

}  // namespace laughboard::analytics
