#include "laughboard/analytics/features.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <numeric>

#include <fmt/format.h>

#include "laughboard/core/csv.hpp"
#include "laughboard/core/errors.hpp"

namespace laughboard::analytics {

namespace {

constexpr std::size_t kAxisCount = taxonomy::kAxes.size();

std::size_t tag_index(taxonomy::Axis axis, std::string_view tag) {
  const auto list = taxonomy::tags(axis);
  const auto it = std::find(list.begin(), list.end(), tag);
  // Graph validation rejects foreign tags on append.
  assert(it != list.end());
  return static_cast<std::size_t>(it - list.begin());
}

std::string number(double v) { return fmt::format("{}", v); }

double parse_number(std::string_view text, long line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("not a number: '" + std::string(text) + "'", line);
  }
  return v;
}

}  // namespace

long FeatureDistribution::total() const { return std::accumulate(counts.begin(), counts.end(), 0L); }

long FeatureDistribution::count(std::string_view tag) const {
  const auto list = taxonomy::tags(axis);
  const auto it = std::find(list.begin(), list.end(), tag);
  if (it == list.end()) throw ValidationError("'" + std::string(tag) + "' is not a " + std::string(to_string(axis)) + " tag");
  return counts[static_cast<std::size_t>(it - list.begin())];
}

std::optional<std::vector<double>> FeatureDistribution::percentages() const {
  const long sum = total();
  if (sum == 0) return std::nullopt;
  std::vector<double> out;
  out.reserve(counts.size());
  for (long c : counts) out.push_back(100.0 * static_cast<double>(c) / static_cast<double>(sum));
  return out;
}

std::vector<FeatureDistribution> tally_features(const MatchHistoryGraph& graph) {
  const auto models = graph.models();
  std::vector<FeatureDistribution> out;
  out.reserve(models.size() * kAxisCount);
  for (const auto& m : models) {
    for (auto axis : taxonomy::kAxes) {
      out.push_back(FeatureDistribution{m.model_id, axis, std::vector<long>(taxonomy::tags(axis).size(), 0), 0});
    }
  }
  const auto row = [&](int model, taxonomy::Axis axis) -> FeatureDistribution& {
    return out[static_cast<std::size_t>(model) * kAxisCount + static_cast<std::size_t>(axis)];
  };

  const auto records = graph.records();
  const auto edges = graph.edges();
  for (std::size_t pos = 0; pos < records.size(); ++pos) {
    if (!graph.is_active(pos) || edges[pos].score_for_a == 0.5) continue;
    const auto& v = records[pos].verdict;
    const bool a_won = edges[pos].score_for_a == 1.0;
    const int winner = a_won ? edges[pos].side_a : edges[pos].side_b;
    const int loser = a_won ? edges[pos].side_b : edges[pos].side_a;
    const auto bump = [&](FeatureDistribution& d, const std::vector<std::string>& tags) {
      ++d.outcomes;
      for (const auto& t : tags) ++d.counts[tag_index(d.axis, t)];
    };
    bump(row(winner, taxonomy::Axis::kMechanism), v.winner_humor_features);
    bump(row(winner, taxonomy::Axis::kDelivery), v.winner_delivery_features);
    bump(row(loser, taxonomy::Axis::kFailure), v.loser_features);
  }
  return out;
}

HeatmapMatrix export_heatmap(std::span<const FeatureDistribution> distributions, taxonomy::Axis axis,
                             std::span<const std::string> row_order) {
  HeatmapMatrix m;
  m.axis = axis;
  for (auto tag : taxonomy::tags(axis)) m.columns.emplace_back(tag);
  for (const auto& id : row_order) {
    const auto it = std::find_if(distributions.begin(), distributions.end(),
                                 [&](const FeatureDistribution& d) { return d.axis == axis && d.model_id == id; });
    if (it == distributions.end()) throw NotFoundError("no " + std::string(to_string(axis)) + " distribution for '" + id + "'");
    const auto pct = it->percentages();
    m.rows.push_back(id);
    m.values.push_back(pct.value_or(std::vector<double>(m.columns.size(), 0.0)));
    m.defined.push_back(pct.has_value());
  }
  return m;
}

HeatmapMatrix export_heatmap(std::span<const FeatureDistribution> distributions, std::string_view axis,
                             std::span<const std::string> row_order) {
  const auto parsed = taxonomy::parse_axis(axis);
  if (!parsed) throw ValidationError("unknown feature axis '" + std::string(axis) + "'");
  return export_heatmap(distributions, *parsed, row_order);
}

std::string to_csv(const HeatmapMatrix& m) {
  std::vector<std::string> header{"model"};
  header.insert(header.end(), m.columns.begin(), m.columns.end());
  std::string out = csv::join(header) + '\n';
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    std::vector<std::string> line{m.rows[r]};
    for (double v : m.values[r]) line.push_back(m.defined[r] ? number(v) : "");
    out += csv::join(line) + '\n';
  }
  return out;
}

HeatmapMatrix heatmap_from_csv(std::string_view text, taxonomy::Axis axis) {
  const auto rows = csv::parse(text);
  HeatmapMatrix m;
  m.axis = axis;
  for (auto tag : taxonomy::tags(axis)) m.columns.emplace_back(tag);
  std::vector<std::string> expected{"model"};
  expected.insert(expected.end(), m.columns.begin(), m.columns.end());
  if (rows.empty() || rows[0] != expected) throw FormatError("heatmap header does not match the " + std::string(to_string(axis)) + " axis", 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const long line = static_cast<long>(r) + 1;
    if (rows[r].size() != expected.size()) throw FormatError("expected " + std::to_string(expected.size()) + " fields", line);
    const bool defined = !rows[r][1].empty();
    std::vector<double> values;
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      if (rows[r][c].empty() == defined) throw FormatError("row mixes empty and numeric cells", line);
      values.push_back(defined ? parse_number(rows[r][c], line) : 0.0);
    }
    m.rows.push_back(rows[r][0]);
    m.values.push_back(std::move(values));
    m.defined.push_back(defined);
  }
  return m;
}

nlohmann::ordered_json to_json(const HeatmapMatrix& m) {
  nlohmann::ordered_json j;
  j["axis"] = to_string(m.axis);
  j["columns"] = m.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    nlohmann::ordered_json row;
    row["model"] = m.rows[r];
    row["defined"] = m.defined[r];
    row["values"] = m.defined[r] ? nlohmann::ordered_json(m.values[r]) : nlohmann::ordered_json(nullptr);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

WinRateMatrix export_winrate_matrix(const MatchHistoryGraph& graph, std::span<const std::string> order) {
  const std::size_t k = graph.models().size();
  std::vector<double> points(k * k, 0.0);
  std::vector<int> games(k * k, 0);
  for (const Edge& e : graph.active_edges()) {
    const auto a = static_cast<std::size_t>(e.side_a);
    const auto b = static_cast<std::size_t>(e.side_b);
    points[a * k + b] += e.score_for_a;
    points[b * k + a] += 1.0 - e.score_for_a;
    ++games[a * k + b];
    ++games[b * k + a];
  }

  std::vector<int> idx;
  WinRateMatrix m;
  if (order.empty()) {
    for (const auto& model : graph.models()) {
      idx.push_back(model.registration_index);
      m.models.push_back(model.model_id);
    }
  } else {
    if (order.size() != k) throw ValidationError("row order must list every model once");
    for (const auto& id : order) {
      const int i = graph.require_model(id);
      if (std::find(idx.begin(), idx.end(), i) != idx.end()) throw ValidationError("'" + id + "' listed twice");
      idx.push_back(i);
      m.models.push_back(id);
    }
  }
  for (int i : idx) {
    auto& row = m.cells.emplace_back();
    for (int j : idx) {
      const std::size_t at = static_cast<std::size_t>(i) * k + static_cast<std::size_t>(j);
      if (i == j || games[at] == 0) {
        row.emplace_back();
      } else {
        row.emplace_back(100.0 * points[at] / games[at]);
      }
    }
  }
  return m;
}

std::string to_csv(const WinRateMatrix& m) {
  std::vector<std::string> header{"model"};
  header.insert(header.end(), m.models.begin(), m.models.end());
  std::string out = csv::join(header) + '\n';
  for (std::size_t r = 0; r < m.models.size(); ++r) {
    std::vector<std::string> line{m.models[r]};
    for (const auto& c : m.cells[r]) line.push_back(c ? number(*c) : "");
    out += csv::join(line) + '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const WinRateMatrix& m) {
  nlohmann::ordered_json j;
  j["models"] = m.models;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& row : m.cells) {
    auto& out = j["cells"].emplace_back(nlohmann::ordered_json::array());
    for (const auto& c : row) out.push_back(c ? nlohmann::ordered_json(*c) : nlohmann::ordered_json(nullptr));
  }
  return j;
}

}  // namespace laughboard::analytics
