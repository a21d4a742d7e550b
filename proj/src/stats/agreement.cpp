#include "laughboard/stats/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "laughboard/core/errors.hpp"

namespace laughboard::stats {

KendallResult kendall_tau(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw ValidationError("rankings have different lengths");
  if (a.size() < 2) throw ValidationError("kendall_tau needs at least 2 models");
  std::unordered_map<std::string, int> pos_b;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!pos_b.emplace(b[i], static_cast<int>(i)).second) throw ValidationError("'" + b[i] + "' ranked twice");
  }
  std::vector<int> perm;  // b-position of a's i-th model
  std::set<std::string_view> seen;
  for (const auto& id : a) {
    if (!seen.insert(id).second) throw ValidationError("'" + id + "' ranked twice");
    const auto it = pos_b.find(id);
    if (it == pos_b.end()) throw ValidationError("'" + id + "' is missing from the other ranking");
    perm.push_back(it->second);
  }

  KendallResult out;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) (perm[i] < perm[j] ? out.concordant : out.discordant) += 1;
  }
  const int n = static_cast<int>(perm.size());
  const double pairs = n * (n - 1) / 2.0;
  out.tau = (out.concordant - out.discordant) / pairs;
  out.p_value = kendall_exact_p(n, out.discordant);
  return out;
}

double kendall_exact_p(int n, int discordant) {
  if (n < 2) throw ValidationError("need at least 2 items");
  const int max_inv = n * (n - 1) / 2;
  if (discordant < 0 || discordant > max_inv) throw ValidationError("discordant count out of range");
  // Inversion-count law of a uniform permutation, built one item at a time
  // and kept as probabilities so large n cannot overflow.
  std::vector<double> dist{1.0};
  for (int m = 2; m <= n; ++m) {
    std::vector<double> next(dist.size() + static_cast<std::size_t>(m - 1), 0.0);
    for (std::size_t k = 0; k < dist.size(); ++k) {
      for (int add = 0; add < m; ++add) next[k + static_cast<std::size_t>(add)] += dist[k] / m;
    }
    dist.swap(next);
  }
  // |tau| depends on |max_inv - 2 d|; compare in integers.
  const int observed = std::abs(max_inv - 2 * discordant);
  double p = 0.0;
  for (int d = 0; d <= max_inv; ++d) {
    if (std::abs(max_inv - 2 * d) >= observed) p += dist[static_cast<std::size_t>(d)];
  }
  return std::min(1.0, p);
}

TransitivityResult transitivity_score(const MatchHistoryGraph& graph) {
  const std::size_t k = graph.models().size();
  if (k < 3) throw ValidationError("transitivity needs at least 3 models");
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
  // beats(i, j) compares twice the points with the games to stay exact.
  const auto beats = [&](std::size_t i, std::size_t j) { return 2.0 * points[i * k + j] > games[i * k + j]; };
  const auto edge = [&](std::size_t i, std::size_t j) { return beats(i, j) || beats(j, i); };

  TransitivityResult out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!edge(i, j)) continue;
      for (std::size_t l = j + 1; l < k; ++l) {
        if (!edge(i, l) || !edge(j, l)) continue;
        ++out.complete_triads;
        // A tournament triad is cyclic iff every vertex has out-degree one.
        const int out_i = beats(i, j) + beats(i, l);
        const int out_j = beats(j, i) + beats(j, l);
        if (out_i == 1 && out_j == 1) ++out.cyclic_triads;
      }
    }
  }
  if (out.complete_triads > 0) {
    out.score = 1.0 - static_cast<double>(out.cyclic_triads) / out.complete_triads;
  }
  return out;
}

void AnnotationTable::add(const std::string& unit_id, const std::string& annotator_id, Decision label) {
  if (unit_id.empty() || annotator_id.empty()) throw ValidationError("unit and annotator ids must be non-empty");
  units_[unit_id][annotator_id] = label;
}

AlphaResult krippendorff_alpha(const std::vector<std::vector<int>>& units) {
  AlphaResult out;
  int max_label = -1;
  for (const auto& u : units) {
    for (int v : u) {
      if (v < 0) throw ValidationError("labels must be non-negative");
      max_label = std::max(max_label, v);
    }
  }
  const auto c = static_cast<std::size_t>(max_label + 1);
  std::vector<double> n_c(c, 0.0);
  // Off-diagonal coincidence mass: each ordered pair of values from
  // different coders in a unit weighs 1 / (m - 1).
  double disagree = 0.0;
  for (const auto& u : units) {
    const auto m = static_cast<double>(u.size());
    if (u.size() < 2) continue;
    ++out.usable_units;
    out.pairable_values += static_cast<long>(u.size());
    std::vector<double> freq(c, 0.0);
    for (int v : u) freq[static_cast<std::size_t>(v)] += 1.0;
    double same = 0.0;
    for (std::size_t x = 0; x < c; ++x) {
      n_c[x] += freq[x];
      same += freq[x] * (freq[x] - 1.0);
    }
    disagree += (m * (m - 1.0) - same) / (m - 1.0);
  }
  if (out.usable_units < 2) throw ValidationError("alpha needs at least 2 units with 2 or more values");

  const auto n = static_cast<double>(out.pairable_values);
  double sum_sq = 0.0;
  for (double x : n_c) sum_sq += x * x;
  const double expected_mass = n * n - sum_sq;
  out.observed_disagreement = disagree / n;
  out.expected_disagreement = expected_mass / (n * (n - 1.0));
  // alpha = 1 - D_o / D_e = (E - (n - 1) O) / E with one final division.
  if (expected_mass > 0.0) out.alpha = (expected_mass - (n - 1.0) * disagree) / expected_mass;
  return out;
}

namespace {

std::vector<std::vector<int>> label_units(const AnnotationTable& table) {
  std::vector<std::vector<int>> units;
  for (const auto& [unit, votes] : table.units()) {
    auto& u = units.emplace_back();
    for (const auto& [annotator, label] : votes) u.push_back(static_cast<int>(label));
  }
  return units;
}

}  // namespace

AlphaResult krippendorff_alpha(const AnnotationTable& table) { return krippendorff_alpha(label_units(table)); }

std::optional<double> percent_agreement(const AnnotationTable& table) {
  double agree = 0.0;
  double pairs = 0.0;
  for (const auto& u : label_units(table)) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i == j) continue;
        pairs += 1.0;
        agree += u[i] == u[j];
      }
    }
  }
  if (pairs == 0.0) return std::nullopt;
  return agree / pairs;
}

StabilityReport stability_report(const rating::StableEloResult& stable) {
  if (stable.n_shuffles < 2) throw ValidationError("stability needs at least 2 shuffles");
  StabilityReport out;
  out.n_shuffles = stable.n_shuffles;
  out.sigma = stable.sigma;
  double sum = 0.0;
  for (const auto& [model, s] : stable.sigma) {
    out.sigma_max = std::max(out.sigma_max, s);
    sum += s;
  }
  if (!stable.sigma.empty()) out.sigma_mean = sum / static_cast<double>(stable.sigma.size());
  return out;
}

}  // namespace laughboard::stats
