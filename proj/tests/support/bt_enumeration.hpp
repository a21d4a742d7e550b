#pragma once

// Exhaustive enumeration of small comparison histories for the Bradley-Terry
// oracle checks. The likelihood depends on a history only through the game
// counts n_ij and each model's points W_i, so one representative history per
// (n, W) class covers every outcome pattern. Structures that are relabelings
// of an already visited one are skipped.

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lbtest {

struct PairGames {
  int a = 0;
  int b = 0;
  int games = 0;
  int half_points_a = 0;  // 2 x points a took from b

  int wins_a() const { return half_points_a / 2; }
  int ties() const { return half_points_a % 2; }
  int losses_a() const { return games - wins_a() - ties(); }
};

using History = std::vector<PairGames>;

namespace detail {

inline std::vector<std::pair<int, int>> all_pairs(int k) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) out.emplace_back(i, j);
  }
  return out;
}

inline bool connected(int k, const std::vector<std::pair<int, int>>& pairs, const std::vector<int>& n) {
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int parts = k;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (n[p] == 0) continue;
    const int x = find(pairs[p].first), y = find(pairs[p].second);
    if (x != y) {
      parent[x] = y;
      --parts;
    }
  }
  return parts == 1;
}

// True when no relabeling of the models gives a lexicographically smaller
// count vector.
inline bool canonical(int k, const std::vector<std::pair<int, int>>& pairs, const std::vector<int>& n) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> index(k * k, -1);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    index[pairs[p].first * k + pairs[p].second] = static_cast<int>(p);
    index[pairs[p].second * k + pairs[p].first] = static_cast<int>(p);
  }
  std::vector<int> mapped(n.size());
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      mapped[index[perm[pairs[p].first] * k + perm[pairs[p].second]]] = n[p];
    }
    if (mapped < n) return false;
  }
  return true;
}

}  // namespace detail

// Calls fn once per (n, W) class of connected K-model histories with at most
// `cap` games per pair and `total_max` games overall. Returns the class count.
inline long enumerate_histories(int k, int cap, int total_max, const std::function<void(const History&)>& fn) {
  const auto pairs = detail::all_pairs(k);
  std::vector<int> n(pairs.size(), 0);
  long classes = 0;
  std::function<void(std::size_t, int)> counts = [&](std::size_t p, int used) {
    if (p == pairs.size()) {
      if (!detail::connected(k, pairs, n) || !detail::canonical(k, pairs, n)) return;
      // Reachable point vectors, each with the first per-pair split that hits it.
      std::unordered_map<long, std::vector<int>> seen;
      std::vector<int> half(pairs.size(), 0);
      std::vector<int> w(k, 0);
      std::function<void(std::size_t)> split = [&](std::size_t q) {
        if (q == pairs.size()) {
          long code = 0;
          for (int x : w) code = code * 64 + x;
          seen.try_emplace(code, half);
          return;
        }
        for (int h = 0; h <= 2 * n[q]; ++h) {
          half[q] = h;
          w[pairs[q].first] += h;
          w[pairs[q].second] += 2 * n[q] - h;
          split(q + 1);
          w[pairs[q].first] -= h;
          w[pairs[q].second] -= 2 * n[q] - h;
        }
      };
      split(0);
      for (const auto& [code, h] : seen) {
        History history;
        for (std::size_t q = 0; q < pairs.size(); ++q) {
          if (n[q] > 0) history.push_back({pairs[q].first, pairs[q].second, n[q], h[q]});
        }
        fn(history);
        ++classes;
      }
      return;
    }
    for (int c = 0; c <= cap && used + c <= total_max; ++c) {
      n[p] = c;
      counts(p + 1, used + c);
    }
    n[p] = 0;
  };
  counts(0, 0);
  return classes;
}

}  // namespace lbtest
