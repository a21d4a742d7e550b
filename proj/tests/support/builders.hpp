#pragma once

#include <string>
#include <vector>

#include "laughboard/core/match_graph.hpp"

namespace lbtest {

inline std::string model_name(int i) { return "m" + std::to_string(i); }

inline std::string prompt_name(int p) {
  std::string digits = std::to_string(p);
  return "p" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

// k models m0..m{k-1} and p prompts p0000..
inline laughboard::MatchHistoryGraph make_graph(int k, int p = 1) {
  laughboard::MatchHistoryGraph g;
  for (int i = 0; i < k; ++i) g.register_model(model_name(i));
  for (int j = 0; j < p; ++j) {
    g.register_prompt({prompt_name(j), "headline " + std::to_string(j), laughboard::TaskKind::kHeadline});
  }
  return g;
}

inline laughboard::Decision decision_for(double score_for_a) {
  if (score_for_a == 1.0) return laughboard::Decision::kA;
  if (score_for_a == 0.0) return laughboard::Decision::kB;
  return laughboard::Decision::kTie;
}

inline laughboard::MatchRecord make_record(const std::string& a, const std::string& b, const std::string& prompt,
                                           double score_for_a) {
  laughboard::MatchRecord r;
  r.prompt_id = prompt;
  r.side_a_model = a;
  r.side_b_model = b;
  r.verdict.decision = decision_for(score_for_a);
  r.verdict.reasoning = "test";
  r.score_for_a = score_for_a;
  r.judge_id = "test-judge";
  r.timestamp = "2026-01-01T00:00:00Z";
  return r;
}

// Appends a record between models a and b (indices) on prompt index p.
inline const laughboard::MatchRecord& play(laughboard::MatchHistoryGraph& g, int a, int b, double score_for_a,
                                           int p = 0) {
  return g.append_match(make_record(model_name(a), model_name(b), prompt_name(p), score_for_a));
}

}  // namespace lbtest
