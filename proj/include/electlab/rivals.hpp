#pragma once

// Comparison systems. Schulze/Copeland/Kemeny/Black are Condorcet-consistent
// rivals; Borda/Hare/Coombs/plurality/runoff/approval are the usual
// positional and elimination systems; Young and Dodgson are exact
// minimum-change searches with desk-scale caps.
//
// Fractional first/last-place credit for tied tiers is accumulated in exact
// integer units of 1/lcm(1..c), never floating point.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "electlab/ballots.hpp"
#include "electlab/election_result.hpp"
#include "electlab/minimax.hpp"

namespace electlab {

struct SearchCaps {
  int kemeny_max_candidates = 8;
  long long exact_search_max_voters = 1000;  // Young / Dodgson
  int exact_search_max_patterns = 12;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline ElectionResult winners_by_max(const std::string& method,
                                     const std::vector<int128>& score,
                                     const std::string& label,
                                     double scale = 1.0) {
  ElectionResult r;
  r.method = method;
  r.score_label = label;
  std::vector<int> ids(score.size());
  std::iota(ids.begin(), ids.end(), 0);
  r.winners = extremal_set(ids, [&](int a, int b) { return score[a] > score[b]; });
  for (auto s : score) r.scores.push_back(static_cast<double>(s) * scale);
  return r;
}

}  // namespace detail

// Beatpath winners over the margin graph: widest path where a link exists
// only for a positive margin and its strength is that margin.
inline ElectionResult schulze(const PairwiseTally& tally) {
  const int c = tally.candidate_count();
  std::vector<long long> strength(static_cast<size_t>(c) * c, 0);
  auto at = [&](int i, int j) -> long long& {
    return strength[static_cast<size_t>(i) * c + j];
  };
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j)
      if (i != j && tally.margin(i, j) > 0) at(i, j) = tally.margin(i, j);
  for (int k = 0; k < c; ++k)
    for (int i = 0; i < c; ++i) {
      if (i == k) continue;
      for (int j = 0; j < c; ++j) {
        if (j == i || j == k) continue;
        at(i, j) = std::max(at(i, j), std::min(at(i, k), at(k, j)));
      }
    }
  ElectionResult r;
  r.method = "schulze";
  r.score_label = "beatpath wins";
  for (int x = 0; x < c; ++x) {
    bool beaten = false;
    int path_wins = 0;
    for (int y = 0; y < c; ++y) {
      if (y == x) continue;
      if (at(y, x) > at(x, y)) beaten = true;
      if (at(x, y) > at(y, x)) ++path_wins;
    }
    if (!beaten) r.winners.push_back(x);
    r.scores.push_back(path_wins);
  }
  return r;
}

inline ElectionResult copeland(const PairwiseTally& tally) {
  const int c = tally.candidate_count();
  std::vector<detail::int128> score(c, 0);  // 2*wins + ties, exact halves
  for (int x = 0; x < c; ++x)
    for (int y = 0; y < c; ++y) {
      if (y == x) continue;
      long long m = tally.margin(x, y);
      if (m > 0) score[x] += 2;
      if (m == 0) score[x] += 1;
    }
  return detail::winners_by_max("copeland", score, "race wins (ties = 1/2)", 0.5);
}

// Borda score: per ballot, one point for every candidate in a strictly later
// tier plus every unrated candidate; unrated candidates score nothing.
inline ElectionResult borda(const Profile& profile) {
  const int c = profile.candidate_count();
  std::vector<detail::int128> score(c, 0);
  for (const auto& e : profile.entries) {
    long long below = static_cast<long long>(e.pattern.unrated.size());
    for (auto it = e.pattern.tiers.rbegin(); it != e.pattern.tiers.rend(); ++it) {
      for (int id : *it) score[id] += static_cast<detail::int128>(below) * e.freq;
      below += static_cast<long long>(it->size());
    }
  }
  return detail::winners_by_max("borda", score, "borda score");
}

inline ElectionResult black(const Profile& profile) {
  auto status = condorcet_winner(pairwise_tally(profile));
  if (status.exists()) {
    ElectionResult r;
    r.method = "black";
    r.winners = {status.winner};
    r.trace.push_back(status.kind == CondorcetKind::Strong
                          ? "strong condorcet winner"
                          : "weak condorcet winner");
    return r;
  }
  ElectionResult r = borda(profile);
  r.method = "black";
  r.trace.push_back("no condorcet winner; borda applied");
  return r;
}

// Exhaustive Kemeny: the ranking minimizing total pairwise disagreements;
// winners are the candidates topping any optimal ranking.
inline ElectionResult kemeny(const Profile& profile, const SearchCaps& caps = {}) {
  const int c = profile.candidate_count();
  if (c > caps.kemeny_max_candidates)
    throw CapExceeded("kemeny: " + std::to_string(c) +
                      " candidates exceeds cap of " +
                      std::to_string(caps.kemeny_max_candidates));
  PairwiseTally tally = pairwise_tally(profile);
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  long long best = std::numeric_limits<long long>::max();
  std::vector<bool> tops(c, false);
  do {
    long long disagreements = 0;
    for (int i = 0; i < c; ++i)
      for (int j = i + 1; j < c; ++j)
        disagreements += tally.wins(perm[j], perm[i]);
    if (disagreements < best) {
      best = disagreements;
      std::fill(tops.begin(), tops.end(), false);
    }
    if (disagreements == best) tops[perm[0]] = true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  ElectionResult r;
  r.method = "kemeny";
  r.score_label = "tops an optimal ranking";
  for (int x = 0; x < c; ++x) {
    if (tops[x]) r.winners.push_back(x);
    r.scores.push_back(tops[x] ? 1.0 : 0.0);
  }
  r.trace.push_back("optimal ranking disagreement count " + std::to_string(best));
  return r;
}

// Kemeny disagreement score of an explicit ranking, for oracle checks.
inline long long kemeny_score(const PairwiseTally& tally,
                              const std::vector<int>& ranking) {
  long long disagreements = 0;
  for (size_t i = 0; i < ranking.size(); ++i)
    for (size_t j = i + 1; j < ranking.size(); ++j)
      disagreements += tally.wins(ranking[j], ranking[i]);
  return disagreements;
}

struct EliminationRound {
  std::vector<int> eliminated;
  std::vector<double> counts;  // per remaining candidate at this round
};

struct EliminationTrace {
  std::vector<EliminationRound> rounds;
};

namespace detail {

inline long long credit_unit(int c) {  // lcm(1..c); exact for c <= 42
  long long l = 1;
  for (long long k = 2; k <= c; ++k) l = std::lcm(l, k);
  return l;
}

// First-choice (or last-choice) counts among the remaining candidates, in
// units of 1/unit. A ballot whose rated tiers are all eliminated falls back
// to its unrated set; a fully exhausted ballot contributes nothing.
inline void extreme_tier_counts(const Profile& profile,
                                const std::vector<bool>& remaining, bool top,
                                long long unit, std::vector<int128>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  std::vector<int> members;
  for (const auto& e : profile.entries) {
    members.clear();
    if (top) {
      for (const auto& tier : e.pattern.tiers) {
        for (int id : tier)
          if (remaining[id]) members.push_back(id);
        if (!members.empty()) break;
      }
      if (members.empty())
        for (int id : e.pattern.unrated)
          if (remaining[id]) members.push_back(id);
    } else {
      for (int id : e.pattern.unrated)
        if (remaining[id]) members.push_back(id);
      if (members.empty())
        for (auto it = e.pattern.tiers.rbegin(); it != e.pattern.tiers.rend();
             ++it) {
          for (int id : *it)
            if (remaining[id]) members.push_back(id);
          if (!members.empty()) break;
        }
    }
    if (members.empty()) continue;
    int128 credit = static_cast<int128>(unit / members.size()) * e.freq;
    for (int id : members) counts[id] += credit;
  }
}

// Iterative elimination by extreme count. `eliminate_min` selects Hare
// (fewest first places out); otherwise Coombs (most last places out).
inline ElectionResult elimination_impl(const Profile& profile, bool hare_rule,
                                       const std::string& method,
                                       EliminationTrace* trace_out) {
  const int c = profile.candidate_count();
  const long long unit = credit_unit(c);
  std::vector<bool> remaining(c, true);
  int remaining_count = c;
  std::vector<int128> counts(c, 0);
  ElectionResult r;
  r.method = method;
  r.score_label = hare_rule ? "first-place count at elimination"
                            : "last-place count at elimination";
  r.scores.assign(c, 0.0);
  EliminationTrace trace;
  while (remaining_count > 1) {
    extreme_tier_counts(profile, remaining, hare_rule, unit, counts);
    int128 extreme = 0;
    bool first = true;
    for (int x = 0; x < c; ++x) {
      if (!remaining[x]) continue;
      if (first || (hare_rule ? counts[x] < extreme : counts[x] > extreme)) {
        extreme = counts[x];
        first = false;
      }
    }
    std::vector<int> out;
    for (int x = 0; x < c; ++x)
      if (remaining[x] && counts[x] == extreme) out.push_back(x);
    EliminationRound round;
    for (int x = 0; x < c; ++x)
      if (remaining[x])
        round.counts.push_back(static_cast<double>(counts[x]) /
                               static_cast<double>(unit));
    if (static_cast<int>(out.size()) == remaining_count) {
      r.trace.push_back("all remaining candidates tied; returned as tie");
      trace.rounds.push_back(std::move(round));
      break;
    }
    round.eliminated = out;
    for (int x : out) {
      remaining[x] = false;
      r.scores[x] = static_cast<double>(counts[x]) / static_cast<double>(unit);
      --remaining_count;
    }
    trace.rounds.push_back(std::move(round));
  }
  for (int x = 0; x < c; ++x)
    if (remaining[x]) r.winners.push_back(x);
  if (trace_out) *trace_out = std::move(trace);
  return r;
}

}  // namespace detail

inline ElectionResult hare(const Profile& profile,
                           EliminationTrace* trace = nullptr) {
  return detail::elimination_impl(profile, true, "hare", trace);
}

inline ElectionResult coombs(const Profile& profile,
                             EliminationTrace* trace = nullptr) {
  return detail::elimination_impl(profile, false, "coombs", trace);
}

inline ElectionResult plurality(const Profile& profile) {
  const int c = profile.candidate_count();
  const long long unit = detail::credit_unit(c);
  std::vector<bool> remaining(c, true);
  std::vector<detail::int128> counts(c, 0);
  detail::extreme_tier_counts(profile, remaining, true, unit, counts);
  auto r = detail::winners_by_max("plurality", counts, "first-place count",
                                  1.0 / static_cast<double>(unit));
  return r;
}

// Top two by first-place count, then their head-to-head from the full
// patterns. Ties for an entrant slot go to declaration order (recorded).
inline ElectionResult plurality_runoff(const Profile& profile) {
  const int c = profile.candidate_count();
  ElectionResult r;
  r.method = "plurality-runoff";
  r.score_label = "first-place count";
  r.scores = plurality(profile).scores;
  if (c == 1) {
    r.winners = {0};
    return r;
  }
  const long long unit = detail::credit_unit(c);
  std::vector<detail::int128> counts(c, 0);
  std::vector<bool> remaining(c, true);
  detail::extreme_tier_counts(profile, remaining, true, unit, counts);
  std::vector<int> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });
  int first = order[0], second = order[1];
  bool entrant_tie = counts[order[0]] == counts[order[1]] ||
                     (c > 2 && counts[order[1]] == counts[order[2]]);
  if (entrant_tie) r.trace.push_back("entrant tie broken by declaration order");
  r.trace.push_back("runoff: " + profile.candidates[first].name + " vs " +
                    profile.candidates[second].name);
  long long m = pairwise_tally(profile).margin(first, second);
  if (m > 0)
    r.winners = {first};
  else if (m < 0)
    r.winners = {second};
  else {
    r.winners = {std::min(first, second), std::max(first, second)};
    r.trace.push_back("runoff tied");
  }
  return r;
}

// Approval count per voter: default scheme approves the voter's top
// (index mod 5 + 1) candidates, clamped to the field size.
using ApprovalScheme = std::function<int(long long voter_index)>;

inline ElectionResult approval(const Profile& profile,
                               const ApprovalScheme& scheme = {}) {
  const int c = profile.candidate_count();
  std::vector<detail::int128> approvals(c, 0);
  long long voter_index = 0;
  for (const auto& e : profile.entries) {
    for (long long i = 0; i < e.freq; ++i, ++voter_index) {
      int k;
      if (scheme) {
        k = scheme(voter_index);
        if (k < 1 || k > c)
          throw std::invalid_argument("approval count " + std::to_string(k) +
                                      " outside 1.." + std::to_string(c));
      } else {
        k = static_cast<int>(voter_index % 5) + 1;
        k = std::min(k, c);
      }
      int approved = 0;
      for (const auto& tier : e.pattern.tiers) {
        if (approved >= k) break;
        for (int id : tier) ++approvals[id];
        approved += static_cast<int>(tier.size());
      }
      if (approved < k)
        for (int id : e.pattern.unrated) ++approvals[id];
    }
  }
  return detail::winners_by_max("approval", approvals, "approvals");
}

enum class YoungMode { Strong, Weak };

namespace detail {

struct YoungInstance {
  int c = 0;
  int target = 0;
  std::vector<long long> freq;
  // margin_shift[p][y]: effect on margin(target, y) of deleting one voter of
  // pattern p (+1 when the pattern prefers y, -1 when it prefers target).
  std::vector<std::vector<int>> margin_shift;
  std::vector<long long> base_margin;  // margin(target, y)
  long long threshold = 1;             // strong: margin >= 1; weak: >= 0
};

inline bool young_satisfied(const YoungInstance& inst,
                            const std::vector<long long>& margin) {
  for (int y = 0; y < inst.c; ++y)
    if (y != inst.target && margin[y] < inst.threshold) return false;
  return true;
}

inline long long young_lower_bound(const YoungInstance& inst,
                                   const std::vector<long long>& margin) {
  long long lb = 0;
  for (int y = 0; y < inst.c; ++y) {
    if (y == inst.target) continue;
    // Each deletion moves one margin by at most one.
    lb = std::max(lb, inst.threshold - margin[y]);
  }
  return lb;
}

inline void young_dfs(const YoungInstance& inst, size_t p,
                      std::vector<long long>& margin, long long deleted,
                      long long& best) {
  if (deleted + young_lower_bound(inst, margin) >= best) return;
  if (young_satisfied(inst, margin)) {
    best = deleted;
    return;
  }
  if (p == inst.freq.size()) return;
  // Larger deletions first: deep solutions tighten the bound early.
  for (long long d = inst.freq[p]; d >= 0; --d) {
    for (int y = 0; y < inst.c; ++y)
      if (y != inst.target) margin[y] += d * inst.margin_shift[p][y];
    young_dfs(inst, p + 1, margin, deleted + d, best);
    for (int y = 0; y < inst.c; ++y)
      if (y != inst.target) margin[y] -= d * inst.margin_shift[p][y];
  }
}

// Greedy upper bound: delete one voter at a time from the pattern whose
// deletion minimizes the remaining lower bound.
inline long long young_greedy(const YoungInstance& inst) {
  std::vector<long long> margin = inst.base_margin;
  std::vector<long long> freq = inst.freq;
  long long deleted = 0;
  while (!young_satisfied(inst, margin)) {
    long long best_lb = std::numeric_limits<long long>::max();
    int best_p = -1;
    for (size_t p = 0; p < freq.size(); ++p) {
      if (freq[p] == 0) continue;
      for (int y = 0; y < inst.c; ++y)
        if (y != inst.target) margin[y] += inst.margin_shift[p][y];
      long long lb = young_lower_bound(inst, margin);
      for (int y = 0; y < inst.c; ++y)
        if (y != inst.target) margin[y] -= inst.margin_shift[p][y];
      if (lb < best_lb) {
        best_lb = lb;
        best_p = static_cast<int>(p);
      }
    }
    if (best_p < 0) return std::numeric_limits<long long>::max();
    --freq[best_p];
    ++deleted;
    for (int y = 0; y < inst.c; ++y)
      if (y != inst.target) margin[y] += inst.margin_shift[best_p][y];
  }
  return deleted;
}

}  // namespace detail

// Minimum number of voters to delete so the target wins (or, in weak mode,
// at least ties) every race. Exact branch-and-bound over per-pattern
// deletion counts; empty when no deletion set can do it.
inline std::optional<long long> young_deletions(const Profile& profile,
                                                int target,
                                                const SearchCaps& caps = {},
                                                YoungMode mode = YoungMode::Strong) {
  if (profile.voters() > caps.exact_search_max_voters)
    throw CapExceeded("young: voter count exceeds cap");
  if (static_cast<int>(profile.entries.size()) > caps.exact_search_max_patterns)
    throw CapExceeded("young: pattern count exceeds cap");
  const int c = profile.candidate_count();
  detail::YoungInstance inst;
  inst.c = c;
  inst.target = target;
  inst.threshold = mode == YoungMode::Strong ? 1 : 0;
  PairwiseTally tally = pairwise_tally(profile);
  inst.base_margin.resize(c, 0);
  for (int y = 0; y < c; ++y)
    if (y != target) inst.base_margin[y] = tally.margin(target, y);
  for (const auto& e : profile.entries) {
    auto ranks = e.pattern.tier_ranks(c);
    std::vector<int> shift(c, 0);
    bool relevant = false;
    for (int y = 0; y < c; ++y) {
      if (y == target) continue;
      if (ranks[y] < ranks[target]) {
        shift[y] = 1;  // deleting removes a vote for y over target
        relevant = true;
      } else if (ranks[target] < ranks[y]) {
        shift[y] = -1;
      }
    }
    if (relevant) {
      inst.freq.push_back(e.freq);
      inst.margin_shift.push_back(std::move(shift));
    }
  }
  std::vector<long long> margin = inst.base_margin;
  long long best = detail::young_greedy(inst);
  if (best != std::numeric_limits<long long>::max()) ++best;  // strict prune bound
  detail::young_dfs(inst, 0, margin, 0, best);
  if (best == std::numeric_limits<long long>::max()) return std::nullopt;
  return best;
}

namespace detail {

struct DodgsonInstance {
  int c = 0;
  int target = 0;
  // Per pattern: candidates strictly above the target, nearest first, so a
  // lift of depth d flips exactly above[p][0..d-1] to below the target.
  std::vector<std::vector<int>> above;
  std::vector<long long> freq;
};

struct DodgsonState {
  std::vector<long long> need;               // remaining flips per opponent
  std::vector<std::vector<long long>> lifts; // [pattern][depth] voters lifted so far
};

inline long long dodgson_need_total(const std::vector<long long>& need) {
  long long t = 0;
  for (long long n : need)
    if (n > 0) t += n;
  return t;
}

struct DodgsonMove {
  int pattern;
  int from;  // current lift of the voter being extended (0 = fresh)
  int to;    // new lift depth
  int cost() const { return to - from; }
};

// Moves that flip `worst` one more time: lift a fresh voter of some pattern
// to its depth, or extend an already-lifted voter to that depth.
inline void dodgson_moves(const DodgsonInstance& inst, const DodgsonState& st,
                          int worst, std::vector<DodgsonMove>& out) {
  out.clear();
  for (size_t p = 0; p < inst.above.size(); ++p) {
    int pos = -1;
    for (size_t j = 0; j < inst.above[p].size(); ++j)
      if (inst.above[p][j] == worst) {
        pos = static_cast<int>(j);
        break;
      }
    if (pos < 0) continue;
    int depth = pos + 1;
    long long lifted_total = 0;
    for (size_t l = 1; l < st.lifts[p].size(); ++l) lifted_total += st.lifts[p][l];
    if (inst.freq[p] > lifted_total)
      out.push_back({static_cast<int>(p), 0, depth});
    for (int l0 = 1; l0 < depth; ++l0)
      if (l0 < static_cast<int>(st.lifts[p].size()) && st.lifts[p][l0] > 0)
        out.push_back({static_cast<int>(p), l0, depth});
  }
  std::sort(out.begin(), out.end(), [](const DodgsonMove& a, const DodgsonMove& b) {
    if (a.cost() != b.cost()) return a.cost() < b.cost();
    if (a.pattern != b.pattern) return a.pattern < b.pattern;
    return a.from < b.from;
  });
}

inline void dodgson_dfs(const DodgsonInstance& inst, DodgsonState& st,
                        long long cost, long long& best) {
  long long lb = dodgson_need_total(st.need);
  if (lb == 0) {
    best = std::min(best, cost);
    return;
  }
  if (cost + lb >= best) return;
  int worst = -1;
  for (int y = 0; y < inst.c; ++y)
    if (st.need[y] > 0 && (worst < 0 || st.need[y] > st.need[worst])) worst = y;
  std::vector<DodgsonMove> moves;
  dodgson_moves(inst, st, worst, moves);
  for (const auto& m : moves) {
    auto& lifts = st.lifts[m.pattern];
    if (static_cast<int>(lifts.size()) < m.to + 1) lifts.resize(m.to + 1, 0);
    if (m.from > 0) --lifts[m.from];
    ++lifts[m.to];
    for (int j = m.from; j < m.to; ++j) --st.need[inst.above[m.pattern][j]];
    dodgson_dfs(inst, st, cost + m.cost(), best);
    for (int j = m.from; j < m.to; ++j) ++st.need[inst.above[m.pattern][j]];
    --lifts[m.to];
    if (m.from > 0) ++lifts[m.from];
  }
}

}  // namespace detail

// Minimum number of single-voter adjacent transpositions making the target a
// strong Condorcet winner. Defined for strict full rankings only. Each flip
// of a voter's adjacent pair moves one margin by 2, so the per-opponent flip
// requirement is ceil((1 - margin)/2); the sum of requirements is an exact
// lower bound and the search branches on minimum-cost lifts.
inline long long dodgson_inversions(const Profile& profile, int target,
                                    const SearchCaps& caps = {}) {
  if (profile.voters() > caps.exact_search_max_voters)
    throw CapExceeded("dodgson: voter count exceeds cap");
  if (static_cast<int>(profile.entries.size()) > caps.exact_search_max_patterns)
    throw CapExceeded("dodgson: pattern count exceeds cap");
  const int c = profile.candidate_count();
  for (const auto& e : profile.entries)
    if (!e.pattern.is_strict_full_ranking())
      throw std::invalid_argument(
          "dodgson requires strict full rankings (no ties or unrated)");
  PairwiseTally tally = pairwise_tally(profile);
  detail::DodgsonInstance inst;
  inst.c = c;
  inst.target = target;
  for (const auto& e : profile.entries) {
    std::vector<int> above;
    bool seen_target = false;
    for (auto it = e.pattern.tiers.rbegin(); it != e.pattern.tiers.rend(); ++it) {
      int id = (*it)[0];
      if (id == target) {
        seen_target = true;
        continue;
      }
      if (seen_target) above.push_back(id);  // collected bottom-up => nearest first
    }
    if (!above.empty()) {
      inst.above.push_back(std::move(above));
      inst.freq.push_back(e.freq);
    }
  }
  detail::DodgsonState st;
  st.need.assign(c, 0);
  for (int y = 0; y < c; ++y) {
    if (y == target) continue;
    long long m = tally.margin(target, y);
    if (m < 1) st.need[y] = (2 - m) / 2;
  }
  st.lifts.assign(inst.above.size(), {});
  long long best = std::numeric_limits<long long>::max();
  detail::dodgson_dfs(inst, st, 0, best);
  return best;  // always feasible under full ranking: lift everyone fully
}

}  // namespace electlab
