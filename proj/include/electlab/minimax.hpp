#pragma once

// Classic minimax and its variants and tie-breakers. Every comparison that
// decides a winner or a tie is exact: raw margins are integers, proportional
// margins and sign-test z values are compared by integer cross
// multiplication, and only the likelihood variant compares doubles (in log
// form, with a fixed documented slack). A float-equality tie here would
// corrupt every tie statistic downstream.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "electlab/ballots.hpp"
#include "electlab/cmo.hpp"
#include "electlab/election_result.hpp"

namespace electlab {

struct LossEntry {
  long long margin = 0;        // this candidate's margin in the race (< 0 = defeat)
  long long participants = 0;  // voters expressing a preference in the race
};

// Per candidate: all c-1 race margins sorted worst-first (ascending margin;
// among equal margins, ascending proportional margin).
struct LossProfile {
  std::vector<std::vector<LossEntry>> rows;
};

namespace detail {

using int128 = __int128;

// sign of a/b - c/d with b, d >= 0; a race with no participants counts as
// proportional margin 0.
inline int cmp_ratio(long long a, long long b, long long c, long long d) {
  if (b == 0) { a = 0; b = 1; }
  if (d == 0) { c = 0; d = 1; }
  int128 lhs = static_cast<int128>(a) * d;
  int128 rhs = static_cast<int128>(c) * b;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// sign of z(a,b) - z(c,d) where z(m,p) = m/sqrt(p), compared through the
// signed square m*|m|/p.
inline int cmp_signed_z(long long a, long long b, long long c, long long d) {
  if (b == 0) { a = 0; b = 1; }
  if (d == 0) { c = 0; d = 1; }
  int128 lhs = static_cast<int128>(a) * (a < 0 ? -a : a) * d;
  int128 rhs = static_cast<int128>(c) * (c < 0 ? -c : c) * b;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

inline ElectionResult condorcet_shortcut(const CondorcetStatus& status,
                                         const std::string& method) {
  ElectionResult r;
  r.method = method;
  r.winners = {status.winner};
  r.trace.push_back(status.kind == CondorcetKind::Strong
                        ? "strong condorcet winner"
                        : "weak condorcet winner");
  return r;
}

// Winners under a strict-weak-order "better" comparator over candidates.
template <typename Better>
std::vector<int> extremal_set(const std::vector<int>& candidates, Better better) {
  std::vector<int> best;
  for (int x : candidates) {
    if (best.empty()) {
      best = {x};
      continue;
    }
    if (better(x, best[0]))
      best = {x};
    else if (!better(best[0], x))
      best.push_back(x);
  }
  std::sort(best.begin(), best.end());
  return best;
}

inline std::vector<int> all_candidates(const PairwiseTally& tally) {
  std::vector<int> ids(tally.candidate_count());
  for (int i = 0; i < tally.candidate_count(); ++i) ids[i] = i;
  return ids;
}

}  // namespace detail

inline LossProfile loss_profile(const PairwiseTally& tally) {
  const int c = tally.candidate_count();
  LossProfile lp;
  lp.rows.resize(c);
  for (int x = 0; x < c; ++x) {
    for (int y = 0; y < c; ++y) {
      if (y == x) continue;
      lp.rows[x].push_back({tally.margin(x, y), tally.participants(x, y)});
    }
    std::sort(lp.rows[x].begin(), lp.rows[x].end(),
              [](const LossEntry& a, const LossEntry& b) {
                if (a.margin != b.margin) return a.margin < b.margin;
                return detail::cmp_ratio(a.margin, a.participants, b.margin,
                                         b.participants) < 0;
              });
  }
  return lp;
}

// Largest loss: the most negative margin, as a positive defeat size (zero or
// negative when the candidate loses nowhere).
inline long long largest_loss(const PairwiseTally& tally, int x) {
  long long worst = std::numeric_limits<long long>::min();
  for (int y = 0; y < tally.candidate_count(); ++y)
    if (y != x) worst = std::max(worst, -tally.margin(x, y));
  return worst == std::numeric_limits<long long>::min() ? 0 : worst;
}

inline ElectionResult minimax_classic(const PairwiseTally& tally) {
  auto status = condorcet_winner(tally);
  ElectionResult r;
  if (status.exists()) r = detail::condorcet_shortcut(status, "minimax");
  else {
    r.method = "minimax";
    r.winners = detail::extremal_set(detail::all_candidates(tally), [&](int a, int b) {
      return largest_loss(tally, a) < largest_loss(tally, b);
    });
  }
  r.score_label = "largest loss";
  for (int x = 0; x < tally.candidate_count(); ++x)
    r.scores.push_back(static_cast<double>(largest_loss(tally, x)));
  return r;
}

namespace detail {

// Worst race of x expressed as (negated margin, participants): larger
// fraction = worse. Exact comparison between candidates.
inline LossEntry worst_proportional(const PairwiseTally& tally, int x) {
  LossEntry worst{0, 0};
  bool first = true;
  for (int y = 0; y < tally.candidate_count(); ++y) {
    if (y == x) continue;
    LossEntry e{-tally.margin(x, y), tally.participants(x, y)};
    if (first || cmp_ratio(e.margin, e.participants, worst.margin,
                           worst.participants) > 0) {
      worst = e;
      first = false;
    }
  }
  return worst;
}

}  // namespace detail

inline ElectionResult minimax_p(const PairwiseTally& tally) {
  auto status = condorcet_winner(tally);
  ElectionResult r;
  if (status.exists()) r = detail::condorcet_shortcut(status, "minimax-p");
  else {
    r.method = "minimax-p";
    r.winners = detail::extremal_set(detail::all_candidates(tally), [&](int a, int b) {
      auto wa = detail::worst_proportional(tally, a);
      auto wb = detail::worst_proportional(tally, b);
      return detail::cmp_ratio(wa.margin, wa.participants, wb.margin,
                               wb.participants) < 0;
    });
  }
  r.score_label = "largest proportional loss";
  for (int x = 0; x < tally.candidate_count(); ++x) {
    auto w = detail::worst_proportional(tally, x);
    r.scores.push_back(w.participants == 0
                           ? 0.0
                           : static_cast<double>(w.margin) /
                                 static_cast<double>(w.participants));
  }
  return r;
}

namespace detail {

inline ElectionResult minimax_z_impl(const PairwiseTally& tally,
                                     const std::string& method) {
  auto status = condorcet_winner(tally);
  ElectionResult r;
  if (status.exists()) r = condorcet_shortcut(status, method);
  else {
    r.method = method;
    r.winners = extremal_set(all_candidates(tally), [&](int a, int b) {
      auto wa = worst_proportional(tally, a);
      auto wb = worst_proportional(tally, b);
      return cmp_signed_z(wa.margin, wa.participants, wb.margin,
                          wb.participants) < 0;
    });
  }
  r.score_label = method == "minimax-zs" ? "worst-race z^2 (signed)"
                                         : "worst-race z";
  for (int x = 0; x < tally.candidate_count(); ++x) {
    auto w = worst_proportional(tally, x);  // margin stored negated
    double z = w.participants == 0
                   ? 0.0
                   : static_cast<double>(-w.margin) /
                         std::sqrt(static_cast<double>(w.participants));
    r.scores.push_back(method == "minimax-zs" ? (z < 0 ? -z * z : z * z) : z);
  }
  return r;
}

}  // namespace detail

inline ElectionResult minimax_z(const PairwiseTally& tally) {
  return detail::minimax_z_impl(tally, "minimax-z");
}

// z^2 on a four-function calculator; same comparisons, same winners as
// minimax-z by construction.
inline ElectionResult minimax_zs(const PairwiseTally& tally) {
  return detail::minimax_z_impl(tally, "minimax-zs");
}

// Score = the candidate's lowest binomial likelihood ratio across lost
// races (1 when the candidate loses nowhere); highest score wins.
inline ElectionResult minimax_l(const PairwiseTally& tally) {
  auto status = condorcet_winner(tally);
  const int c = tally.candidate_count();
  std::vector<double> score(c, 0.0);  // min log LR over defeats
  for (int x = 0; x < c; ++x) {
    double worst = 0.0;
    for (int y = 0; y < c; ++y) {
      if (y == x || tally.margin(x, y) >= 0) continue;
      worst = std::min(worst, binomial_log_lr(tally.wins(x, y), tally.wins(y, x)));
    }
    score[x] = worst;
  }
  ElectionResult r;
  if (status.exists()) r = detail::condorcet_shortcut(status, "minimax-l");
  else {
    r.method = "minimax-l";
    double best = *std::max_element(score.begin(), score.end());
    for (int x = 0; x < c; ++x)
      if (score[x] >= best - kLogLrTolerance) r.winners.push_back(x);
  }
  r.score_label = "lowest binomial log LR";
  r.scores.assign(score.begin(), score.end());
  return r;
}

namespace detail {

inline ElectionResult defeat_sum_impl(const PairwiseTally& tally, bool squared) {
  const int c = tally.candidate_count();
  std::vector<int128> sums(c, 0);
  for (int x = 0; x < c; ++x)
    for (int y = 0; y < c; ++y) {
      if (y == x) continue;
      long long m = tally.margin(x, y);
      if (m < 0) sums[x] += squared ? static_cast<int128>(-m) * (-m)
                                    : static_cast<int128>(-m);
    }
  ElectionResult r;
  r.method = squared ? "sssmd" : "ssmd";
  r.score_label = squared ? "sum of squared defeat margins" : "sum of defeat margins";
  std::vector<int> ids = all_candidates(tally);
  r.winners = extremal_set(ids, [&](int a, int b) { return sums[a] < sums[b]; });
  for (int x = 0; x < c; ++x) r.scores.push_back(static_cast<double>(sums[x]));
  return r;
}

}  // namespace detail

inline ElectionResult ssmd(const PairwiseTally& tally) {
  return detail::defeat_sum_impl(tally, false);
}

inline ElectionResult sssmd(const PairwiseTally& tally) {
  return detail::defeat_sum_impl(tally, true);
}

// T1: the minimax-p score restricted to the tied set.
inline ElectionResult tiebreak_t1(const std::vector<int>& tied,
                                  const PairwiseTally& tally) {
  ElectionResult r;
  r.method = "minimax-t1";
  r.score_label = "largest proportional loss";
  r.winners = detail::extremal_set(tied, [&](int a, int b) {
    auto wa = detail::worst_proportional(tally, a);
    auto wb = detail::worst_proportional(tally, b);
    return detail::cmp_ratio(wa.margin, wa.participants, wb.margin,
                             wb.participants) < 0;
  });
  if (r.winners.size() > 1) r.trace.push_back("residual tie");
  return r;
}

// T2: lexicographic comparison of the sorted margin columns, worst entries
// first; opponents' identities play no role.
inline ElectionResult tiebreak_t2(const std::vector<int>& tied,
                                  const LossProfile& losses) {
  ElectionResult r;
  r.method = "minimax-t2";
  std::vector<int> remaining = tied;
  size_t column_length = losses.rows.empty() ? 0 : losses.rows[0].size();
  for (size_t k = 0; k < column_length && remaining.size() > 1; ++k) {
    remaining = detail::extremal_set(remaining, [&](int a, int b) {
      return losses.rows[a][k].margin > losses.rows[b][k].margin;
    });
    if (remaining.size() < tied.size() && remaining.size() == 1)
      r.trace.push_back("decided at column entry " + std::to_string(k + 1));
  }
  std::sort(remaining.begin(), remaining.end());
  r.winners = std::move(remaining);
  if (r.winners.size() > 1) r.trace.push_back("residual tie");
  return r;
}

// T3: alternate proportional and raw comparisons down the sorted columns:
// entry-1 proportional, entry-2 raw, entry-2 proportional, entry-3 raw, ...
inline ElectionResult tiebreak_t3(const std::vector<int>& tied,
                                  const PairwiseTally& tally,
                                  const LossProfile& losses) {
  (void)tally;
  ElectionResult r;
  r.method = "minimax-t3";
  std::vector<int> remaining = tied;
  size_t column_length = losses.rows.empty() ? 0 : losses.rows[0].size();
  auto proportional_stage = [&](size_t k) {
    remaining = detail::extremal_set(remaining, [&](int a, int b) {
      const auto& ea = losses.rows[a][k];
      const auto& eb = losses.rows[b][k];
      return detail::cmp_ratio(ea.margin, ea.participants, eb.margin,
                               eb.participants) > 0;
    });
  };
  auto raw_stage = [&](size_t k) {
    remaining = detail::extremal_set(remaining, [&](int a, int b) {
      return losses.rows[a][k].margin > losses.rows[b][k].margin;
    });
  };
  for (size_t k = 0; k < column_length && remaining.size() > 1; ++k) {
    if (k > 0) {
      raw_stage(k);
      if (remaining.size() == 1) {
        r.trace.push_back("decided at raw entry " + std::to_string(k + 1));
        break;
      }
    }
    proportional_stage(k);
    if (remaining.size() == 1)
      r.trace.push_back("decided at proportional entry " + std::to_string(k + 1));
  }
  std::sort(remaining.begin(), remaining.end());
  r.winners = std::move(remaining);
  if (r.winners.size() > 1) r.trace.push_back("residual tie");
  return r;
}

// H: head-to-head between two tied candidates; with three or more, the
// Condorcet winner of the restricted tournament (weak accepted, flagged).
inline ElectionResult tiebreak_h(const std::vector<int>& tied,
                                 const PairwiseTally& tally) {
  ElectionResult r;
  r.method = "minimax-h";
  if (tied.size() == 2) {
    long long m = tally.margin(tied[0], tied[1]);
    if (m > 0)
      r.winners = {tied[0]};
    else if (m < 0)
      r.winners = {tied[1]};
    else {
      r.winners = tied;
      r.trace.push_back("head-to-head tied");
    }
    std::sort(r.winners.begin(), r.winners.end());
    return r;
  }
  std::vector<bool> loses(tied.size(), false);
  for (size_t i = 0; i < tied.size(); ++i)
    for (size_t j = 0; j < tied.size(); ++j)
      if (i != j && tally.margin(tied[i], tied[j]) < 0) loses[i] = true;
  for (size_t i = 0; i < tied.size(); ++i) {
    if (loses[i]) continue;
    bool all_wins = true, others_lose = true;
    for (size_t j = 0; j < tied.size(); ++j) {
      if (j == i) continue;
      if (tally.margin(tied[i], tied[j]) <= 0) all_wins = false;
      if (!loses[j]) others_lose = false;
    }
    if (all_wins) {
      r.winners = {tied[i]};
      return r;
    }
    if (others_lose) {
      r.winners = {tied[i]};
      r.trace.push_back("weak condorcet winner among tied accepted");
      return r;
    }
  }
  r.winners = tied;
  std::sort(r.winners.begin(), r.winners.end());
  r.trace.push_back("no condorcet winner among tied; residual tie");
  return r;
}

enum class TieBreaker { T1, T2, T3 };

inline const char* tiebreaker_name(TieBreaker t) {
  switch (t) {
    case TieBreaker::T1: return "minimax-t1";
    case TieBreaker::T2: return "minimax-t2";
    case TieBreaker::T3: return "minimax-t3";
  }
  return "?";
}

// Classic minimax with the selected tie-breaker applied to any tie.
inline ElectionResult minimax_t(const PairwiseTally& tally, TieBreaker variant) {
  ElectionResult base = minimax_classic(tally);
  ElectionResult r = base;
  r.method = tiebreaker_name(variant);
  if (base.winners.size() <= 1) {
    r.trace.push_back("no tie-break needed");
    return r;
  }
  ElectionResult broken;
  switch (variant) {
    case TieBreaker::T1:
      broken = tiebreak_t1(base.winners, tally);
      break;
    case TieBreaker::T2:
      broken = tiebreak_t2(base.winners, loss_profile(tally));
      break;
    case TieBreaker::T3:
      broken = tiebreak_t3(base.winners, tally, loss_profile(tally));
      break;
  }
  r.winners = broken.winners;
  r.trace.push_back("classic tie among " + std::to_string(base.winners.size()) +
                    " candidates");
  for (const auto& note : broken.trace) r.trace.push_back(note);
  return r;
}

}  // namespace electlab
