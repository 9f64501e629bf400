#pragma once

// Constrained multinomial optimization (CMO): for each candidate, the
// maximum-likelihood population of voting-pattern proportions in which that
// candidate wins or ties every two-way race. Consistency with the observed
// profile is measured by a likelihood ratio against the unconstrained
// optimum (the observed proportions), computed in log space throughout
// because realistic profiles push LR values below 1e-15.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "electlab/ballots.hpp"
#include "electlab/election_result.hpp"

namespace electlab {

// Population hypothesis: one proportion per observed pattern, summing to 1.
struct Hypothesis {
  std::vector<double> h;
};

constexpr double kLogLrFloor = -std::numeric_limits<double>::infinity();

// Comparison slack for LR-based winner/tie detection.
constexpr double kLogLrTolerance = 1e-12;

inline Hypothesis hp_of(const Profile& profile) {
  long long v = profile.voters();
  if (v <= 0) throw std::invalid_argument("profile has no voters");
  Hypothesis hp;
  hp.h.reserve(profile.entries.size());
  for (const auto& e : profile.entries)
    hp.h.push_back(static_cast<double>(e.freq) / static_cast<double>(v));
  return hp;
}

// Sum of freq * ln(h) over patterns; -infinity if any observed pattern has
// zero hypothesized mass.
inline double sum_freq_log(const Hypothesis& hyp, const Profile& profile) {
  if (hyp.h.size() != profile.entries.size())
    throw std::invalid_argument("hypothesis does not match profile patterns");
  double total = 0.0;
  for (size_t i = 0; i < hyp.h.size(); ++i) {
    if (profile.entries[i].freq == 0) continue;
    if (hyp.h[i] <= 0.0) return kLogLrFloor;
    total += static_cast<double>(profile.entries[i].freq) * std::log(hyp.h[i]);
  }
  return total;
}

// ln LR = sum f*ln(h) - sum f*ln(f/v); zero exactly when hyp == HP.
inline double log_lr(const Hypothesis& hyp, const Profile& profile) {
  double num = sum_freq_log(hyp, profile);
  if (num == kLogLrFloor) return kLogLrFloor;
  return num - sum_freq_log(hp_of(profile), profile);
}

namespace detail {

// -1, 0, +1: how the pattern ranks `target` against `opponent`.
inline int pattern_preference(const RankingPattern& p, int c, int target,
                              int opponent) {
  auto ranks = p.tier_ranks(c);
  if (ranks[target] < ranks[opponent]) return 1;
  if (ranks[target] > ranks[opponent]) return -1;
  return 0;
}

// Cached per-pattern tier ranks for repeated preference queries.
struct PatternRanks {
  explicit PatternRanks(const Profile& profile) {
    const int c = profile.candidate_count();
    rows.reserve(profile.entries.size());
    for (const auto& e : profile.entries) rows.push_back(e.pattern.tier_ranks(c));
  }
  int pref(size_t pattern, int target, int opponent) const {
    int a = rows[pattern][target], b = rows[pattern][opponent];
    return a < b ? 1 : (a > b ? -1 : 0);
  }
  std::vector<std::vector<int>> rows;
};

}  // namespace detail

// Rescales the hypothesis so the target-opponent race is exactly tied:
// patterns preferring the target shrink to mass (W+L)/2, patterns preferring
// the opponent grow to the same, tie patterns keep their mass.
inline Hypothesis tie_adjust(const Hypothesis& hyp, const Profile& profile,
                             int target, int opponent) {
  if (hyp.h.size() != profile.entries.size())
    throw std::invalid_argument("hypothesis does not match profile patterns");
  const int c = profile.candidate_count();
  double win_mass = 0.0, lose_mass = 0.0;
  std::vector<int> pref(profile.entries.size());
  for (size_t i = 0; i < profile.entries.size(); ++i) {
    pref[i] = detail::pattern_preference(profile.entries[i].pattern, c, target,
                                         opponent);
    if (pref[i] > 0) win_mass += hyp.h[i];
    if (pref[i] < 0) lose_mass += hyp.h[i];
  }
  if (win_mass <= 0.0 || lose_mass <= 0.0)
    throw std::domain_error("tie_adjust requires mass on both sides of the race");
  double win_factor = (win_mass + lose_mass) / (2.0 * win_mass);
  double lose_factor = (win_mass + lose_mass) / (2.0 * lose_mass);
  Hypothesis out = hyp;
  for (size_t i = 0; i < out.h.size(); ++i) {
    if (pref[i] > 0) out.h[i] *= win_factor;
    if (pref[i] < 0) out.h[i] *= lose_factor;
  }
  return out;
}

// Target's signed margin over each opponent in the hypothesized population
// (entry [target] is 0).
inline std::vector<double> margins_under(const Hypothesis& hyp,
                                         const Profile& profile, int target) {
  const int c = profile.candidate_count();
  std::vector<double> margins(c, 0.0);
  detail::PatternRanks ranks(profile);
  for (int y = 0; y < c; ++y) {
    if (y == target) continue;
    double m = 0.0;
    for (size_t i = 0; i < profile.entries.size(); ++i) {
      int p = ranks.pref(i, target, y);
      if (p > 0) m += hyp.h[i];
      if (p < 0) m -= hyp.h[i];
    }
    margins[y] = m;
  }
  return margins;
}

struct CmoStep {
  int opponent = -1;
  double win_mass = 0.0;   // hypothesis mass preferring the target, pre-adjust
  double lose_mass = 0.0;  // mass preferring the opponent
  double tie_mass = 0.0;
};

struct LrOutcome {
  int target = -1;
  double lr = 0.0;
  double log_lr = 0.0;
  bool validated = false;
  bool step_cap_overflow = false;
  std::vector<CmoStep> steps;
  Hypothesis hypothesis;
};

namespace detail {

constexpr double kValidationSlack = 1e-12;

// Most negative margin; ties broken toward the lowest opponent index.
inline int largest_defeat(const std::vector<double>& margins, int target) {
  int worst = -1;
  for (int y = 0; y < static_cast<int>(margins.size()); ++y) {
    if (y == target) continue;
    if (margins[y] < -kValidationSlack && (worst < 0 || margins[y] < margins[worst]))
      worst = y;
  }
  return worst;
}

// One tie-adjust pass against the current largest defeat. Returns false if
// the target already wins or ties everything (validated) or no further
// adjustment is possible.
inline bool advance_one_step(const Profile& profile, int target, LrOutcome& out,
                             std::vector<double>& margins) {
  int opponent = largest_defeat(margins, target);
  if (opponent < 0) {
    out.validated = true;
    return false;
  }
  const int c = profile.candidate_count();
  double win_mass = 0.0, lose_mass = 0.0, tie_mass = 0.0;
  for (size_t i = 0; i < profile.entries.size(); ++i) {
    int p = detail::pattern_preference(profile.entries[i].pattern, c, target,
                                       opponent);
    if (p > 0)
      win_mass += out.hypothesis.h[i];
    else if (p < 0)
      lose_mass += out.hypothesis.h[i];
    else
      tie_mass += out.hypothesis.h[i];
  }
  if (win_mass <= 0.0) {
    // No observed pattern ever prefers the target: the constraint is
    // unsatisfiable over the observed support, LR collapses to 0.
    out.log_lr = kLogLrFloor;
    out.lr = 0.0;
    return false;
  }
  out.hypothesis = tie_adjust(out.hypothesis, profile, target, opponent);
  out.steps.push_back({opponent, win_mass, lose_mass, tie_mass});
  margins = margins_under(out.hypothesis, profile, target);
  out.log_lr = log_lr(out.hypothesis, profile);
  out.lr = std::exp(out.log_lr);
  return true;
}

}  // namespace detail

// Stepwise CMO for one candidate: repeatedly tie away the largest remaining
// defeat until the target wins or ties every race. The step budget is the
// number of original defeats; exceeding it is flagged, never hidden.
inline LrOutcome cmo_by_candidate(const Profile& profile, int target) {
  LrOutcome out;
  out.target = target;
  out.hypothesis = hp_of(profile);
  out.log_lr = 0.0;
  out.lr = 1.0;
  std::vector<double> margins = margins_under(out.hypothesis, profile, target);
  int cap = 0;
  for (int y = 0; y < profile.candidate_count(); ++y)
    if (y != target && margins[y] < -detail::kValidationSlack) ++cap;
  while (true) {
    if (detail::largest_defeat(margins, target) < 0) {
      out.validated = true;
      return out;
    }
    if (static_cast<int>(out.steps.size()) >= cap) {
      out.step_cap_overflow = true;
      return out;
    }
    if (!detail::advance_one_step(profile, target, out, margins)) return out;
  }
}

struct CmoResult {
  ElectionResult result;
  std::vector<LrOutcome> per_candidate;
  bool confirmed = false;
  int step_rounds = 0;  // rounds of one-step extensions before confirmation
  bool anomaly = false; // step-cap overflow or unconfirmable outcome
};

namespace detail {

struct CandidateState {
  LrOutcome out;
  std::vector<double> margins;
  int cap = 0;
  bool exhausted = false;  // validated, floored, or over cap
};

inline void finish_result(CmoResult& r, const Profile& profile) {
  double best = kLogLrFloor;
  for (const auto& o : r.per_candidate)
    if (o.validated && o.log_lr > best) best = o.log_lr;
  ElectionResult& res = r.result;
  res.scores.resize(profile.candidate_count());
  for (int x = 0; x < profile.candidate_count(); ++x)
    res.scores[x] = r.per_candidate[x].log_lr;
  res.score_label = "log likelihood ratio";
  for (int x = 0; x < profile.candidate_count(); ++x) {
    const auto& o = r.per_candidate[x];
    if (o.validated && o.log_lr >= best - kLogLrTolerance)
      res.winners.push_back(x);
  }
}

}  // namespace detail

// Stepwise CMO by step: one adjustment per candidate per round; a winner is
// confirmed once the best validated LR dominates every unvalidated upper
// bound. Unvalidated candidates above that bar get another step.
inline CmoResult cmo_by_step(const Profile& profile) {
  const int c = profile.candidate_count();
  CmoResult r;
  r.result.method = "cmo";
  std::vector<detail::CandidateState> states(c);
  for (int x = 0; x < c; ++x) {
    auto& s = states[x];
    s.out.target = x;
    s.out.hypothesis = hp_of(profile);
    s.out.log_lr = 0.0;
    s.out.lr = 1.0;
    s.margins = margins_under(s.out.hypothesis, profile, x);
    for (int y = 0; y < c; ++y)
      if (y != x && s.margins[y] < -detail::kValidationSlack) ++s.cap;
    if (s.cap == 0) {
      s.out.validated = true;
      s.exhausted = true;
    }
  }
  auto step_candidate = [&](detail::CandidateState& s) {
    if (s.exhausted) return;
    if (static_cast<int>(s.out.steps.size()) >= s.cap) {
      s.out.step_cap_overflow = true;
      s.exhausted = true;
      return;
    }
    if (!detail::advance_one_step(profile, s.out.target, s.out, s.margins))
      s.exhausted = true;
    else if (detail::largest_defeat(s.margins, s.out.target) < 0) {
      s.out.validated = true;
      s.exhausted = true;
    }
  };

  // Round 1: a single step for every candidate with any defeat.
  for (int x = 0; x < c; ++x) step_candidate(states[x]);
  r.step_rounds = 1;

  while (true) {
    double best_validated = kLogLrFloor;
    for (const auto& s : states)
      if (s.out.validated && s.out.log_lr > best_validated)
        best_validated = s.out.log_lr;
    bool pending = false;
    for (auto& s : states) {
      if (s.out.validated || s.out.step_cap_overflow) continue;
      if (s.out.log_lr == kLogLrFloor) continue;
      if (s.out.log_lr > best_validated - kLogLrTolerance) pending = true;
    }
    if (!pending) break;
    bool advanced = false;
    for (auto& s : states) {
      if (s.out.validated || s.exhausted) continue;
      if (s.out.log_lr == kLogLrFloor) continue;
      if (s.out.log_lr > best_validated - kLogLrTolerance) {
        step_candidate(s);
        advanced = true;
      }
    }
    ++r.step_rounds;
    if (!advanced) break;
  }

  for (auto& s : states) r.per_candidate.push_back(std::move(s.out));
  bool overflow = false;
  double best_validated = kLogLrFloor;
  for (const auto& o : r.per_candidate) {
    if (o.step_cap_overflow) overflow = true;
    if (o.validated && o.log_lr > best_validated) best_validated = o.log_lr;
  }
  bool any_unvalidated_above = false;
  for (const auto& o : r.per_candidate)
    if (!o.validated && o.log_lr != kLogLrFloor &&
        o.log_lr > best_validated - kLogLrTolerance)
      any_unvalidated_above = true;
  r.confirmed = best_validated > kLogLrFloor && !any_unvalidated_above;
  r.anomaly = overflow || !r.confirmed;
  detail::finish_result(r, profile);
  if (overflow) r.result.trace.push_back("step cap overflow");
  if (!r.confirmed) r.result.trace.push_back("winner not confirmed");
  return r;
}

// Single-step CMO: one adjustment per candidate, winner by highest step-1 LR
// whether or not it validates.
inline CmoResult cmo_single_step(const Profile& profile) {
  const int c = profile.candidate_count();
  CmoResult r;
  r.result.method = "cmo-single-step";
  r.step_rounds = 1;
  for (int x = 0; x < c; ++x) {
    LrOutcome out;
    out.target = x;
    out.hypothesis = hp_of(profile);
    out.log_lr = 0.0;
    out.lr = 1.0;
    std::vector<double> margins = margins_under(out.hypothesis, profile, x);
    if (detail::largest_defeat(margins, x) < 0)
      out.validated = true;
    else if (detail::advance_one_step(profile, x, out, margins))
      out.validated = detail::largest_defeat(margins, x) < 0;
    r.per_candidate.push_back(std::move(out));
  }
  double best = kLogLrFloor;
  for (const auto& o : r.per_candidate)
    if (o.log_lr > best) best = o.log_lr;
  r.result.scores.resize(c);
  for (int x = 0; x < c; ++x) r.result.scores[x] = r.per_candidate[x].log_lr;
  r.result.score_label = "step-1 log likelihood ratio";
  for (int x = 0; x < c; ++x)
    if (r.per_candidate[x].log_lr >= best - kLogLrTolerance)
      r.result.winners.push_back(x);
  r.confirmed = true;
  return r;
}

// ln of the binomial (sign test) likelihood ratio for a race won W-L.
// Equals the multinomial log LR of the corresponding tie-adjust hypothesis.
inline double binomial_log_lr(long long w, long long l) {
  if (w + l <= 0) throw std::invalid_argument("race has no participants");
  double n = static_cast<double>(w + l);
  double total = (static_cast<double>(w) + static_cast<double>(l)) * std::log(0.5);
  if (w > 0) total -= static_cast<double>(w) * std::log(static_cast<double>(w) / n);
  if (l > 0) total -= static_cast<double>(l) * std::log(static_cast<double>(l) / n);
  return total;
}

}  // namespace electlab
