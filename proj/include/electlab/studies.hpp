#pragma once

// Simulation studies: generate synthetic electorates, designate a "true"
// winner per study rule, and score electoral systems on how often they find
// it. A tie never counts as a hit.
//
// Trials are numbered; trial g draws only from substreams keyed by
// (seed, g), and results are folded in trial order, so a run is
// byte-reproducible for any thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "electlab/ballots.hpp"
#include "electlab/cmo.hpp"
#include "electlab/election_result.hpp"
#include "electlab/minimax.hpp"
#include "electlab/rivals.hpp"
#include "electlab/voter_model.hpp"

namespace electlab {

enum class System {
  MinimaxClassic,
  MinimaxT1,
  MinimaxT2,
  MinimaxT3,
  MinimaxP,
  MinimaxZ,
  MinimaxZs,
  MinimaxL,
  Ssmd,
  Sssmd,
  Schulze,
  Copeland,
  Borda,
  Black,
  Kemeny,
  Hare,
  Coombs,
  Plurality,
  PluralityRunoff,
  Approval,
  CmoByStep,
  CmoSingleStep,
};

inline std::string_view system_name(System s) {
  switch (s) {
    case System::MinimaxClassic: return "minimax";
    case System::MinimaxT1: return "minimax-t1";
    case System::MinimaxT2: return "minimax-t2";
    case System::MinimaxT3: return "minimax-t3";
    case System::MinimaxP: return "minimax-p";
    case System::MinimaxZ: return "minimax-z";
    case System::MinimaxZs: return "minimax-zs";
    case System::MinimaxL: return "minimax-l";
    case System::Ssmd: return "ssmd";
    case System::Sssmd: return "sssmd";
    case System::Schulze: return "schulze";
    case System::Copeland: return "copeland";
    case System::Borda: return "borda";
    case System::Black: return "black";
    case System::Kemeny: return "kemeny";
    case System::Hare: return "hare";
    case System::Coombs: return "coombs";
    case System::Plurality: return "plurality";
    case System::PluralityRunoff: return "plurality-runoff";
    case System::Approval: return "approval";
    case System::CmoByStep: return "cmo";
    case System::CmoSingleStep: return "cmo-single-step";
  }
  return "?";
}

inline std::optional<System> system_from_name(std::string_view name) {
  static constexpr System all[] = {
      System::MinimaxClassic, System::MinimaxT1, System::MinimaxT2,
      System::MinimaxT3, System::MinimaxP, System::MinimaxZ, System::MinimaxZs,
      System::MinimaxL, System::Ssmd, System::Sssmd, System::Schulze,
      System::Copeland, System::Borda, System::Black, System::Kemeny,
      System::Hare, System::Coombs, System::Plurality, System::PluralityRunoff,
      System::Approval, System::CmoByStep, System::CmoSingleStep};
  for (System s : all)
    if (system_name(s) == name) return s;
  return std::nullopt;
}

inline ElectionResult run_system(System s, const Profile& profile,
                                 const PairwiseTally& tally,
                                 const SearchCaps& caps = {}) {
  switch (s) {
    case System::MinimaxClassic: return minimax_classic(tally);
    case System::MinimaxT1: return minimax_t(tally, TieBreaker::T1);
    case System::MinimaxT2: return minimax_t(tally, TieBreaker::T2);
    case System::MinimaxT3: return minimax_t(tally, TieBreaker::T3);
    case System::MinimaxP: return minimax_p(tally);
    case System::MinimaxZ: return minimax_z(tally);
    case System::MinimaxZs: return minimax_zs(tally);
    case System::MinimaxL: return minimax_l(tally);
    case System::Ssmd: return ssmd(tally);
    case System::Sssmd: return sssmd(tally);
    case System::Schulze: return schulze(tally);
    case System::Copeland: return copeland(tally);
    case System::Borda: return borda(profile);
    case System::Black: return black(profile);
    case System::Kemeny: return kemeny(profile, caps);
    case System::Hare: return hare(profile);
    case System::Coombs: return coombs(profile);
    case System::Plurality: return plurality(profile);
    case System::PluralityRunoff: return plurality_runoff(profile);
    case System::Approval: return approval(profile);
    case System::CmoByStep: return cmo_by_step(profile).result;
    case System::CmoSingleStep: return cmo_single_step(profile).result;
  }
  throw std::logic_error("unknown system");
}

enum class Outcome { Hit = 0, Miss = 1, Tie = 2 };

inline Outcome outcome_of(const ElectionResult& r, int true_winner) {
  if (r.winners.size() != 1) return Outcome::Tie;
  return r.winners[0] == true_winner ? Outcome::Hit : Outcome::Miss;
}

struct StudyConfig {
  ModelConfig model;
  long long qualifying_trials = 5000;
  long long max_generated = 1'000'000'000;
  int threads = 1;
  SearchCaps caps;
  long long population_voters = 200;  // sampling study
  bool all_trials = false;            // centrism: score every trial
  long long hf_target = 0;  // asymmetry: stop after this many HF trials
  int audit_keep = 0;       // keep the first N qualifying trials for audit
};

struct SystemTotals {
  std::string system;
  long long hits = 0, misses = 0, ties = 0;
};

// 3x3 hit/miss/tie cross-table of the baseline system against another.
struct PairTable {
  std::string baseline, other;
  long long cells[3][3] = {};

  long long total() const {
    long long t = 0;
    for (auto& row : cells)
      for (long long x : row) t += x;
    return t;
  }
  // Trials where exactly one of the two systems hit.
  long long hf_trials() const {
    return cells[0][1] + cells[0][2] + cells[1][0] + cells[2][0];
  }
  double baseline_pct_wins() const {
    long long hf = hf_trials();
    if (hf == 0) return 0.0;
    return 100.0 * static_cast<double>(cells[0][1] + cells[0][2]) /
           static_cast<double>(hf);
  }
};

struct AuditRecord {
  long long trial = 0;
  std::string profile_text;
  std::string true_winner;
  std::vector<std::pair<std::string, std::string>> outcomes;  // system, h/m/t
};

struct StudyReport {
  std::string study;
  std::string trial_type;  // "CP" (paradox trials only) or "All"
  std::vector<std::pair<std::string, std::string>> config;
  long long generated_trials = 0;
  long long qualifying_trials = 0;
  std::vector<SystemTotals> totals;
  std::vector<PairTable> pairs;  // totals[0] is the baseline
  std::vector<AuditRecord> audits;
  std::vector<std::string> notices;

  const SystemTotals& totals_for(std::string_view name) const {
    for (const auto& t : totals)
      if (t.system == name) return t;
    throw std::out_of_range("no totals for system: " + std::string(name));
  }
  const PairTable& pair_for(std::string_view other) const {
    for (const auto& p : pairs)
      if (p.other == other) return p;
    throw std::out_of_range("no pair table for system: " + std::string(other));
  }
};

namespace study_detail {

struct Workspace {
  Electorate elec, elec2;
  std::vector<int> rows, rows2, scratch;
  std::vector<long long> wins, wins2;
  std::vector<long long> sample_index;
};

inline void fill_wins(const std::vector<int>& rows, int c, long long v,
                      std::vector<long long>& wins) {
  wins.assign(static_cast<size_t>(c) * c, 0);
  for (long long i = 0; i < v; ++i) {
    const int* r = &rows[static_cast<size_t>(i) * c];
    for (int x = 0; x < c; ++x)
      for (int y = x + 1; y < c; ++y) {
        if (r[x] < r[y])
          ++wins[static_cast<size_t>(x) * c + y];
        else if (r[y] < r[x])
          ++wins[static_cast<size_t>(y) * c + x];
      }
  }
}

inline Profile profile_from_rows(const std::vector<int>& rows, int c, long long v) {
  std::vector<std::vector<int>> per_voter(v);
  for (long long i = 0; i < v; ++i)
    per_voter[i].assign(rows.begin() + i * c, rows.begin() + (i + 1) * c);
  return profile_from_tier_ranks(model_detail::default_candidates(c), per_voter);
}

// Deterministic collector: trial(g, ws) produces a record, sink folds records
// in trial order and says whether to keep going. Returns trials examined.
template <typename Record, typename TrialFn, typename SinkFn>
long long collect(const StudyConfig& cfg, TrialFn&& trial, SinkFn&& sink) {
  long long g = 0;
  if (cfg.threads <= 1) {
    Workspace ws;
    for (; g < cfg.max_generated; ++g)
      if (!sink(trial(g, ws))) return g + 1;
    return g;
  }
  const int threads = cfg.threads;
  const long long block = static_cast<long long>(threads) * 64;
  std::vector<Record> buffer(block);
  while (g < cfg.max_generated) {
    long long upto = std::min(cfg.max_generated, g + block);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t]() {
        Workspace ws;
        for (long long i = g + t; i < upto; i += threads)
          buffer[i - g] = trial(i, ws);
      });
    for (auto& th : pool) th.join();
    for (long long i = g; i < upto; ++i)
      if (!sink(std::move(buffer[i - g]))) return i + 1;
    g = upto;
  }
  return g;
}

struct ScoredTrial {
  bool qualifying = false;
  int true_winner = -1;
  std::vector<Outcome> outcomes;
  std::string profile_text;  // audit mode only
};

inline void append_config(StudyReport& report, const StudyConfig& cfg) {
  auto add = [&](std::string key, std::string value) {
    report.config.emplace_back(std::move(key), std::move(value));
  };
  add("candidates", std::to_string(cfg.model.candidates));
  add("voters", std::to_string(cfg.model.voters));
  add("seed", std::to_string(cfg.model.seed));
  add("error_sd", std::to_string(cfg.model.error_sd));
  add("excellence_weight", std::to_string(cfg.model.excellence_weight));
  switch (cfg.model.rating_mode) {
    case RatingMode::Continuous: add("rating_mode", "continuous"); break;
    case RatingMode::Rounded9: add("rating_mode", "rounded9"); break;
    case RatingMode::UniformRandom: add("rating_mode", "uniform"); break;
    case RatingMode::UniformContinuous: add("rating_mode", "uniform-continuous"); break;
  }
  add("metric", cfg.model.metric == SpatialMetric::NegEuclidean
                    ? "neg-euclidean"
                    : "neg-squared-euclidean");
  add("qualifying_trials", std::to_string(cfg.qualifying_trials));
  add("threads", std::to_string(cfg.threads));
}

// Shared fold for hit/miss/tie studies.
class ScoredAggregator {
 public:
  ScoredAggregator(StudyReport& report, const StudyConfig& cfg,
                   const std::vector<System>& systems)
      : report_(report), cfg_(cfg) {
    for (System s : systems)
      report_.totals.push_back({std::string(system_name(s))});
    for (size_t i = 1; i < systems.size(); ++i) {
      PairTable pt;
      pt.baseline = std::string(system_name(systems[0]));
      pt.other = std::string(system_name(systems[i]));
      report_.pairs.push_back(pt);
    }
  }

  bool fold(ScoredTrial&& rec, long long trial_index) {
    if (!rec.qualifying) return true;
    ++report_.qualifying_trials;
    for (size_t i = 0; i < rec.outcomes.size(); ++i) {
      auto& t = report_.totals[i];
      switch (rec.outcomes[i]) {
        case Outcome::Hit: ++t.hits; break;
        case Outcome::Miss: ++t.misses; break;
        case Outcome::Tie: ++t.ties; break;
      }
    }
    for (size_t i = 1; i < rec.outcomes.size(); ++i)
      ++report_.pairs[i - 1]
            .cells[static_cast<int>(rec.outcomes[0])][static_cast<int>(rec.outcomes[i])];
    if (static_cast<int>(report_.audits.size()) < cfg_.audit_keep) {
      AuditRecord audit;
      audit.trial = trial_index;
      audit.profile_text = rec.profile_text;
      audit.true_winner = model_detail::candidate_name(rec.true_winner);
      for (size_t i = 0; i < rec.outcomes.size(); ++i)
        audit.outcomes.emplace_back(
            report_.totals[i].system,
            rec.outcomes[i] == Outcome::Hit
                ? "hit"
                : (rec.outcomes[i] == Outcome::Miss ? "miss" : "tie"));
      report_.audits.push_back(std::move(audit));
    }
    if (cfg_.hf_target > 0) {
      if (!report_.pairs.empty() &&
          report_.pairs[0].hf_trials() >= cfg_.hf_target)
        return false;
      return true;
    }
    return report_.qualifying_trials < cfg_.qualifying_trials;
  }

 private:
  StudyReport& report_;
  const StudyConfig& cfg_;
};

inline void score_systems(ScoredTrial& rec, const std::vector<System>& systems,
                          const StudyConfig& cfg, const std::vector<int>& rows,
                          int c, long long v, const std::vector<long long>& wins) {
  Profile profile = profile_from_rows(rows, c, v);
  PairwiseTally tally = PairwiseTally::from_wins(c, v, wins);
  rec.outcomes.reserve(systems.size());
  for (System s : systems)
    rec.outcomes.push_back(
        outcome_of(run_system(s, profile, tally, cfg.caps), rec.true_winner));
  if (cfg.audit_keep > 0) rec.profile_text = serialize_profile(profile);
}

template <typename TrialFn>
StudyReport run_scored_study(const StudyConfig& cfg, std::string study,
                             std::string trial_type,
                             const std::vector<System>& systems,
                             TrialFn&& trial) {
  if (systems.empty()) throw std::invalid_argument("no systems given");
  StudyReport report;
  report.study = std::move(study);
  report.trial_type = std::move(trial_type);
  append_config(report, cfg);
  ScoredAggregator agg(report, cfg, systems);
  long long index = 0;
  report.generated_trials = collect<ScoredTrial>(
      cfg, trial,
      [&](ScoredTrial&& rec) { return agg.fold(std::move(rec), index++); });
  bool target_met = cfg.hf_target > 0
                        ? (!report.pairs.empty() &&
                           report.pairs[0].hf_trials() >= cfg.hf_target)
                        : report.qualifying_trials >= cfg.qualifying_trials;
  if (!target_met)
    report.notices.push_back("generation cap reached before trial target");
  return report;
}

}  // namespace study_detail

// Error study: a sample with a Condorcet winner gains i.i.d. rating noise
// (sd = model.error_sd); qualifying trials are those where the noise erases
// the winner. Systems score on the noisy profile against the original winner.
inline StudyReport run_error_study(const StudyConfig& cfg,
                                   const std::vector<System>& systems) {
  ModelConfig base = cfg.model;
  base.error_sd = 0.0;
  double sd = cfg.model.error_sd > 0 ? cfg.model.error_sd : 1.0;
  const int c = base.candidates;
  const long long v = base.voters;
  auto trial = [&, base, sd](long long g,
                             study_detail::Workspace& ws) -> study_detail::ScoredTrial {
    study_detail::ScoredTrial rec;
    model_detail::generate_into(ws.elec, base, g);
    model_detail::tier_rank_rows(ws.elec, base.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    auto status = condorcet_from_wins(ws.wins.data(), c);
    if (!status.exists()) return rec;
    SubstreamRng err(base.seed, {model_detail::kAddedError, static_cast<std::uint64_t>(g)});
    ws.elec2 = ws.elec;
    for (auto& f : ws.elec2.favorability) f += sd * err.next_normal();
    model_detail::tier_rank_rows(ws.elec2, base.rating_mode, ws.rows2, ws.scratch);
    study_detail::fill_wins(ws.rows2, c, v, ws.wins2);
    if (condorcet_from_wins(ws.wins2.data(), c).exists()) return rec;
    rec.qualifying = true;
    rec.true_winner = status.winner;
    study_detail::score_systems(rec, systems, cfg, ws.rows2, c, v, ws.wins2);
    return rec;
  };
  return study_detail::run_scored_study(cfg, "error", "CP", systems, trial);
}

// Sampling study: a 200-voter population with a winner, a smaller sample
// without one; systems score on the sample against the population winner.
inline StudyReport run_sampling_study(const StudyConfig& cfg,
                                      const std::vector<System>& systems) {
  ModelConfig pop_model = cfg.model;
  pop_model.voters = cfg.population_voters;
  pop_model.error_sd = 0.0;
  const int c = pop_model.candidates;
  const long long n = cfg.model.voters;
  if (n > cfg.population_voters)
    throw std::invalid_argument("sample larger than population");
  auto trial = [&, pop_model](long long g, study_detail::Workspace& ws)
      -> study_detail::ScoredTrial {
    study_detail::ScoredTrial rec;
    model_detail::generate_into(ws.elec, pop_model, g);
    model_detail::tier_rank_rows(ws.elec, pop_model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, cfg.population_voters, ws.wins);
    auto status = condorcet_from_wins(ws.wins.data(), c);
    if (!status.exists()) return rec;
    // Draw the sample without replacement.
    SubstreamRng rng(pop_model.seed,
                     {model_detail::kSubsample, static_cast<std::uint64_t>(g)});
    auto& idx = ws.sample_index;
    idx.resize(cfg.population_voters);
    for (long long i = 0; i < cfg.population_voters; ++i) idx[i] = i;
    for (long long i = 0; i < n; ++i)
      std::swap(idx[i], idx[i + static_cast<long long>(rng.next_below(
                                   static_cast<std::uint64_t>(cfg.population_voters - i)))]);
    ws.rows2.resize(static_cast<size_t>(n) * c);
    for (long long i = 0; i < n; ++i)
      std::copy_n(&ws.rows[static_cast<size_t>(idx[i]) * c], c,
                  &ws.rows2[static_cast<size_t>(i) * c]);
    study_detail::fill_wins(ws.rows2, c, n, ws.wins2);
    if (condorcet_from_wins(ws.wins2.data(), c).exists()) return rec;
    rec.qualifying = true;
    rec.true_winner = status.winner;
    study_detail::score_systems(rec, systems, cfg, ws.rows2, c, n, ws.wins2);
    return rec;
  };
  return study_detail::run_scored_study(cfg, "sampling", "CP", systems, trial);
}

// Centrism study: the true winner is the candidate nearest the mean voter
// position, at full floating precision.
inline StudyReport run_centrism_study(const StudyConfig& cfg,
                                      const std::vector<System>& systems) {
  ModelConfig model = cfg.model;
  const int c = model.candidates;
  const long long v = model.voters;
  auto trial = [&, model](long long g,
                          study_detail::Workspace& ws) -> study_detail::ScoredTrial {
    study_detail::ScoredTrial rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    if (!cfg.all_trials && condorcet_from_wins(ws.wins.data(), c).exists())
      return rec;
    std::vector<double> mean(model.dims, 0.0);
    for (long long i = 0; i < v; ++i)
      for (int d = 0; d < model.dims; ++d)
        mean[d] += ws.elec.voter_points[static_cast<size_t>(i) * model.dims + d];
    for (double& m : mean) m /= static_cast<double>(v);
    int best = 0;
    double best_d2 = std::numeric_limits<double>::max();
    for (int j = 0; j < c; ++j) {
      double d2 = 0;
      for (int d = 0; d < model.dims; ++d) {
        double diff = ws.elec.candidate_points[static_cast<size_t>(j) * model.dims + d] -
                      mean[d];
        d2 += diff * diff;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    rec.qualifying = true;
    rec.true_winner = best;
    study_detail::score_systems(rec, systems, cfg, ws.rows, c, v, ws.wins);
    return rec;
  };
  return study_detail::run_scored_study(cfg, "centrism", cfg.all_trials ? "All" : "CP",
                                        systems, trial);
}

// Asymmetry study: symmetric coordinates elect a winner, exponentiated
// (log-normal) coordinates produce a paradox; minimax-T2 and Schulze hunt
// for the symmetric winner on the asymmetric profile.
inline StudyReport run_asymmetry_study(const StudyConfig& cfg) {
  std::vector<System> systems{System::MinimaxT2, System::Schulze};
  ModelConfig model = cfg.model;
  model.error_sd = 0.0;
  model.transform = SpatialTransform::Identity;
  const int c = model.candidates;
  const long long v = model.voters;
  auto trial = [&, model](long long g,
                          study_detail::Workspace& ws) -> study_detail::ScoredTrial {
    study_detail::ScoredTrial rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    auto status = condorcet_from_wins(ws.wins.data(), c);
    if (!status.exists()) return rec;
    ws.elec2 = ws.elec;
    for (auto& x : ws.elec2.voter_points) x = std::exp(x);
    for (auto& x : ws.elec2.candidate_points) x = std::exp(x);
    model_detail::recompute_favorability(ws.elec2);
    model_detail::tier_rank_rows(ws.elec2, model.rating_mode, ws.rows2, ws.scratch);
    study_detail::fill_wins(ws.rows2, c, v, ws.wins2);
    if (condorcet_from_wins(ws.wins2.data(), c).exists()) return rec;
    rec.qualifying = true;
    rec.true_winner = status.winner;
    study_detail::score_systems(rec, systems, cfg, ws.rows2, c, v, ws.wins2);
    return rec;
  };
  return study_detail::run_scored_study(cfg, "asymmetry", "CP", systems, trial);
}

// Opinion-change study: one voter who ranked the Condorcet winner first
// moves that candidate to last; if the move hides the winner behind a
// paradox, minimax-T2 and Schulze try to recover it.
inline StudyReport run_opinion_change_study(const StudyConfig& cfg) {
  std::vector<System> systems{System::MinimaxT2, System::Schulze};
  ModelConfig model = cfg.model;
  if (model.rating_mode != RatingMode::Continuous &&
      model.rating_mode != RatingMode::UniformContinuous)
    throw std::invalid_argument(
        "opinion-change study requires strict full rankings");
  const int c = model.candidates;
  const long long v = model.voters;
  auto trial = [&, model](long long g,
                          study_detail::Workspace& ws) -> study_detail::ScoredTrial {
    study_detail::ScoredTrial rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    auto status = condorcet_from_wins(ws.wins.data(), c);
    if (!status.exists()) return rec;
    const int w = status.winner;
    // A supporter ranks the winner strictly first (no shared top tier).
    auto is_supporter = [&](long long i) {
      const int* r = &ws.rows[static_cast<size_t>(i) * c];
      if (r[w] != 0) return false;
      for (int y = 0; y < c; ++y)
        if (y != w && r[y] == 0) return false;
      return true;
    };
    long long supporters = 0;
    for (long long i = 0; i < v; ++i)
      if (is_supporter(i)) ++supporters;
    if (supporters == 0) return rec;
    SubstreamRng rng(model.seed,
                     {model_detail::kOpinionMove, static_cast<std::uint64_t>(g)});
    long long pick = static_cast<long long>(
        rng.next_below(static_cast<std::uint64_t>(supporters)));
    long long voter = -1;
    for (long long i = 0; i < v; ++i)
      if (is_supporter(i) && pick-- == 0) {
        voter = i;
        break;
      }
    ws.rows2 = ws.rows;
    ws.rows2[static_cast<size_t>(voter) * c + w] = c;  // below everyone
    ws.wins2 = ws.wins;
    for (int y = 0; y < c; ++y) {
      if (y == w) continue;
      --ws.wins2[static_cast<size_t>(w) * c + y];
      ++ws.wins2[static_cast<size_t>(y) * c + w];
    }
    if (condorcet_from_wins(ws.wins2.data(), c).exists()) return rec;
    rec.qualifying = true;
    rec.true_winner = w;
    study_detail::score_systems(rec, systems, cfg, ws.rows2, c, v, ws.wins2);
    return rec;
  };
  return study_detail::run_scored_study(cfg, "opinion-change", "CP", systems, trial);
}

// Attractiveness study: excellence contributes to favorability and the true
// winner is the candidate with the highest mean rating. All trials count.
inline StudyReport run_attractiveness_study(const StudyConfig& cfg,
                                            std::vector<System> systems) {
  ModelConfig model = cfg.model;
  const int c = model.candidates;
  const long long v = model.voters;
  std::vector<std::string> notices;
  if (c > cfg.caps.kemeny_max_candidates) {
    auto it = std::find(systems.begin(), systems.end(), System::Kemeny);
    if (it != systems.end()) {
      systems.erase(it);
      notices.push_back("kemeny skipped: candidate count exceeds its cap");
    }
  }
  auto trial = [&, model](long long g,
                          study_detail::Workspace& ws) -> study_detail::ScoredTrial {
    study_detail::ScoredTrial rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    int best = 0;
    double best_mean = -std::numeric_limits<double>::max();
    for (int j = 0; j < c; ++j) {
      double m = 0;
      for (long long i = 0; i < v; ++i)
        m += ws.elec.favorability[static_cast<size_t>(i) * c + j];
      if (m > best_mean) {
        best_mean = m;
        best = j;
      }
    }
    rec.qualifying = true;
    rec.true_winner = best;
    study_detail::score_systems(rec, systems, cfg, ws.rows, c, v, ws.wins);
    return rec;
  };
  StudyReport report =
      study_detail::run_scored_study(cfg, "attractiveness", "All", systems, trial);
  for (auto& n : notices) report.notices.push_back(std::move(n));
  return report;
}

struct TieRateReport {
  std::string method;
  std::vector<std::pair<std::string, std::string>> config;
  long long generated_trials = 0;
  long long paradox_trials = 0;
  long long tied_trials = 0;

  double tie_rate() const {
    return paradox_trials == 0
               ? 0.0
               : static_cast<double>(tied_trials) / static_cast<double>(paradox_trials);
  }
};

// Share of paradox trials on which the method returns more than one winner.
inline TieRateReport run_tie_rate_study(const StudyConfig& cfg, System method) {
  TieRateReport report;
  report.method = std::string(system_name(method));
  {
    StudyReport scratch;
    study_detail::append_config(scratch, cfg);
    report.config = std::move(scratch.config);
  }
  ModelConfig model = cfg.model;
  const int c = model.candidates;
  const long long v = model.voters;
  struct Rec {
    bool paradox = false;
    bool tied = false;
  };
  auto trial = [&, model](long long g, study_detail::Workspace& ws) -> Rec {
    Rec rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    if (condorcet_from_wins(ws.wins.data(), c).exists()) return rec;
    rec.paradox = true;
    Profile profile = study_detail::profile_from_rows(ws.rows, c, v);
    PairwiseTally tally = PairwiseTally::from_wins(c, v, ws.wins);
    rec.tied = run_system(method, profile, tally, cfg.caps).winners.size() > 1;
    return rec;
  };
  report.generated_trials = study_detail::collect<Rec>(cfg, trial, [&](Rec&& rec) {
    if (!rec.paradox) return true;
    ++report.paradox_trials;
    if (rec.tied) ++report.tied_trials;
    return report.paradox_trials < cfg.qualifying_trials;
  });
  return report;
}

struct AgreementReport {
  std::vector<std::string> methods;
  std::vector<std::pair<std::string, std::string>> config;
  long long generated_trials = 0;
  long long qualifying_trials = 0;  // tie-free paradox trials
  std::vector<std::vector<long long>> agree;  // [i][j] same unique winner
  std::vector<AuditRecord> disagreements;     // capped

  double agreement_rate(size_t i, size_t j) const {
    return qualifying_trials == 0
               ? 1.0
               : static_cast<double>(agree[i][j]) /
                     static_cast<double>(qualifying_trials);
  }
};

// Pairwise winner agreement on paradox trials where every method returns a
// unique winner; every disagreeing profile is kept for audit (up to a cap).
inline AgreementReport compare_agreement(const StudyConfig& cfg,
                                         const std::vector<System>& methods) {
  AgreementReport report;
  for (System m : methods) report.methods.emplace_back(system_name(m));
  {
    StudyReport scratch;
    study_detail::append_config(scratch, cfg);
    report.config = std::move(scratch.config);
  }
  report.agree.assign(methods.size(), std::vector<long long>(methods.size(), 0));
  ModelConfig model = cfg.model;
  const int c = model.candidates;
  const long long v = model.voters;
  struct Rec {
    bool qualifying = false;
    std::vector<int> winners;
    std::string profile_text;
  };
  auto trial = [&, model](long long g, study_detail::Workspace& ws) -> Rec {
    Rec rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    if (condorcet_from_wins(ws.wins.data(), c).exists()) return rec;
    Profile profile = study_detail::profile_from_rows(ws.rows, c, v);
    PairwiseTally tally = PairwiseTally::from_wins(c, v, ws.wins);
    rec.winners.reserve(methods.size());
    bool all_unique = true;
    std::vector<ElectionResult> results;
    for (System m : methods) {
      auto r = run_system(m, profile, tally, cfg.caps);
      if (r.winners.size() != 1) all_unique = false;
      rec.winners.push_back(r.winners.size() == 1 ? r.winners[0] : -1);
    }
    if (!all_unique) return rec;
    rec.qualifying = true;
    bool any_disagree = false;
    for (size_t i = 0; i < rec.winners.size(); ++i)
      for (size_t j = i + 1; j < rec.winners.size(); ++j)
        if (rec.winners[i] != rec.winners[j]) any_disagree = true;
    if (any_disagree) rec.profile_text = serialize_profile(profile);
    return rec;
  };
  long long index = 0;
  report.generated_trials = study_detail::collect<Rec>(cfg, trial, [&](Rec&& rec) {
    ++index;
    if (!rec.qualifying) return true;
    ++report.qualifying_trials;
    for (size_t i = 0; i < rec.winners.size(); ++i)
      for (size_t j = 0; j < rec.winners.size(); ++j)
        if (rec.winners[i] == rec.winners[j]) ++report.agree[i][j];
    if (!rec.profile_text.empty() && report.disagreements.size() < 100) {
      AuditRecord audit;
      audit.trial = index - 1;
      audit.profile_text = std::move(rec.profile_text);
      for (size_t i = 0; i < rec.winners.size(); ++i)
        audit.outcomes.emplace_back(report.methods[i],
                                    model_detail::candidate_name(rec.winners[i]));
      report.disagreements.push_back(std::move(audit));
    }
    return report.qualifying_trials < cfg.qualifying_trials;
  });
  return report;
}

struct SingleStepReport {
  std::vector<std::pair<std::string, std::string>> config;
  long long generated_trials = 0;
  long long paradox_trials = 0;
  long long confirmed_at_first_step = 0;  // among paradox trials
  long long both_defined = 0;             // single-step unique, full confirmed
  long long winners_agree = 0;
  bool anomaly = false;

  // Non-paradox trials confirm trivially, so the all-trials rate counts
  // only paradox-trial failures against everything generated.
  double confirmation_rate_all_trials() const {
    if (generated_trials == 0) return 1.0;
    return 1.0 - static_cast<double>(paradox_trials - confirmed_at_first_step) /
                     static_cast<double>(generated_trials);
  }
  double confirmation_rate_paradox_trials() const {
    return paradox_trials == 0
               ? 1.0
               : static_cast<double>(confirmed_at_first_step) /
                     static_cast<double>(paradox_trials);
  }
};

// How often one adjustment step per candidate already confirms the full
// stepwise winner, and whether the single-step winner matches it.
inline SingleStepReport run_single_step_check(const StudyConfig& cfg) {
  SingleStepReport report;
  {
    StudyReport scratch;
    study_detail::append_config(scratch, cfg);
    report.config = std::move(scratch.config);
  }
  ModelConfig model = cfg.model;
  const int c = model.candidates;
  const long long v = model.voters;
  struct Rec {
    bool paradox = false;
    bool confirmed_first = false;
    bool both_defined = false;
    bool agree = false;
    bool anomaly = false;
  };
  auto trial = [&, model](long long g, study_detail::Workspace& ws) -> Rec {
    Rec rec;
    model_detail::generate_into(ws.elec, model, g);
    model_detail::tier_rank_rows(ws.elec, model.rating_mode, ws.rows, ws.scratch);
    study_detail::fill_wins(ws.rows, c, v, ws.wins);
    if (condorcet_from_wins(ws.wins.data(), c).exists()) return rec;
    rec.paradox = true;
    Profile profile = study_detail::profile_from_rows(ws.rows, c, v);
    CmoResult full = cmo_by_step(profile);
    CmoResult single = cmo_single_step(profile);
    rec.confirmed_first = full.confirmed && full.step_rounds == 1;
    rec.anomaly = full.anomaly;
    if (full.confirmed && single.result.winners.size() == 1 &&
        full.result.winners.size() == 1) {
      rec.both_defined = true;
      rec.agree = single.result.winners == full.result.winners;
    }
    return rec;
  };
  report.generated_trials = study_detail::collect<Rec>(cfg, trial, [&](Rec&& rec) {
    if (rec.anomaly) report.anomaly = true;
    if (!rec.paradox) return true;
    ++report.paradox_trials;
    if (rec.confirmed_first) ++report.confirmed_at_first_step;
    if (rec.both_defined) {
      ++report.both_defined;
      if (rec.agree) ++report.winners_agree;
    }
    return report.paradox_trials < cfg.qualifying_trials;
  });
  return report;
}

}  // namespace electlab
