#pragma once

// Synthetic electorates: voters and candidates as points in a spatial model,
// favorability = spatial term + weighted excellence + random error, plus a
// uniform-random rating mode for modeling maximal voter carelessness.
//
// Everything downstream of (config, seed, trial index) is reproducible
// bit-for-bit: each (purpose, trial) pair draws from its own counter-based
// substream, so trials can run concurrently in any order.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "electlab/ballots.hpp"
#include "electlab/rng.hpp"

namespace electlab {

// UniformRandom draws integer ratings 1..10 (pair ties ~10%, partial
// ranking); UniformContinuous draws real uniform ratings, i.e. every ballot
// is an independent uniformly random strict ranking.
enum class RatingMode { Continuous, Rounded9, UniformRandom, UniformContinuous };
enum class SpatialTransform { Identity, Exponentiate };
enum class SpatialMetric { NegEuclidean, NegSquaredEuclidean };

struct ModelConfig {
  int candidates = 10;
  long long voters = 75;
  int dims = 2;
  double error_sd = 0.0;
  double excellence_weight = 0.0;
  RatingMode rating_mode = RatingMode::Continuous;
  SpatialTransform transform = SpatialTransform::Identity;
  SpatialMetric metric = SpatialMetric::NegEuclidean;
  std::uint64_t seed = 0;

  void validate() const {
    if (candidates < 1) throw std::invalid_argument("candidates must be >= 1");
    if (voters < 1) throw std::invalid_argument("voters must be >= 1");
    if (dims < 1) throw std::invalid_argument("dims must be >= 1");
    if (error_sd < 0) throw std::invalid_argument("error sd must be >= 0");
    if (excellence_weight < 0)
      throw std::invalid_argument("excellence weight must be >= 0");
  }
};

struct Electorate {
  ModelConfig config;                    // generating parameters, echoed
  std::vector<double> voter_points;      // v x dims, row-major
  std::vector<double> candidate_points;  // c x dims
  std::vector<double> excellence;        // c
  std::vector<double> error;             // v x c; empty means all-zero
  std::vector<double> favorability;      // v x c

  long long voters() const { return config.voters; }
  int candidates() const { return config.candidates; }

  double fav(long long voter, int cand) const {
    return favorability[static_cast<size_t>(voter) * config.candidates + cand];
  }
};

namespace model_detail {

// Substream purposes; part of the documented reproducibility contract.
enum Purpose : std::uint64_t {
  kVoterPoints = 1,
  kCandidatePoints = 2,
  kExcellence = 3,
  kRatingError = 4,
  kUniformRatings = 5,
  kSubsample = 6,
  kAddedError = 7,
  kOpinionMove = 8,
};

inline double spatial_term(const double* vp, const double* cp, int dims,
                           SpatialMetric metric) {
  double d2 = 0.0;
  for (int d = 0; d < dims; ++d) {
    double diff = vp[d] - cp[d];
    d2 += diff * diff;
  }
  return metric == SpatialMetric::NegEuclidean ? -std::sqrt(d2) : -d2;
}

inline void recompute_favorability(Electorate& e) {
  const auto& cfg = e.config;
  const long long v = cfg.voters;
  const int c = cfg.candidates;
  e.favorability.resize(static_cast<size_t>(v) * c);
  for (long long i = 0; i < v; ++i) {
    const double* vp = &e.voter_points[static_cast<size_t>(i) * cfg.dims];
    for (int j = 0; j < c; ++j) {
      double f = spatial_term(vp, &e.candidate_points[static_cast<size_t>(j) * cfg.dims],
                              cfg.dims, cfg.metric);
      if (cfg.excellence_weight != 0.0)
        f += cfg.excellence_weight * e.excellence[j];
      if (!e.error.empty()) f += e.error[static_cast<size_t>(i) * c + j];
      e.favorability[static_cast<size_t>(i) * c + j] = f;
    }
  }
}

// Fills an electorate in place; buffers are reused across trials.
inline void generate_into(Electorate& e, const ModelConfig& config,
                          std::uint64_t trial) {
  config.validate();
  e.config = config;
  const long long v = config.voters;
  const int c = config.candidates;
  if (config.rating_mode == RatingMode::UniformRandom ||
      config.rating_mode == RatingMode::UniformContinuous) {
    // Ratings are pure noise; the spatial layer is not drawn at all.
    e.voter_points.clear();
    e.candidate_points.clear();
    e.excellence.clear();
    e.error.clear();
    e.favorability.resize(static_cast<size_t>(v) * c);
    SubstreamRng ratings(config.seed, {kUniformRatings, trial});
    if (config.rating_mode == RatingMode::UniformRandom)
      for (auto& f : e.favorability)
        f = static_cast<double>(ratings.next_below(10) + 1);
    else
      for (auto& f : e.favorability) f = ratings.next_unit();
    return;
  }
  e.voter_points.resize(static_cast<size_t>(v) * config.dims);
  e.candidate_points.resize(static_cast<size_t>(c) * config.dims);
  e.excellence.assign(c, 0.0);
  e.error.clear();
  SubstreamRng voters(config.seed, {kVoterPoints, trial});
  for (auto& x : e.voter_points) x = voters.next_normal();
  SubstreamRng cands(config.seed, {kCandidatePoints, trial});
  for (auto& x : e.candidate_points) x = cands.next_normal();
  if (config.excellence_weight != 0.0) {
    SubstreamRng exc(config.seed, {kExcellence, trial});
    for (auto& x : e.excellence) x = exc.next_normal();
  }
  if (config.error_sd > 0.0) {
    e.error.resize(static_cast<size_t>(v) * c);
    SubstreamRng err(config.seed, {kRatingError, trial});
    for (auto& x : e.error) x = config.error_sd * err.next_normal();
  }
  if (config.transform == SpatialTransform::Exponentiate) {
    for (auto& x : e.voter_points) x = std::exp(x);
    for (auto& x : e.candidate_points) x = std::exp(x);
  }
  recompute_favorability(e);
}

// Per-voter tier ranks (lower = preferred) from favorability under the
// given rating mode. `rows` is filled v*c row-major.
inline void tier_rank_rows(const Electorate& e, RatingMode mode,
                           std::vector<int>& rows, std::vector<int>& scratch) {
  const long long v = e.voters();
  const int c = e.candidates();
  rows.resize(static_cast<size_t>(v) * c);
  switch (mode) {
    case RatingMode::UniformContinuous:
    case RatingMode::Continuous: {
      scratch.resize(c);
      for (long long i = 0; i < v; ++i) {
        const double* f = &e.favorability[static_cast<size_t>(i) * c];
        int* out = &rows[static_cast<size_t>(i) * c];
        for (int j = 0; j < c; ++j) scratch[j] = j;
        std::sort(scratch.begin(), scratch.end(), [&](int a, int b) {
          if (f[a] != f[b]) return f[a] > f[b];
          return a < b;
        });
        int rank = 0;
        for (int k = 0; k < c; ++k) {
          if (k > 0 && f[scratch[k]] != f[scratch[k - 1]]) rank = k;
          out[scratch[k]] = rank;
        }
      }
      break;
    }
    case RatingMode::Rounded9: {
      double lo = e.favorability[0], hi = e.favorability[0];
      for (double f : e.favorability) {
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
      for (size_t k = 0; k < e.favorability.size(); ++k) {
        long r = hi > lo
                     ? std::lround(1.0 + 8.0 * (e.favorability[k] - lo) / (hi - lo))
                     : 5;
        rows[k] = static_cast<int>(-r);
      }
      break;
    }
    case RatingMode::UniformRandom: {
      for (size_t k = 0; k < e.favorability.size(); ++k)
        rows[k] = -static_cast<int>(e.favorability[k]);
      break;
    }
  }
}

// Spreadsheet-style names: A..Z, AA, AB, ...
inline std::string candidate_name(int index) {
  std::string name;
  int n = index;
  do {
    name.insert(name.begin(), static_cast<char>('A' + n % 26));
    n = n / 26 - 1;
  } while (n >= 0);
  return name;
}

inline std::vector<Candidate> default_candidates(int c) {
  std::vector<Candidate> out;
  out.reserve(c);
  for (int i = 0; i < c; ++i) out.push_back({i, candidate_name(i)});
  return out;
}

}  // namespace model_detail

inline Electorate generate_trial(const ModelConfig& config, std::uint64_t trial) {
  Electorate e;
  model_detail::generate_into(e, config, trial);
  return e;
}

inline Electorate generate(const ModelConfig& config) {
  return generate_trial(config, 0);
}

inline Profile to_profile(const Electorate& e, RatingMode mode) {
  std::vector<int> rows, scratch;
  model_detail::tier_rank_rows(e, mode, rows, scratch);
  const int c = e.candidates();
  std::vector<std::vector<int>> per_voter(e.voters());
  for (long long i = 0; i < e.voters(); ++i)
    per_voter[i].assign(rows.begin() + i * c, rows.begin() + (i + 1) * c);
  return profile_from_tier_ranks(model_detail::default_candidates(c), per_voter);
}

inline Profile to_profile(const Electorate& e) {
  return to_profile(e, e.config.rating_mode);
}

// Fresh electorate with independent Normal(0, sd^2) noise added to every
// favorability entry; the input is untouched.
inline Electorate add_error(const Electorate& e, double sd, std::uint64_t seed) {
  if (sd <= 0.0) throw std::invalid_argument("error sd must be > 0");
  if (e.config.rating_mode == RatingMode::UniformRandom)
    throw std::logic_error("add_error is undefined for uniform-random ratings");
  Electorate out = e;
  const size_t n = e.favorability.size();
  if (out.error.empty()) out.error.assign(n, 0.0);
  SubstreamRng err(seed, {model_detail::kAddedError});
  for (size_t k = 0; k < n; ++k) {
    double eps = sd * err.next_normal();
    out.error[k] += eps;
    out.favorability[k] += eps;
  }
  return out;
}

// Uniform sample of n voter rows without replacement.
inline Electorate subsample(const Electorate& e, long long n, std::uint64_t seed) {
  const long long v = e.voters();
  if (n > v) throw std::invalid_argument("sample larger than electorate");
  if (n < 1) throw std::invalid_argument("sample must be >= 1");
  SubstreamRng rng(seed, {model_detail::kSubsample});
  std::vector<long long> idx(v);
  for (long long i = 0; i < v; ++i) idx[i] = i;
  for (long long i = 0; i < n; ++i)
    std::swap(idx[i], idx[i + static_cast<long long>(
                              rng.next_below(static_cast<std::uint64_t>(v - i)))]);
  Electorate out;
  out.config = e.config;
  out.config.voters = n;
  out.candidate_points = e.candidate_points;
  out.excellence = e.excellence;
  const int c = e.candidates();
  const int dims = e.config.dims;
  if (!e.voter_points.empty())
    out.voter_points.resize(static_cast<size_t>(n) * dims);
  if (!e.error.empty()) out.error.resize(static_cast<size_t>(n) * c);
  out.favorability.resize(static_cast<size_t>(n) * c);
  for (long long i = 0; i < n; ++i) {
    long long src = idx[i];
    if (!e.voter_points.empty())
      std::copy_n(&e.voter_points[static_cast<size_t>(src) * dims], dims,
                  &out.voter_points[static_cast<size_t>(i) * dims]);
    if (!e.error.empty())
      std::copy_n(&e.error[static_cast<size_t>(src) * c], c,
                  &out.error[static_cast<size_t>(i) * c]);
    std::copy_n(&e.favorability[static_cast<size_t>(src) * c], c,
                &out.favorability[static_cast<size_t>(i) * c]);
  }
  return out;
}

// Every coordinate replaced by exp(coordinate); favorability recomputed from
// the new distances (excellence and error terms carried over).
inline Electorate exponentiate(const Electorate& e) {
  if (e.voter_points.empty())
    throw std::logic_error("exponentiate requires a spatial electorate");
  Electorate out = e;
  for (auto& x : out.voter_points) x = std::exp(x);
  for (auto& x : out.candidate_points) x = std::exp(x);
  model_detail::recompute_favorability(out);
  return out;
}

// Fraction of generated profiles with no (strong or weak) Condorcet winner.
inline double paradox_rate(const ModelConfig& config, long long trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int c = config.candidates;
  Electorate e;
  std::vector<int> rows, scratch;
  std::vector<long long> wins(static_cast<size_t>(c) * c);
  long long paradoxes = 0;
  for (long long t = 0; t < trials; ++t) {
    model_detail::generate_into(e, config, static_cast<std::uint64_t>(t));
    model_detail::tier_rank_rows(e, config.rating_mode, rows, scratch);
    std::fill(wins.begin(), wins.end(), 0);
    for (long long i = 0; i < config.voters; ++i) {
      const int* r = &rows[static_cast<size_t>(i) * c];
      for (int x = 0; x < c; ++x)
        for (int y = x + 1; y < c; ++y) {
          if (r[x] < r[y]) ++wins[static_cast<size_t>(x) * c + y];
          else if (r[y] < r[x]) ++wins[static_cast<size_t>(y) * c + x];
        }
    }
    if (!condorcet_from_wins(wins.data(), c).exists()) ++paradoxes;
  }
  return static_cast<double>(paradoxes) / static_cast<double>(trials);
}

}  // namespace electlab
