#include "catch_amalgamated.hpp"

#include <cmath>
#include <set>

#include "electlab/minimax.hpp"
#include "electlab/voter_model.hpp"
#include "oracles.hpp"

using namespace electlab;

namespace {

ModelConfig spatial(int c, long long v, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.candidates = c;
  cfg.voters = v;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("same seed reproduces the electorate bit for bit") {
  ModelConfig cfg = spatial(6, 40, 99);
  cfg.error_sd = 0.7;
  cfg.excellence_weight = 0.5;
  Electorate a = generate(cfg);
  Electorate b = generate(cfg);
  CHECK(a.voter_points == b.voter_points);
  CHECK(a.candidate_points == b.candidate_points);
  CHECK(a.excellence == b.excellence);
  CHECK(a.error == b.error);
  CHECK(a.favorability == b.favorability);

  Electorate c = generate_trial(cfg, 1);
  CHECK(a.favorability != c.favorability);
}

TEST_CASE("uniform-random ratings live on 1..10 with about 10% pair ties") {
  ModelConfig cfg = spatial(10, 75, 5);
  cfg.rating_mode = RatingMode::UniformRandom;
  long long pairs = 0, ties = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Electorate e = generate_trial(cfg, t);
    for (double f : e.favorability) {
      CHECK(f >= 1.0);
      CHECK(f <= 10.0);
      CHECK(f == std::floor(f));
    }
    for (long long i = 0; i < cfg.voters; ++i)
      for (int x = 0; x < cfg.candidates; ++x)
        for (int y = x + 1; y < cfg.candidates; ++y) {
          ++pairs;
          if (e.fav(i, x) == e.fav(i, y)) ++ties;
        }
  }
  double rate = static_cast<double>(ties) / static_cast<double>(pairs);
  CHECK(rate == Catch::Approx(0.10).margin(0.005));
}

TEST_CASE("a single candidate is ranked first on every ballot") {
  Profile p = to_profile(generate(spatial(1, 20, 3)));
  REQUIRE(p.entries.size() == 1);
  CHECK(p.entries[0].pattern.tiers == std::vector<std::vector<int>>{{0}});
  CHECK(p.voters() == 20);
}

TEST_CASE("nine-point rounding merges close favorabilities into tiers") {
  Electorate e;
  e.config = spatial(3, 1, 0);
  e.config.rating_mode = RatingMode::Rounded9;
  e.favorability = {0.3, -1.2, 0.3};
  Profile p = to_profile(e);
  REQUIRE(p.entries.size() == 1);
  CHECK(p.entries[0].pattern.tiers ==
        std::vector<std::vector<int>>{{0, 2}, {1}});
  CHECK(p.entries[0].pattern.unrated.empty());
}

TEST_CASE("continuous ratings give full rankings with full participation") {
  Profile p = to_profile(generate(spatial(8, 50, 7)));
  PairwiseTally t = pairwise_tally(p);
  for (int x = 0; x < 8; ++x)
    for (int y = x + 1; y < 8; ++y) CHECK(t.participants(x, y) == 50);
}

TEST_CASE("participant spread under uniform-random ratings") {
  ModelConfig cfg = spatial(10, 75, 11);
  cfg.rating_mode = RatingMode::UniformRandom;
  double sum_min = 0, sum_max = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    Electorate e = generate_trial(cfg, t);
    PairwiseTally tally = pairwise_tally(to_profile(e));
    long long lo = 75, hi = 0;
    for (int x = 0; x < 10; ++x)
      for (int y = x + 1; y < 10; ++y) {
        lo = std::min(lo, tally.participants(x, y));
        hi = std::max(hi, tally.participants(x, y));
      }
    sum_min += static_cast<double>(lo);
    sum_max += static_cast<double>(hi);
  }
  CHECK(sum_min / trials == Catch::Approx(61.30).margin(1.0));
  CHECK(sum_max / trials == Catch::Approx(72.58).margin(1.0));
}

TEST_CASE("vanishingly small error leaves rankings unchanged") {
  ModelConfig cfg = spatial(6, 40, 21);
  Electorate base = generate(cfg);
  Electorate noisy = add_error(base, 1e-13, 4242);
  CHECK(oracle::same_profile(to_profile(base), to_profile(noisy)));
  CHECK(base.favorability != noisy.favorability);
}

TEST_CASE("added error is seed-deterministic and leaves the input intact") {
  ModelConfig cfg = spatial(5, 30, 22);
  Electorate base = generate(cfg);
  std::vector<double> before = base.favorability;
  Electorate n1 = add_error(base, 1.0, 7);
  Electorate n2 = add_error(base, 1.0, 7);
  Electorate n3 = add_error(base, 1.0, 8);
  CHECK(base.favorability == before);
  CHECK(n1.favorability == n2.favorability);
  CHECK(n1.favorability != n3.favorability);
}

TEST_CASE("added error can create a paradox where none existed") {
  ModelConfig cfg = spatial(5, 75, 23);
  int created = 0;
  for (int t = 0; t < 400; ++t) {
    Electorate base = generate_trial(cfg, t);
    if (!condorcet_winner(pairwise_tally(to_profile(base))).exists()) continue;
    Electorate noisy = add_error(base, 1.0, 1000 + t);
    if (!condorcet_winner(pairwise_tally(to_profile(noisy))).exists()) ++created;
  }
  CHECK(created > 0);
}

TEST_CASE("subsampling the whole electorate permutes the same ballots") {
  ModelConfig cfg = spatial(5, 40, 31);
  Electorate base = generate(cfg);
  Electorate same = subsample(base, 40, 17);
  CHECK(oracle::same_profile(to_profile(base), to_profile(same)));
  CHECK_THROWS_AS(subsample(base, 41, 17), std::invalid_argument);
}

TEST_CASE("subsampling draws the requested rows and is deterministic") {
  ModelConfig cfg = spatial(6, 200, 32);
  Electorate pop = generate(cfg);
  Electorate s1 = subsample(pop, 75, 5);
  Electorate s2 = subsample(pop, 75, 5);
  CHECK(s1.voters() == 75);
  CHECK(s1.candidate_points == pop.candidate_points);
  CHECK(s1.favorability == s2.favorability);
  std::set<std::vector<double>> pop_rows;
  for (long long i = 0; i < pop.voters(); ++i)
    pop_rows.insert({pop.favorability.begin() + i * 6,
                     pop.favorability.begin() + (i + 1) * 6});
  for (long long i = 0; i < s1.voters(); ++i)
    CHECK(pop_rows.count({s1.favorability.begin() + i * 6,
                          s1.favorability.begin() + (i + 1) * 6}) == 1);
}

TEST_CASE("exponentiation maps coordinates through exp and keeps order") {
  ModelConfig cfg = spatial(5, 30, 41);
  Electorate base = generate(cfg);
  Electorate exp_e = exponentiate(base);
  for (size_t i = 0; i < base.voter_points.size(); ++i)
    CHECK(exp_e.voter_points[i] ==
          Catch::Approx(std::exp(base.voter_points[i])).epsilon(1e-15));
  for (size_t i = 0; i < base.candidate_points.size(); ++i) {
    CHECK(exp_e.candidate_points[i] > 0.0);
    for (size_t j = 0; j < base.candidate_points.size(); ++j)
      if (base.candidate_points[i] < base.candidate_points[j])
        CHECK(exp_e.candidate_points[i] < exp_e.candidate_points[j]);
  }
}

TEST_CASE("asymmetric coordinates raise the paradox rate") {
  ModelConfig sym = spatial(4, 75, 51);
  ModelConfig asym = sym;
  asym.transform = SpatialTransform::Exponentiate;
  const long long trials = 60000;
  double sym_rate = paradox_rate(sym, trials);
  double asym_rate = paradox_rate(asym, trials);
  CHECK(asym_rate > sym_rate);
}

TEST_CASE("paradox rate fixtures") {
  ModelConfig cfg = spatial(1, 75, 61);
  CHECK(paradox_rate(cfg, 100) == 0.0);

  // Random strict rankings: ~26% of 5-candidate elections have no winner.
  ModelConfig five = spatial(5, 75, 62);
  five.rating_mode = RatingMode::UniformContinuous;
  CHECK(paradox_rate(five, 6000) == Catch::Approx(0.2595).margin(0.025));
}

TEST_CASE("spatial paradox rate falls as the electorate grows") {
  // Odd electorate sizes: even sizes admit exactly-tied races, and the
  // resulting no-winner deadlocks swamp the spatial-asymmetry effect.
  double r35 = paradox_rate(spatial(4, 35, 71), 120000);
  double r75 = paradox_rate(spatial(4, 75, 72), 120000);
  double r201 = paradox_rate(spatial(4, 201, 73), 120000);
  CHECK(r35 > r75);
  CHECK(r75 > r201);
}

TEST_CASE("pure spatial preference is closer-distance preference") {
  ModelConfig cfg = spatial(6, 30, 81);
  Electorate e = generate(cfg);
  for (long long i = 0; i < e.voters(); ++i)
    for (int x = 0; x < e.candidates(); ++x)
      for (int y = 0; y < e.candidates(); ++y) {
        if (x == y) continue;
        double dx = 0, dy = 0;
        for (int d = 0; d < cfg.dims; ++d) {
          double vx = e.voter_points[i * cfg.dims + d];
          dx += (vx - e.candidate_points[x * cfg.dims + d]) *
                (vx - e.candidate_points[x * cfg.dims + d]);
          dy += (vx - e.candidate_points[y * cfg.dims + d]) *
                (vx - e.candidate_points[y * cfg.dims + d]);
        }
        CHECK((e.fav(i, x) > e.fav(i, y)) == (dx < dy));
      }
}
