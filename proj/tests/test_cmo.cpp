#include "catch_amalgamated.hpp"

#include <cmath>

#include "electlab/cmo.hpp"
#include "electlab/sample_elections.hpp"
#include "oracles.hpp"

using namespace electlab;

namespace {

Profile park() { return parse_profile(samples::kParkElection); }

// Random target/opponent with mass on both sides; nullopt if none exists.
struct RacePick {
  int target, opponent;
};
std::optional<RacePick> pick_adjustable_race(oracle::SubstreamRng& rng,
                                             const Profile& p) {
  PairwiseTally t = pairwise_tally(p);
  std::vector<RacePick> options;
  for (int x = 0; x < p.candidate_count(); ++x)
    for (int y = 0; y < p.candidate_count(); ++y)
      if (x != y && t.wins(x, y) > 0 && t.wins(y, x) > 0)
        options.push_back({x, y});
  if (options.empty()) return std::nullopt;
  return options[rng.next_below(options.size())];
}

}  // namespace

TEST_CASE("observed proportions") {
  auto hp = hp_of(park());
  std::vector<double> expected{101.0 / 605, 101.0 / 605, 101.0 / 605,
                               101.0 / 605, 101.0 / 605, 100.0 / 605};
  REQUIRE(hp.h.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i)
    CHECK(hp.h[i] == Catch::Approx(expected[i]).epsilon(1e-15));

  auto single = hp_of(parse_profile("candidates: A,B\n4: A>B\n"));
  CHECK(single.h == std::vector<double>{1.0});

  auto uniform = hp_of(parse_profile("candidates: A,B\n2: A>B\n2: B>A\n"));
  CHECK(uniform.h == std::vector<double>{0.5, 0.5});
}

TEST_CASE("log LR of the observed proportions is zero") {
  oracle::SubstreamRng rng(11, {1});
  for (int iter = 0; iter < 100; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 20, true);
    CHECK(std::abs(log_lr(hp_of(p), p)) < 1e-9);
  }
}

TEST_CASE("zero mass on an observed pattern floors the log LR") {
  Profile p = parse_profile("candidates: A,B\n2: A>B\n1: B>A\n");
  Hypothesis h{{1.0, 0.0}};
  CHECK(log_lr(h, p) == kLogLrFloor);
}

TEST_CASE("park election: the A-C adjustment reproduces the likelihood sums") {
  Profile p = park();
  const int A = 0, C = 2;
  CHECK(sum_freq_log(hp_of(p), p) == Catch::Approx(-1084.0103).margin(0.001));

  Hypothesis ht = tie_adjust(hp_of(p), p, A, C);
  // Patterns 1-2 put A over C and shrink to 101/404; the rest grow to x/806.
  std::vector<double> expected{101.0 / 404, 101.0 / 404, 101.0 / 806,
                               101.0 / 806, 101.0 / 806, 100.0 / 806};
  for (size_t i = 0; i < expected.size(); ++i)
    CHECK(ht.h[i] == Catch::Approx(expected[i]).epsilon(1e-12));
  CHECK(sum_freq_log(ht, p) == Catch::Approx(-1118.0427).margin(0.001));
  CHECK(std::exp(log_lr(ht, p)) == Catch::Approx(1.6594e-15).epsilon(0.01));
}

TEST_CASE("tie_adjust is the identity when the race is already tied") {
  Profile p = parse_profile("candidates: A,B,C\n2: A>B>C\n2: B>A>C\n1: C>A=B\n");
  Hypothesis hp = hp_of(p);
  Hypothesis ht = tie_adjust(hp, p, 0, 1);
  for (size_t i = 0; i < hp.h.size(); ++i)
    CHECK(ht.h[i] == Catch::Approx(hp.h[i]).epsilon(1e-15));
}

TEST_CASE("tie_adjust requires mass on both sides") {
  Profile p = parse_profile("candidates: A,B\n3: A>B\n");
  CHECK_THROWS_AS(tie_adjust(hp_of(p), p, 1, 0), std::domain_error);
}

TEST_CASE("park election: one adjustment ties all three of D's races") {
  Profile p = park();
  const int D = 3;
  Hypothesis ht = tie_adjust(hp_of(p), p, D, 0);
  auto margins = margins_under(ht, p, D);
  for (int y = 0; y < 3; ++y) CHECK(std::abs(margins[y]) < 1e-12);
}

TEST_CASE("margins under the observed proportions scale the raw margins") {
  Profile p = park();
  PairwiseTally t = pairwise_tally(p);
  auto margins = margins_under(hp_of(p), p, 0);
  for (int y = 1; y < 4; ++y)
    CHECK(margins[y] ==
          Catch::Approx(static_cast<double>(t.margin(0, y)) / 605.0).margin(1e-12));
}

TEST_CASE("adjusted race margin is zero") {
  oracle::SubstreamRng rng(11, {2});
  int found = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 30, true);
    auto pick = pick_adjustable_race(rng, p);
    if (!pick) continue;
    ++found;
    Hypothesis ht = tie_adjust(hp_of(p), p, pick->target, pick->opponent);
    auto margins = margins_under(ht, p, pick->target);
    CHECK(std::abs(margins[pick->opponent]) < 1e-12);
    double total = 0;
    for (double h : ht.h) total += h;
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
  }
  CHECK(found > 100);
}

TEST_CASE("stepwise outcomes on the park election") {
  Profile p = park();
  auto a = cmo_by_candidate(p, 0);
  CHECK(a.validated);
  CHECK(a.steps.size() == 1);
  CHECK(a.lr == Catch::Approx(1.6594e-15).epsilon(0.01));

  auto d = cmo_by_candidate(p, 3);
  CHECK(d.validated);
  CHECK(d.lr == Catch::Approx(0.9992).margin(0.0005));

  auto b = cmo_by_candidate(p, 1);
  auto c = cmo_by_candidate(p, 2);
  CHECK(b.lr < 1e-12);
  CHECK(c.lr < 1e-12);
}

TEST_CASE("a strong condorcet winner validates with no steps") {
  Profile p = parse_profile("candidates: A,B,C\n3: A>B>C\n1: B>C>A\n");
  auto out = cmo_by_candidate(p, 0);
  CHECK(out.validated);
  CHECK(out.steps.empty());
  CHECK(out.lr == 1.0);
}

TEST_CASE("cmo by step confirms D on the park election") {
  auto r = cmo_by_step(park());
  CHECK(r.confirmed);
  CHECK(!r.anomaly);
  CHECK(r.result.winners == std::vector<int>{3});
  CHECK(std::exp(r.per_candidate[3].log_lr) == Catch::Approx(0.9992).margin(0.0005));
  for (int x = 0; x < 3; ++x) CHECK(r.per_candidate[x].lr < 1e-12);
}

TEST_CASE("cmo by step with a strong winner present") {
  auto r = cmo_by_step(parse_profile("candidates: A,B,C\n3: A>B>C\n1: B>C>A\n"));
  CHECK(r.confirmed);
  CHECK(r.result.winners == std::vector<int>{0});
  CHECK(r.per_candidate[0].lr == 1.0);
}

TEST_CASE("single-step cmo picks D on the park election") {
  auto r = cmo_single_step(park());
  CHECK(r.result.winners == std::vector<int>{3});

  auto strong = cmo_single_step(parse_profile("candidates: A,B,C\n3: A>B>C\n1: B>C>A\n"));
  CHECK(strong.result.winners == std::vector<int>{0});
  CHECK(strong.per_candidate[0].lr == 1.0);
}

TEST_CASE("binomial log LR fixture values") {
  CHECK(binomial_log_lr(7, 7) == 0.0);
  CHECK(std::exp(binomial_log_lr(302, 303)) == Catch::Approx(0.99917).margin(5e-5));
  CHECK(std::exp(binomial_log_lr(202, 403)) == Catch::Approx(1.6594e-15).epsilon(0.01));
  CHECK(binomial_log_lr(5, 0) == Catch::Approx(5 * std::log(0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(binomial_log_lr(0, 0), std::invalid_argument);
}

TEST_CASE("binomial LR equals the multinomial LR of the adjusted hypothesis") {
  oracle::SubstreamRng rng(11, {3});
  int checked = 0;
  while (checked < 1000) {
    Profile p = oracle::random_profile(rng, 5, 50, true);
    auto pick = pick_adjustable_race(rng, p);
    if (!pick) continue;
    ++checked;
    PairwiseTally t = pairwise_tally(p);
    double binom = binomial_log_lr(t.wins(pick->target, pick->opponent),
                                   t.wins(pick->opponent, pick->target));
    double multi = log_lr(tie_adjust(hp_of(p), p, pick->target, pick->opponent), p);
    CHECK(std::abs(binom - multi) <= 1e-10 * (1.0 + std::abs(multi)));
  }
}

TEST_CASE("tie-adjusted hypotheses are local maxima within groups") {
  oracle::SubstreamRng rng(11, {4});
  int cases = 0;
  while (cases < 200) {
    Profile p = oracle::random_profile(rng, 4, 30, true);
    auto pick = pick_adjustable_race(rng, p);
    if (!pick || p.entries.size() < 2) continue;
    ++cases;
    Hypothesis ht = tie_adjust(hp_of(p), p, pick->target, pick->opponent);
    double base = log_lr(ht, p);
    const int c = p.candidate_count();
    // Group id per pattern: -1 lose, 0 tie, +1 win.
    std::vector<int> group(p.entries.size());
    for (size_t i = 0; i < p.entries.size(); ++i)
      group[i] = detail::pattern_preference(p.entries[i].pattern, c,
                                            pick->target, pick->opponent);
    for (double eps : {1e-3, 1e-2}) {
      for (size_t i = 0; i < p.entries.size(); ++i)
        for (size_t j = 0; j < p.entries.size(); ++j) {
          if (i == j || group[i] != group[j]) continue;
          if (ht.h[j] <= eps) continue;  // keep the perturbed vector valid
          Hypothesis perturbed = ht;
          perturbed.h[i] += eps;
          perturbed.h[j] -= eps;
          CHECK(log_lr(perturbed, p) <= base + 1e-12);
        }
    }
  }
}

TEST_CASE("each stepwise adjustment lowers the log LR") {
  oracle::SubstreamRng rng(11, {5});
  int multi_step = 0;
  for (int iter = 0; iter < 4000 && multi_step < 25; ++iter) {
    Profile p = oracle::random_profile(rng, 5, 40, true);
    for (int x = 0; x < p.candidate_count(); ++x) {
      auto out = cmo_by_candidate(p, x);
      if (out.steps.size() < 2 || !out.validated) continue;
      ++multi_step;
      // Replay the steps and record the log LR after each.
      Hypothesis h = hp_of(p);
      double prev = 0.0;
      for (const auto& step : out.steps) {
        h = tie_adjust(h, p, x, step.opponent);
        double cur = log_lr(h, p);
        CHECK(cur <= prev + 1e-9);
        prev = cur;
      }
    }
  }
  CHECK(multi_step >= 25);
}

TEST_CASE("LR stays within [0, 1]; 1 exactly when no defeats exist") {
  oracle::SubstreamRng rng(11, {6});
  for (int iter = 0; iter < 300; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 12, true);
    PairwiseTally t = pairwise_tally(p);
    for (int x = 0; x < p.candidate_count(); ++x) {
      auto out = cmo_by_candidate(p, x);
      CHECK(out.lr >= 0.0);
      CHECK(out.lr <= 1.0 + 1e-12);
      bool no_defeat = true;
      for (int y = 0; y < p.candidate_count(); ++y)
        if (y != x && t.margin(x, y) < 0) no_defeat = false;
      if (no_defeat) {
        CHECK(out.lr == 1.0);
        CHECK(out.steps.empty());
      } else {
        CHECK(out.lr < 1.0);
      }
    }
  }
}
