#include "catch_amalgamated.hpp"

#include "electlab/ballots.hpp"
#include "electlab/sample_elections.hpp"
#include "oracles.hpp"

using namespace electlab;

namespace {

Profile park() { return parse_profile(samples::kParkElection); }

std::optional<double> rated(double r) { return r; }
std::optional<double> unrated() { return std::nullopt; }

}  // namespace

TEST_CASE("park election parses to six merged patterns") {
  Profile p = park();
  CHECK(p.candidate_count() == 4);
  CHECK(p.voters() == 605);
  CHECK(p.entries.size() == 6);
  validate_profile(p);
}

TEST_CASE("smallest valid profile") {
  Profile p = parse_profile("candidates: A,B\n1: A>B\n");
  CHECK(p.voters() == 1);
  CHECK(p.entries.size() == 1);
  CHECK(p.entries[0].pattern.tiers == std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("tie and omission syntax") {
  Profile p = parse_profile("candidates: A,B,C\n5: A=B\n");
  REQUIRE(p.entries.size() == 1);
  CHECK(p.entries[0].pattern.tiers == std::vector<std::vector<int>>{{0, 1}});
  CHECK(p.entries[0].pattern.unrated == std::vector<int>{2});
}

TEST_CASE("identical normalized patterns merge") {
  Profile p = parse_profile("candidates: A,B,C\n2: B=A\n3: A=B\n1: C>A>B\n");
  CHECK(p.entries.size() == 2);
  CHECK(p.entries[0].freq == 5);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_profile("candidates: A,B\n1: A>X\n"), ParseError);
  CHECK_THROWS_AS(parse_profile("candidates: A,B\n1: A>B>A\n"), ParseError);
  CHECK_THROWS_AS(parse_profile("candidates: A,B\n0: A>B\n"), ParseError);
  CHECK_THROWS_AS(parse_profile("candidates: A,B\n-2: A>B\n"), ParseError);
  CHECK_THROWS_AS(parse_profile("candidates: A,B\n"), ParseError);
  CHECK_THROWS_AS(parse_profile(""), ParseError);
  CHECK_THROWS_AS(parse_profile("candidates: A,A\n1: A\n"), ParseError);
  CHECK_THROWS_AS(parse_profile("1: A>B\n"), ParseError);
  try {
    parse_profile("candidates: A,B\n# fine\n1: A>Q\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  Profile p = parse_profile("# header\n\ncandidates: A,B\n# middle\n2: B>A\n\n");
  CHECK(p.voters() == 2);
}

TEST_CASE("normalize_ballot groups by rating") {
  auto p = normalize_ballot({rated(1), rated(2), unrated(), unrated()});
  CHECK(p.tiers == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(p.unrated == std::vector<int>{2, 3});

  auto q = normalize_ballot({rated(3), rated(3), rated(1)});
  CHECK(q.tiers == std::vector<std::vector<int>>{{2}, {0, 1}});
  CHECK(q.unrated.empty());

  auto all = normalize_ballot({unrated(), unrated()});
  CHECK(all.tiers.empty());
  CHECK(all.unrated == std::vector<int>{0, 1});
}

TEST_CASE("all-unrated ballots contribute only ties") {
  Profile p = parse_profile("candidates: A,B\n3:\n2: A>B\n");
  PairwiseTally t = pairwise_tally(p);
  CHECK(t.wins(0, 1) == 2);
  CHECK(t.wins(1, 0) == 0);
  CHECK(t.ties(0, 1) == 3);
}

TEST_CASE("park election pairwise margins") {
  PairwiseTally t = pairwise_tally(park());
  const int A = 0, B = 1, C = 2, D = 3;
  CHECK(t.margin(C, A) == 201);
  CHECK(t.margin(A, B) == 201);
  CHECK(t.margin(B, C) == 203);
  CHECK(t.margin(A, D) == 1);
  CHECK(t.margin(B, D) == 1);
  CHECK(t.margin(C, D) == 1);
  CHECK(t.participants(A, D) == 605);
}

TEST_CASE("three-voter cycle tallies 2:1 everywhere") {
  PairwiseTally t = pairwise_tally(parse_profile(samples::kCycleThree));
  CHECK(t.wins(0, 1) == 2);
  CHECK(t.wins(1, 2) == 2);
  CHECK(t.wins(2, 0) == 2);
  CHECK(t.wins(1, 0) == 1);
  CHECK(condorcet_winner(t).kind == CondorcetKind::None);
}

TEST_CASE("single voter race") {
  PairwiseTally t = pairwise_tally(parse_profile("candidates: A,B\n1: A>B\n"));
  CHECK(t.wins(0, 1) == 1);
  CHECK(t.wins(1, 0) == 0);
  CHECK(t.ties(0, 1) == 0);
}

TEST_CASE("unrated loses to rated, ties unrated") {
  Profile p = parse_profile("candidates: A,B,C\n1: A\n");
  PairwiseTally t = pairwise_tally(p);
  CHECK(t.wins(0, 1) == 1);
  CHECK(t.wins(0, 2) == 1);
  CHECK(t.ties(1, 2) == 1);
}

TEST_CASE("condorcet status on the park election") {
  CHECK(condorcet_winner(pairwise_tally(park())).kind == CondorcetKind::None);

  std::string extra(samples::kParkElection);
  extra += "1: D>C>A>B\n";
  auto status = condorcet_winner(pairwise_tally(parse_profile(extra)));
  CHECK(status.kind == CondorcetKind::Weak);
  CHECK(status.winner == 3);
}

TEST_CASE("majority rule for two candidates") {
  auto status =
      condorcet_winner(pairwise_tally(parse_profile("candidates: A,B\n2: A>B\n1: B>A\n")));
  CHECK(status.kind == CondorcetKind::Strong);
  CHECK(status.winner == 0);
}

TEST_CASE("single candidate is trivially strong") {
  auto status = condorcet_winner(pairwise_tally(parse_profile("candidates: A\n1: A\n")));
  CHECK(status.kind == CondorcetKind::Strong);
  CHECK(status.winner == 0);
}

TEST_CASE("tally invariants on random profiles") {
  SubstreamRng rng(20240501, {1});
  for (int iter = 0; iter < 400; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 5, true);
    PairwiseTally t = pairwise_tally(p);
    const int c = p.candidate_count();
    for (int x = 0; x < c; ++x)
      for (int y = 0; y < c; ++y) {
        if (x == y) continue;
        CHECK(t.wins(x, y) + t.wins(y, x) + t.ties(x, y) == p.voters());
        CHECK(t.margin(x, y) == -t.margin(y, x));
        CHECK(t.wins(x, y) == oracle::brute_wins(p, x, y));
      }
  }
}

TEST_CASE("full ranking implies full participation") {
  SubstreamRng rng(20240501, {2});
  for (int iter = 0; iter < 200; ++iter) {
    Profile p = oracle::random_full_ranking_profile(rng, 4, 6);
    PairwiseTally t = pairwise_tally(p);
    for (int x = 0; x < p.candidate_count(); ++x)
      for (int y = x + 1; y < p.candidate_count(); ++y)
        CHECK(t.participants(x, y) == p.voters());
  }
}

TEST_CASE("serialize then parse is the identity") {
  SubstreamRng rng(20240501, {3});
  for (int iter = 0; iter < 200; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 6, true);
    Profile q = parse_profile(serialize_profile(p));
    REQUIRE(q.entries.size() == p.entries.size());
    for (size_t i = 0; i < p.entries.size(); ++i) {
      CHECK(q.entries[i].pattern == p.entries[i].pattern);
      CHECK(q.entries[i].freq == p.entries[i].freq);
    }
    CHECK(serialize_profile(q) == serialize_profile(p));
  }
}

TEST_CASE("strong winner exists iff some candidate wins all margins") {
  SubstreamRng rng(20240501, {4});
  for (int iter = 0; iter < 500; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 5, true);
    PairwiseTally t = pairwise_tally(p);
    const int c = p.candidate_count();
    bool brute_strong = false;
    int who = -1;
    for (int x = 0; x < c && !brute_strong; ++x) {
      bool all = true;
      for (int y = 0; y < c; ++y)
        if (y != x && t.margin(x, y) <= 0) all = false;
      if (all) {
        brute_strong = true;
        who = x;
      }
    }
    auto status = condorcet_winner(t);
    CHECK((status.kind == CondorcetKind::Strong) == brute_strong);
    if (brute_strong) CHECK(status.winner == who);
  }
}

TEST_CASE("weak winner requires every rival to lose somewhere") {
  SubstreamRng rng(20240501, {5});
  for (int iter = 0; iter < 500; ++iter) {
    Profile p = oracle::random_profile(rng, 4, 5, true);
    PairwiseTally t = pairwise_tally(p);
    auto status = condorcet_winner(t);
    if (status.kind != CondorcetKind::Weak) continue;
    const int c = p.candidate_count();
    bool tied_somewhere = false;
    for (int y = 0; y < c; ++y) {
      if (y == status.winner) continue;
      CHECK(t.margin(status.winner, y) >= 0);
      if (t.margin(status.winner, y) == 0) tied_somewhere = true;
      bool loses = false;
      for (int z = 0; z < c; ++z)
        if (z != y && t.margin(y, z) < 0) loses = true;
      CHECK(loses);
    }
    CHECK(tied_somewhere);
  }
}
