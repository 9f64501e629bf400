#pragma once

// Test-only oracles and random-input generators. Everything here is written
// from the definitions, independently of the library's implementation paths,
// so the two can check each other.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "electlab/ballots.hpp"
#include "electlab/rng.hpp"

namespace oracle {

using electlab::Candidate;
using electlab::PairwiseTally;
using electlab::Profile;
using electlab::RankingPattern;
using electlab::SubstreamRng;

inline std::vector<Candidate> letters(int c) {
  std::vector<Candidate> out;
  for (int i = 0; i < c; ++i) out.push_back({i, std::string(1, char('A' + i))});
  return out;
}

// Random weak order over c candidates: random tier assignment, optionally
// with an unrated set.
inline RankingPattern random_pattern(SubstreamRng& rng, int c, bool allow_partial) {
  RankingPattern p;
  std::vector<int> tier_of(c);
  int tiers = 1 + static_cast<int>(rng.next_below(c));
  for (int i = 0; i < c; ++i) {
    int t = static_cast<int>(rng.next_below(tiers));
    if (allow_partial && rng.next_below(5) == 0) t = -1;  // unrated
    tier_of[i] = t;
  }
  for (int t = 0; t < tiers; ++t) {
    std::vector<int> members;
    for (int i = 0; i < c; ++i)
      if (tier_of[i] == t) members.push_back(i);
    if (!members.empty()) p.tiers.push_back(members);
  }
  for (int i = 0; i < c; ++i)
    if (tier_of[i] == -1) p.unrated.push_back(i);
  return p;
}

inline Profile random_profile(SubstreamRng& rng, int max_c, int max_v,
                              bool allow_partial) {
  int c = 1 + static_cast<int>(rng.next_below(max_c));
  long long v = 1 + static_cast<long long>(rng.next_below(max_v));
  std::vector<std::vector<int>> rows;
  for (long long i = 0; i < v; ++i)
    rows.push_back(random_pattern(rng, c, allow_partial).tier_ranks(c));
  return electlab::profile_from_tier_ranks(letters(c), rows);
}

inline Profile random_full_ranking_profile(SubstreamRng& rng, int max_c, int max_v) {
  int c = 1 + static_cast<int>(rng.next_below(max_c));
  long long v = 1 + static_cast<long long>(rng.next_below(max_v));
  std::vector<std::vector<int>> rows;
  for (long long i = 0; i < v; ++i) {
    std::vector<int> order(c);
    std::iota(order.begin(), order.end(), 0);
    for (int k = c - 1; k > 0; --k)
      std::swap(order[k], order[rng.next_below(k + 1)]);
    std::vector<int> rank(c);
    for (int pos = 0; pos < c; ++pos) rank[order[pos]] = pos;
    rows.push_back(rank);
  }
  return electlab::profile_from_tier_ranks(letters(c), rows);
}

// Pairwise wins recomputed entry by entry straight from the definition.
inline long long brute_wins(const Profile& profile, int x, int y) {
  long long w = 0;
  for (const auto& e : profile.entries) {
    auto r = e.pattern.tier_ranks(profile.candidate_count());
    if (r[x] < r[y]) w += e.freq;
  }
  return w;
}

// Widest-path strengths by explicit enumeration of all simple paths.
inline long long brute_widest_path(const PairwiseTally& tally, int from, int to) {
  const int c = tally.candidate_count();
  long long best = 0;
  std::vector<int> path{from};
  std::vector<bool> used(c, false);
  used[from] = true;
  auto dfs = [&](auto&& self, int node, long long width) -> void {
    for (int next = 0; next < c; ++next) {
      if (used[next]) continue;
      long long m = tally.margin(node, next);
      if (m <= 0) continue;
      long long w = std::min(width, m);
      if (next == to)
        best = std::max(best, w);
      else {
        used[next] = true;
        self(self, next, w);
        used[next] = false;
      }
    }
  };
  dfs(dfs, from, std::numeric_limits<long long>::max());
  return best;
}

// Multiset equality of profiles (entry order ignored).
inline bool same_profile(const Profile& a, const Profile& b) {
  if (a.candidate_count() != b.candidate_count()) return false;
  auto key = [](const Profile& p) {
    std::vector<std::pair<std::vector<int>, long long>> k;
    for (const auto& e : p.entries)
      k.emplace_back(e.pattern.tier_ranks(p.candidate_count()), e.freq);
    std::sort(k.begin(), k.end());
    return k;
  };
  return key(a) == key(b);
}

}  // namespace oracle
