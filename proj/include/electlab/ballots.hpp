#pragma once

// Ballot and profile data model: candidates, weak-order ranking patterns,
// frequency profiles, the text ballot format, and the pairwise tally that
// every electoral system in this library computes from.
//
// All tallying is exact integer arithmetic. Patterns are kept normalized
// (tiers best-first, ids ascending within a tier) so that identical ballots
// merge and serialization is deterministic.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace electlab {

struct Candidate {
  int id = 0;          // dense index, 0..c-1, declaration order
  std::string name;    // unique, non-empty
};

// One voter's weak order: ordered tiers (earlier = more preferred) plus the
// set of unrated candidates, which sit below every rated candidate and are
// mutually tied.
struct RankingPattern {
  std::vector<std::vector<int>> tiers;
  std::vector<int> unrated;

  bool operator==(const RankingPattern&) const = default;

  // Tier index per candidate; unrated candidates share one rank below all
  // rated tiers. Lower value = more preferred.
  std::vector<int> tier_ranks(int candidate_count) const {
    std::vector<int> rank(candidate_count, static_cast<int>(tiers.size()));
    for (int t = 0; t < static_cast<int>(tiers.size()); ++t)
      for (int id : tiers[t]) rank[id] = t;
    return rank;
  }

  bool is_strict_full_ranking() const {
    if (!unrated.empty()) return false;
    for (const auto& tier : tiers)
      if (tier.size() != 1) return false;
    return true;
  }
};

struct ProfileEntry {
  RankingPattern pattern;
  long long freq = 0;
};

struct Profile {
  std::vector<Candidate> candidates;
  std::vector<ProfileEntry> entries;  // distinct patterns, first-seen order

  int candidate_count() const { return static_cast<int>(candidates.size()); }

  long long voters() const {
    long long v = 0;
    for (const auto& e : entries) v += e.freq;
    return v;
  }

  int candidate_index(std::string_view name) const {
    for (const auto& c : candidates)
      if (c.name == name) return c.id;
    return -1;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Win counts for every ordered candidate pair. wins(x, y) is the number of
// voters strictly preferring x to y; ties are derived from the voter total.
class PairwiseTally {
 public:
  PairwiseTally(int candidate_count, long long voters)
      : c_(candidate_count), v_(voters), wins_(static_cast<size_t>(c_) * c_, 0) {}

  static PairwiseTally from_wins(int candidate_count, long long voters,
                                 std::vector<long long> wins) {
    PairwiseTally t(candidate_count, voters);
    if (wins.size() != t.wins_.size())
      throw std::invalid_argument("wins matrix size mismatch");
    t.wins_ = std::move(wins);
    return t;
  }

  int candidate_count() const { return c_; }
  long long voters() const { return v_; }

  long long wins(int x, int y) const { return wins_[idx(x, y)]; }
  long long& wins(int x, int y) { return wins_[idx(x, y)]; }
  const std::vector<long long>& raw_wins() const { return wins_; }
  long long ties(int x, int y) const { return v_ - wins(x, y) - wins(y, x); }
  long long margin(int x, int y) const { return wins(x, y) - wins(y, x); }
  long long participants(int x, int y) const { return wins(x, y) + wins(y, x); }

  void add_ballot(const std::vector<int>& tier_rank, long long freq) {
    for (int x = 0; x < c_; ++x)
      for (int y = x + 1; y < c_; ++y) {
        if (tier_rank[x] < tier_rank[y])
          wins_[idx(x, y)] += freq;
        else if (tier_rank[y] < tier_rank[x])
          wins_[idx(y, x)] += freq;
      }
  }

 private:
  size_t idx(int x, int y) const { return static_cast<size_t>(x) * c_ + y; }

  int c_;
  long long v_;
  std::vector<long long> wins_;
};

enum class CondorcetKind { Strong, Weak, None };

struct CondorcetStatus {
  CondorcetKind kind = CondorcetKind::None;
  int winner = -1;  // -1 when None

  bool exists() const { return kind != CondorcetKind::None; }
};

namespace detail {

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

// Groups rated candidates into tiers by equal rating (lower = preferred);
// candidates without a rating land in `unrated`.
inline RankingPattern normalize_ballot(
    const std::vector<std::optional<double>>& ratings) {
  std::vector<std::pair<double, int>> rated;
  RankingPattern p;
  for (int id = 0; id < static_cast<int>(ratings.size()); ++id) {
    if (ratings[id].has_value())
      rated.emplace_back(*ratings[id], id);
    else
      p.unrated.push_back(id);
  }
  std::sort(rated.begin(), rated.end());
  for (size_t i = 0; i < rated.size();) {
    std::vector<int> tier;
    size_t j = i;
    while (j < rated.size() && rated[j].first == rated[i].first)
      tier.push_back(rated[j++].second);
    std::sort(tier.begin(), tier.end());
    p.tiers.push_back(std::move(tier));
    i = j;
  }
  return p;
}

// Builds a profile from per-voter tier ranks (lower = preferred; equal =
// tied). Identical patterns merge; patterns appear in first-seen order.
inline Profile profile_from_tier_ranks(std::vector<Candidate> candidates,
                                       const std::vector<std::vector<int>>& rows) {
  Profile profile;
  profile.candidates = std::move(candidates);
  const int c = profile.candidate_count();
  std::map<std::vector<int>, size_t> seen;  // canonical rank row -> entry index
  for (const auto& row : rows) {
    // Canonicalize tier ranks to 0,1,2,... preserving order.
    std::vector<int> distinct(row);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<int> canon(c);
    for (int i = 0; i < c; ++i)
      canon[i] = static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), row[i]) -
          distinct.begin());
    auto [it, inserted] = seen.emplace(canon, profile.entries.size());
    if (!inserted) {
      profile.entries[it->second].freq += 1;
      continue;
    }
    RankingPattern p;
    int tier_count = static_cast<int>(distinct.size());
    p.tiers.assign(tier_count, {});
    for (int i = 0; i < c; ++i) p.tiers[canon[i]].push_back(i);
    profile.entries.push_back({std::move(p), 1});
  }
  return profile;
}

inline void validate_profile(const Profile& profile) {
  const int c = profile.candidate_count();
  if (c == 0) throw std::invalid_argument("profile has no candidates");
  for (const auto& cand : profile.candidates) {
    if (cand.name.empty()) throw std::invalid_argument("empty candidate name");
    for (const auto& other : profile.candidates)
      if (&cand != &other && cand.name == other.name)
        throw std::invalid_argument("duplicate candidate name: " + cand.name);
  }
  if (profile.entries.empty()) throw std::invalid_argument("empty profile");
  for (const auto& e : profile.entries) {
    if (e.freq <= 0) throw std::invalid_argument("non-positive frequency");
    std::vector<bool> covered(c, false);
    auto mark = [&](int id) {
      if (id < 0 || id >= c) throw std::invalid_argument("candidate id out of range");
      if (covered[id]) throw std::invalid_argument("candidate repeated in pattern");
      covered[id] = true;
    };
    for (const auto& tier : e.pattern.tiers) {
      if (tier.empty()) throw std::invalid_argument("empty tier");
      for (int id : tier) mark(id);
    }
    for (int id : e.pattern.unrated) mark(id);
    for (int id = 0; id < c; ++id)
      if (!covered[id])
        throw std::invalid_argument("pattern does not cover candidate set");
  }
  for (size_t i = 0; i < profile.entries.size(); ++i)
    for (size_t j = i + 1; j < profile.entries.size(); ++j)
      if (profile.entries[i].pattern == profile.entries[j].pattern)
        throw std::invalid_argument("duplicate pattern entries");
}

// Ballot file grammar:
//   # comment
//   candidates: A,B,C,D
//   101: A>B>C>D
//   5: A=B>C            (omitted candidates are unrated)
//   2:                  (all candidates unrated)
inline Profile parse_profile(std::string_view text) {
  Profile profile;
  std::map<std::vector<int>, size_t> seen;  // tier-rank key -> entry index
  bool have_candidates = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view raw = (eol == std::string_view::npos)
                               ? text.substr(pos)
                               : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!have_candidates) {
      constexpr std::string_view kPrefix = "candidates:";
      if (line.rfind(kPrefix, 0) != 0)
        throw ParseError(line_no, "expected 'candidates:' header");
      for (auto& name : detail::split(line.substr(kPrefix.size()), ',')) {
        std::string n = detail::trim(name);
        if (n.empty()) throw ParseError(line_no, "empty candidate name");
        if (n.find_first_of(",>=:#") != std::string::npos)
          throw ParseError(line_no, "invalid character in candidate name: " + n);
        if (profile.candidate_index(n) >= 0)
          throw ParseError(line_no, "duplicate candidate name: " + n);
        profile.candidates.push_back(
            {static_cast<int>(profile.candidates.size()), n});
      }
      if (profile.candidates.empty())
        throw ParseError(line_no, "no candidates declared");
      have_candidates = true;
      continue;
    }
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(line_no, "expected '<frequency>: <ranking>'");
    long long freq = 0;
    try {
      size_t used = 0;
      freq = std::stoll(detail::trim(line.substr(0, colon)), &used);
      if (used != detail::trim(line.substr(0, colon)).size())
        throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(line_no, "invalid frequency");
    }
    if (freq <= 0) throw ParseError(line_no, "non-positive frequency");

    RankingPattern p;
    std::vector<bool> used(profile.candidate_count(), false);
    std::string ranking = detail::trim(line.substr(colon + 1));
    if (!ranking.empty()) {
      for (auto& tier_text : detail::split(ranking, '>')) {
        std::vector<int> tier;
        for (auto& name : detail::split(tier_text, '=')) {
          std::string n = detail::trim(name);
          if (n.empty()) throw ParseError(line_no, "empty name in ranking");
          int id = profile.candidate_index(n);
          if (id < 0) throw ParseError(line_no, "unknown candidate: " + n);
          if (used[id]) throw ParseError(line_no, "candidate repeated: " + n);
          used[id] = true;
          tier.push_back(id);
        }
        std::sort(tier.begin(), tier.end());
        p.tiers.push_back(std::move(tier));
      }
    }
    for (int id = 0; id < profile.candidate_count(); ++id)
      if (!used[id]) p.unrated.push_back(id);

    std::vector<int> key = p.tier_ranks(profile.candidate_count());
    auto [it, inserted] = seen.emplace(std::move(key), profile.entries.size());
    if (inserted)
      profile.entries.push_back({std::move(p), freq});
    else
      profile.entries[it->second].freq += freq;
  }
  if (!have_candidates) throw ParseError(line_no, "expected 'candidates:' header");
  if (profile.entries.empty()) throw ParseError(line_no, "empty profile");
  return profile;
}

// Deterministic inverse of parse_profile: candidates in declaration order,
// entries in first-seen order.
inline std::string serialize_profile(const Profile& profile) {
  std::ostringstream out;
  out << "candidates: ";
  for (int i = 0; i < profile.candidate_count(); ++i) {
    if (i) out << ',';
    out << profile.candidates[i].name;
  }
  out << '\n';
  for (const auto& e : profile.entries) {
    out << e.freq << ": ";
    for (size_t t = 0; t < e.pattern.tiers.size(); ++t) {
      if (t) out << '>';
      for (size_t i = 0; i < e.pattern.tiers[t].size(); ++i) {
        if (i) out << '=';
        out << profile.candidates[e.pattern.tiers[t][i]].name;
      }
    }
    out << '\n';
  }
  return out.str();
}

inline PairwiseTally pairwise_tally(const Profile& profile) {
  PairwiseTally tally(profile.candidate_count(), profile.voters());
  for (const auto& e : profile.entries)
    tally.add_ballot(e.pattern.tier_ranks(profile.candidate_count()), e.freq);
  return tally;
}

// Strong: wins every race. Weak: ties at least one race, loses none, and
// every other candidate loses at least one race. At most one candidate can
// satisfy either, so the result is unambiguous. Operates on a raw c x c win
// matrix so simulation hot loops can reuse it without building a tally.
inline CondorcetStatus condorcet_from_wins(const long long* wins, int c) {
  auto margin = [&](int x, int y) {
    return wins[static_cast<size_t>(x) * c + y] - wins[static_cast<size_t>(y) * c + x];
  };
  std::vector<bool> loses_somewhere(c, false);
  for (int x = 0; x < c; ++x)
    for (int y = 0; y < c; ++y)
      if (x != y && margin(x, y) < 0) {
        loses_somewhere[x] = true;
        break;
      }
  for (int x = 0; x < c; ++x) {
    if (loses_somewhere[x]) continue;
    bool all_wins = true;
    for (int y = 0; y < c; ++y)
      if (y != x && margin(x, y) <= 0) all_wins = false;
    if (all_wins) return {CondorcetKind::Strong, x};
    bool others_lose = true;
    for (int y = 0; y < c; ++y)
      if (y != x && !loses_somewhere[y]) others_lose = false;
    if (others_lose) return {CondorcetKind::Weak, x};
  }
  return {CondorcetKind::None, -1};
}

inline CondorcetStatus condorcet_winner(const PairwiseTally& tally) {
  return condorcet_from_wins(tally.raw_wins().data(), tally.candidate_count());
}

}  // namespace electlab
