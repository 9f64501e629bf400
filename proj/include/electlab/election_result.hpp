#pragma once

#include <string>
#include <vector>

namespace electlab {

// Outcome of one electoral system on one profile. Ties are first-class:
// `winners` holds every candidate sharing the extremal score at the deciding
// stage, and nothing in the library breaks a residual tie arbitrarily.
struct ElectionResult {
  std::string method;
  std::vector<int> winners;          // sorted candidate ids, never empty
  std::vector<double> scores;        // per-candidate display score
  std::string score_label;
  std::vector<std::string> trace;    // tie-break / elimination / notice log

  bool tie() const { return winners.size() > 1; }
  bool unique() const { return winners.size() == 1; }
  int sole_winner() const { return winners.size() == 1 ? winners[0] : -1; }
};

}  // namespace electlab
