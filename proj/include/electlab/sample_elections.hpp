#pragma once

// Built-in sample elections used by the docs, the test suite, and the CLI
// `examples` subcommand.

#include <string_view>

namespace electlab::samples {

// The park-location election: a three-way cycle among A, B, C plus a
// compromise candidate D whom half the voters rank first and half last.
// D loses every race, but by a single vote.
inline constexpr std::string_view kParkElection =
    "candidates: A,B,C,D\n"
    "101: A>B>C>D\n"
    "101: D>A>B>C\n"
    "101: B>C>A>D\n"
    "101: D>B>C>A\n"
    "101: C>A>B>D\n"
    "100: D>C>A>B\n";

// 16 voters, 5 patterns; adding two A>B>C>D ballots moves the minimax
// winner from B to C even though both new ballots rank B above C.
inline constexpr std::string_view kParticipationElection =
    "candidates: A,B,C,D\n"
    "2: A>B>D>C\n"
    "6: B>D>C>A\n"
    "5: C>A>B>D\n"
    "1: D>A>B>C\n"
    "2: D>C>A>B\n";

// Two district halves that each elect A, while their union elects C: the
// halves carry opposite cycles that cancel when merged.
inline constexpr std::string_view kConsistencyFirstHalf =
    "candidates: A,B,C,D\n"
    "1: A>B>C>D\n"
    "6: A>D>B>C\n"
    "5: B>C>D>A\n"
    "6: C>D>B>A\n";

inline constexpr std::string_view kConsistencySecondHalf =
    "candidates: A,B,C,D\n"
    "8: A>B>D>C\n"
    "2: A>D>C>B\n"
    "9: C>B>D>A\n"
    "6: D>C>B>A\n";

inline constexpr std::string_view kConsistencyElection =
    "candidates: A,B,C,D\n"
    "1: A>B>C>D\n"
    "6: A>D>B>C\n"
    "5: B>C>D>A\n"
    "6: C>D>B>A\n"
    "8: A>B>D>C\n"
    "2: A>D>C>B\n"
    "9: C>B>D>A\n"
    "6: D>C>B>A\n";

// The smallest possible Condorcet cycle.
inline constexpr std::string_view kCycleThree =
    "candidates: A,B,C\n"
    "1: A>B>C\n"
    "1: B>C>A\n"
    "1: C>A>B\n";

}  // namespace electlab::samples
