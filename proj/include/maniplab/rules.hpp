#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "maniplab/core.hpp"

namespace maniplab::rules {

struct EmptyProfileError : core::Error {
    EmptyProfileError() : Error("profile has zero total weight") {}
};

struct EmptyCandidateSetError : core::Error {
    EmptyCandidateSetError() : Error("election has zero candidates") {}
};

// One tally snapshot: first-place weight per surviving candidate (ascending
// candidate order) plus the candidate eliminated this round. The deciding
// round, where a candidate holds a strict majority or stands alone, eliminates
// nobody.
struct RoundRecord {
    std::vector<std::pair<core::Candidate, core::Weight>> tallies;
    std::optional<core::Candidate> eliminated;
};

struct StvTrace {
    std::vector<RoundRecord> rounds;
    core::Candidate winner = -1;
};

// Runs the single transferable vote rounds: while no candidate holds a strict
// majority (> half the total weight) of first-place votes, the candidate with
// the fewest first places is eliminated (ties eliminated per policy) and its
// ballots transfer to their highest-ranked survivor.
StvTrace stv_outcome(const core::Profile& profile,
                     const core::TieBreakPolicy& policy = core::TieBreakPolicy::lex_min());

struct VetoTally {
    std::vector<core::Weight> vetoes;  // indexed by candidate
    core::Candidate winner = -1;
};

// Weighted veto counts; the candidate with the fewest vetoes wins, ties broken
// by policy.
VetoTally veto_outcome(const core::VetoProfile& profile,
                       const core::TieBreakPolicy& policy = core::TieBreakPolicy::lex_min());

// Standard embedding of full rankings into the veto rule: each ballot vetoes
// its least-preferred candidate.
core::VetoProfile to_veto_profile(const core::Profile& profile);

}  // namespace maniplab::rules
