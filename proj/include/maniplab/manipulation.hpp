#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "maniplab/core.hpp"
#include "maniplab/rules.hpp"

namespace maniplab::manipulation {

enum class Rule { Stv, Veto };
enum class Goal { Constructive, Destructive };

// How a brute-force coalition enumerates its ballots.
enum class BallotMode { Identical, Distinct };

struct ManipulationQuery {
    // Holds a ranking Profile for STV queries, a VetoProfile for veto queries.
    core::AnyProfile fixed;
    std::vector<core::Weight> coalition;  // positive weights, one per member
    core::Candidate target = 0;
    Goal goal = Goal::Constructive;
    core::TieBreakPolicy policy = core::TieBreakPolicy::lex_min();
};

struct SearchStats {
    std::uint64_t nodes = 0;
    bool decided = false;
    std::chrono::duration<double> elapsed{0.0};
};

enum class Verdict { Found, Impossible, BudgetExhausted };

struct ManipulationOutcome {
    Verdict verdict = Verdict::Impossible;
    // On Found: one entry per coalition member, in query order. Ranking
    // ballots for STV, vetoes for the veto rule; the other vector stays empty.
    std::vector<core::Ballot> ballots;
    std::vector<core::VetoBallot> vetoes;
    SearchStats stats;
};

// Exact constructive STV manipulation for a coalition casting one identical
// ballot (aggregate weight = sum of member weights). Walks the tree of
// reachable elimination states, branching on which surviving candidate the
// coalition's vote supports whenever its current support is eliminated;
// failed alive-sets are memoized. stats.nodes counts decision states
// expanded. node_budget caps that count; exceeding it yields
// Verdict::BudgetExhausted with stats.decided = false.
ManipulationOutcome stv_constructive(const ManipulationQuery& query,
                                     std::optional<std::uint64_t> node_budget = std::nullopt);

// Exhaustive oracle. STV enumerates coalition ranking ballots (identical:
// all m! ballots; distinct: all m!^k tuples, k <= 3). The veto rule always
// enumerates distinct per-member vetoes (m^k, k <= 8) since members need not
// agree. m <= 6 throughout, else TooLargeError. First success in
// lexicographic enumeration order wins.
ManipulationOutcome brute_force_manipulate(Rule rule, const ManipulationQuery& query,
                                           BallotMode mode = BallotMode::Identical);

// Exact weighted-coalition constructive veto manipulation (branch and bound
// over per-candidate veto deficits, coalition weights taken in descending
// order, memoized on (weight index, sorted residual deficits)).
ManipulationOutcome veto_constructive_weighted(const ManipulationQuery& query);

// Polynomial destructive veto manipulation: the whole coalition vetoes the
// target, which is optimal, so a single tally decides.
ManipulationOutcome veto_destructive_weighted(const ManipulationQuery& query);

// The election the fixed voters and the coalition jointly produce; used for
// witness replay (and exposed so tests can replay witnesses themselves).
core::Profile combined_profile(const ManipulationQuery& query,
                               const std::vector<core::Ballot>& ballots);
core::VetoProfile combined_veto_profile(const ManipulationQuery& query,
                                        const std::vector<core::VetoBallot>& vetoes);

}  // namespace maniplab::manipulation
