#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "maniplab/core.hpp"

namespace maniplab::tournaments {

using Team = int;

struct NotPowerOfTwoError : core::Error {
    NotPowerOfTwoError() : core::Error("cup brackets need a power-of-two team count") {}
};

struct MissingProbabilitiesError : core::Error {
    MissingProbabilitiesError() : core::Error("model carries no game probabilities") {}
};

struct BeatsModel {
    int t = 0;
    // beats[i][j] nonzero iff i beats j under honest play; exactly one of
    // beats[i][j], beats[j][i] holds for every pair.
    std::vector<std::vector<char>> beats;
    // Optional: prob[i][j] = P(i beats j honestly), complementary per pair.
    // Empty when the model is purely deterministic.
    std::vector<std::vector<double>> prob;

    bool has_prob() const { return !prob.empty(); }
    Team winner_of(Team i, Team j) const { return beats[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ? i : j; }
};

void require_valid(const BeatsModel& model);

struct Coalition {
    std::set<Team> members;

    bool contains(Team x) const { return members.count(x) != 0; }
};

// Heap-indexed complete binary tree: node 1 is the final, node v's children
// are 2v and 2v+1, and the leaves are nodes t..2t-1 with leaf t+i holding
// leaves[i]. All games in one bracket; no byes.
struct Bracket {
    std::vector<Team> leaves;

    int t() const { return static_cast<int>(leaves.size()); }
    static Bracket seeded(std::vector<Team> leaves);
    static Bracket standard(int t);
};

// In a game between x and y, x can end up the winner iff x wins honestly or y
// is a coalition member (who may throw). Nobody beats a better honest player
// without the opponent's help.

// Achievable subtree winners per heap node (index 0 unused; entry v is the set
// for node v). The target can win the cup iff it appears in the root set.
std::vector<std::set<Team>> cup_possible_winners(const Bracket& bracket, const BeatsModel& model,
                                                 const Coalition& coalition);

bool cup_can_win(const Bracket& bracket, const BeatsModel& model, const Coalition& coalition,
                 Team target);

// Minimum number of thrown games for the target to win the cup, or absent.
std::optional<int> cup_min_throws(const Bracket& bracket, const BeatsModel& model,
                                  const Coalition& coalition, Team target);

enum class ThrowPolicy {
    ThrowToTarget,  // a coalition member loses for sure against the target
    Honest,
};

double cup_win_probability(const Bracket& bracket, const BeatsModel& model,
                           const Coalition& coalition, Team target,
                           ThrowPolicy policy = ThrowPolicy::ThrowToTarget);

// Round robin: every pair plays once, one point per win.
struct GameOutcome {
    Team a = 0;
    Team b = 0;
    Team winner = 0;
};

struct RrWitness {
    // One entry per manipulable game (honest winner in the coalition), in
    // ascending (a, b) order; every other game goes to its honest winner.
    std::vector<GameOutcome> outcomes;
};

// Can the coalition hand the target the round-robin title? The default win
// condition is strictly most points; passing a tie-break policy additionally
// lets the target win ties the policy resolves in its favor. Decided by
// bipartite flow over the games whose outcome is genuinely free.
std::optional<RrWitness> rr_can_win(const BeatsModel& model, const Coalition& coalition,
                                    Team target,
                                    const std::optional<core::TieBreakPolicy>& tie_break =
                                        std::nullopt);

// Minimum thrown games for the target to take the title, or absent.
std::optional<int> rr_min_throws(const BeatsModel& model, const Coalition& coalition, Team target,
                                 const std::optional<core::TieBreakPolicy>& tie_break =
                                     std::nullopt);

// Team file: first meaningful line is `t`; then `i j w` result lines where w
// (an integer, one of i or j) wins the pair, and optional `i j p` probability
// lines where p = P(i beats j) is written with a decimal point. `#` starts a
// comment. Results must cover every pair; probabilities cover every pair or
// none.
BeatsModel read_beats_model(std::string_view text);
std::string write_beats_model(const BeatsModel& model);

}  // namespace maniplab::tournaments
