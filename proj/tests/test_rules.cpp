#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <vector>

#include "maniplab/core.hpp"
#include "maniplab/rng.hpp"
#include "maniplab/rules.hpp"

using namespace maniplab;
using core::Ballot;
using core::Candidate;
using core::Profile;
using core::TieBreakPolicy;
using core::Weight;

namespace {

// Reference implementation written the dumb way: expand to unit ballots and
// physically delete eliminated candidates from every ranking each round.
Candidate naive_stv_winner(const Profile& profile, const TieBreakPolicy& policy) {
    std::vector<std::vector<Candidate>> ballots;
    for (const auto& entry : profile.entries) {
        for (Weight w = 0; w < entry.weight; ++w) ballots.push_back(entry.ballot.ranking);
    }
    const auto total = static_cast<Weight>(ballots.size());

    std::vector<Candidate> alive(profile.m);
    for (int c = 0; c < profile.m; ++c) alive[static_cast<size_t>(c)] = c;

    while (true) {
        std::map<Candidate, Weight> firsts;
        for (Candidate c : alive) firsts[c] = 0;
        for (const auto& b : ballots) firsts[b.front()] += 1;

        if (alive.size() == 1) return alive.front();
        for (const auto& [c, t] : firsts) {
            if (2 * t > total) return c;
        }

        Weight least = firsts.begin()->second;
        for (const auto& [c, t] : firsts) least = std::min(least, t);
        std::vector<Candidate> tied;
        for (const auto& [c, t] : firsts) {
            if (t == least) tied.push_back(c);
        }
        const Candidate out = core::break_tie(tied, policy);

        alive.erase(std::remove(alive.begin(), alive.end(), out), alive.end());
        for (auto& b : ballots) b.erase(std::remove(b.begin(), b.end(), out), b.end());
    }
}

Profile random_profile(int m, int n, core::Seed seed) {
    core::Rng rng(seed);
    Profile p;
    p.m = m;
    for (int i = 0; i < n; ++i) p.entries.push_back({rng.next_ballot(m), 1});
    return p;
}

}  // namespace

TEST_CASE("stv worked example: elimination transfers votes") {
    Profile p;
    p.m = 3;
    p.entries = {{Ballot{{0, 1, 2}}, 2}, {Ballot{{1, 2, 0}}, 2}, {Ballot{{2, 0, 1}}, 1}};

    const auto trace = rules::stv_outcome(p);
    CHECK(trace.winner == 0);
    REQUIRE(trace.rounds.size() == 2);

    using TallyRow = std::vector<std::pair<Candidate, Weight>>;
    CHECK(trace.rounds[0].tallies == TallyRow{{0, 2}, {1, 2}, {2, 1}});
    REQUIRE(trace.rounds[0].eliminated.has_value());
    CHECK(*trace.rounds[0].eliminated == 2);

    CHECK(trace.rounds[1].tallies == TallyRow{{0, 3}, {1, 2}});
    CHECK_FALSE(trace.rounds[1].eliminated.has_value());
}

TEST_CASE("stv stops as soon as a strict majority appears") {
    Profile p;
    p.m = 3;
    p.entries = {{Ballot{{0, 1, 2}}, 5}, {Ballot{{1, 0, 2}}, 2}, {Ballot{{2, 1, 0}}, 2}};
    const auto trace = rules::stv_outcome(p);
    CHECK(trace.winner == 0);
    CHECK(trace.rounds.size() == 1);
    CHECK_FALSE(trace.rounds[0].eliminated.has_value());
}

TEST_CASE("stv: exactly half is not a majority") {
    Profile p;
    p.m = 2;
    p.entries = {{Ballot{{0, 1}}, 2}, {Ballot{{1, 0}}, 2}};
    // 2 of 4 is not a strict majority; the policy selects which tied candidate
    // is eliminated, so lexmin kicks 0 and lexmax kicks 1.
    CHECK(rules::stv_outcome(p, TieBreakPolicy::lex_min()).winner == 1);
    CHECK(rules::stv_outcome(p, TieBreakPolicy::lex_max()).winner == 0);
}

TEST_CASE("stv single candidate wins immediately") {
    Profile p;
    p.m = 1;
    p.entries = {{Ballot{{0}}, 3}};
    const auto trace = rules::stv_outcome(p);
    CHECK(trace.winner == 0);
    CHECK(trace.rounds.size() == 1);
}

TEST_CASE("stv rejects degenerate inputs") {
    Profile no_votes;
    no_votes.m = 2;
    CHECK_THROWS_AS(rules::stv_outcome(no_votes), rules::EmptyProfileError);

    Profile no_candidates;
    no_candidates.m = 0;
    CHECK_THROWS_AS(rules::stv_outcome(no_candidates), rules::EmptyCandidateSetError);
}

TEST_CASE("stv tallies conserve total weight every round") {
    for (core::Seed seed = 0; seed < 20; ++seed) {
        const Profile p = random_profile(5, 9, core::derive_seed(11, seed, 0, 0));
        const auto trace = rules::stv_outcome(p);
        for (const auto& round : trace.rounds) {
            Weight sum = 0;
            for (const auto& [c, t] : round.tallies) sum += t;
            CHECK(sum == p.total_weight());
        }
    }
}

TEST_CASE("stv agrees with the naive unit-ballot simulator") {
    int checked = 0;
    for (int m = 2; m <= 5; ++m) {
        for (int n = 1; n <= 8; ++n) {
            for (int rep = 0; rep < 40; ++rep) {
                const Profile p =
                    random_profile(m, n, core::derive_seed(23, static_cast<core::Seed>(m),
                                                           static_cast<core::Seed>(n),
                                                           static_cast<core::Seed>(rep)));
                for (const auto& policy : {TieBreakPolicy::lex_min(), TieBreakPolicy::lex_max()}) {
                    CHECK(rules::stv_outcome(p, policy).winner == naive_stv_winner(p, policy));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked == 4 * 8 * 40 * 2);
}

TEST_CASE("stv is anonymous and weight-splitting invariant") {
    const Profile weighted = [] {
        Profile p;
        p.m = 4;
        p.entries = {{Ballot{{3, 1, 0, 2}}, 3}, {Ballot{{0, 2, 1, 3}}, 2}, {Ballot{{1, 0, 3, 2}}, 2}};
        return p;
    }();

    Profile split;
    split.m = 4;
    for (const auto& entry : weighted.entries) {
        for (Weight w = 0; w < entry.weight; ++w) split.entries.push_back({entry.ballot, 1});
    }
    std::reverse(split.entries.begin(), split.entries.end());

    const auto a = rules::stv_outcome(weighted);
    const auto b = rules::stv_outcome(split);
    CHECK(a.winner == b.winner);
    REQUIRE(a.rounds.size() == b.rounds.size());
    for (size_t i = 0; i < a.rounds.size(); ++i) {
        CHECK(a.rounds[i].tallies == b.rounds[i].tallies);
        CHECK(a.rounds[i].eliminated == b.rounds[i].eliminated);
    }
}

TEST_CASE("stv with fixed-order ties") {
    Profile p;
    p.m = 3;
    p.entries = {{Ballot{{0, 2, 1}}, 1}, {Ballot{{1, 2, 0}}, 1}, {Ballot{{2, 0, 1}}, 1}};
    // All tied at 1. The fixed order selects the eliminated candidate, so
    // order:1,2,0 kicks 1 first; its vote transfers to 2, who then holds 2/3.
    const auto trace = rules::stv_outcome(p, TieBreakPolicy::fixed_order({1, 2, 0}));
    REQUIRE(trace.rounds[0].eliminated.has_value());
    CHECK(*trace.rounds[0].eliminated == 1);
    CHECK(trace.winner == 2);
}

TEST_CASE("veto rule counts weighted vetoes, fewest wins") {
    core::VetoProfile p;
    p.m = 3;
    p.entries = {{core::VetoBallot{0}, 4}, {core::VetoBallot{1}, 1}, {core::VetoBallot{0}, 1}};
    const auto tally = rules::veto_outcome(p);
    CHECK(tally.vetoes == std::vector<Weight>{5, 1, 0});
    CHECK(tally.winner == 2);
}

TEST_CASE("veto ties break per policy") {
    core::VetoProfile p;
    p.m = 3;
    p.entries = {{core::VetoBallot{2}, 1}};
    // 0 and 1 both have zero vetoes.
    CHECK(rules::veto_outcome(p, TieBreakPolicy::lex_min()).winner == 0);
    CHECK(rules::veto_outcome(p, TieBreakPolicy::lex_max()).winner == 1);
    CHECK(rules::veto_outcome(p, TieBreakPolicy::fixed_order({1, 0, 2})).winner == 1);
}

TEST_CASE("veto degenerate inputs") {
    // No vetoes at all is fine: every count is zero and the policy decides.
    core::VetoProfile empty;
    empty.m = 3;
    CHECK(rules::veto_outcome(empty).winner == 0);
    CHECK(rules::veto_outcome(empty, TieBreakPolicy::lex_max()).winner == 2);

    core::VetoProfile none;
    none.m = 0;
    CHECK_THROWS_AS(rules::veto_outcome(none), rules::EmptyCandidateSetError);
}

TEST_CASE("rankings embed into vetoes against the last place") {
    Profile p;
    p.m = 3;
    p.entries = {{Ballot{{0, 1, 2}}, 2}, {Ballot{{2, 1, 0}}, 3}};
    const auto vp = rules::to_veto_profile(p);
    CHECK(vp.m == 3);
    REQUIRE(vp.entries.size() == 2);
    CHECK(vp.entries[0].veto.vetoed == 2);
    CHECK(vp.entries[0].weight == 2);
    CHECK(vp.entries[1].veto.vetoed == 0);
    CHECK(vp.entries[1].weight == 3);

    // An empty election embeds to an empty election; ballots with no
    // candidates to veto cannot.
    Profile bad;
    bad.m = 0;
    CHECK_NOTHROW(rules::to_veto_profile(bad));
    bad.entries.push_back({Ballot{{}}, 1});
    CHECK_THROWS_AS(rules::to_veto_profile(bad), rules::EmptyCandidateSetError);
}
