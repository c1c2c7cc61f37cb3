#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "maniplab/core.hpp"
#include "maniplab/generators.hpp"
#include "maniplab/rng.hpp"

using namespace maniplab;
using core::Ballot;
using core::Profile;
using generators::Axis;

namespace {

bool same_profile(const Profile& a, const Profile& b) {
    if (a.m != b.m || a.entries.size() != b.entries.size()) return false;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        if (a.entries[i].ballot != b.entries[i].ballot) return false;
        if (a.entries[i].weight != b.entries[i].weight) return false;
    }
    return true;
}

std::map<Ballot, int> ballot_counts(const Profile& p) {
    std::map<Ballot, int> counts;
    for (const auto& entry : p.entries) counts[entry.ballot] += static_cast<int>(entry.weight);
    return counts;
}

}  // namespace

TEST_CASE("generators are deterministic in the seed") {
    CHECK(same_profile(generators::gen_impartial_culture(4, 10, 7),
                       generators::gen_impartial_culture(4, 10, 7)));
    CHECK(same_profile(generators::gen_urn(4, 10, {3}, 7), generators::gen_urn(4, 10, {3}, 7)));
    CHECK(same_profile(generators::gen_single_peaked(4, 10, 7),
                       generators::gen_single_peaked(4, 10, 7)));
    CHECK(same_profile(generators::gen_single_troughed(4, 10, 7),
                       generators::gen_single_troughed(4, 10, 7)));

    CHECK_FALSE(same_profile(generators::gen_impartial_culture(4, 10, 7),
                             generators::gen_impartial_culture(4, 10, 8)));
}

TEST_CASE("generators produce unit-weight valid profiles of the right shape") {
    for (int variant = 0; variant < 4; ++variant) {
        Profile p;
        switch (variant) {
            case 0: p = generators::gen_impartial_culture(5, 13, 3); break;
            case 1: p = generators::gen_urn(5, 13, {2}, 3); break;
            case 2: p = generators::gen_single_peaked(5, 13, 3); break;
            default: p = generators::gen_single_troughed(5, 13, 3); break;
        }
        CAPTURE(variant);
        CHECK(p.m == 5);
        CHECK(p.entries.size() == 13);
        CHECK(p.total_weight() == 13);
        CHECK_NOTHROW(core::require_valid(p));
    }
}

TEST_CASE("generator edge cases") {
    CHECK(generators::gen_impartial_culture(3, 0, 1).entries.empty());
    CHECK(generators::gen_urn(1, 4, {5}, 1).entries.size() == 4);
    CHECK_THROWS_AS(generators::gen_impartial_culture(0, 3, 1), core::ConfigError);
    CHECK_THROWS_AS(generators::gen_impartial_culture(3, -1, 1), core::ConfigError);
    CHECK_THROWS_AS(generators::gen_urn(3, 2, {-1}, 1), core::ConfigError);
}

TEST_CASE("impartial culture hits every order roughly uniformly") {
    const int n = 6000;
    const auto counts = ballot_counts(generators::gen_impartial_culture(3, n, 99));
    CHECK(counts.size() == 6);
    for (const auto& [ballot, count] : counts) {
        // expected 1000, sd ~ 29; a 6-sd band will not flap.
        CHECK(count > 820);
        CHECK(count < 1180);
    }
}

TEST_CASE("urn with a=0 behaves like impartial culture") {
    const int n = 6000;
    const auto counts = ballot_counts(generators::gen_urn(3, n, {0}, 123));
    CHECK(counts.size() == 6);
    for (const auto& [ballot, count] : counts) {
        CHECK(count > 820);
        CHECK(count < 1180);
    }
}

TEST_CASE("urn with m=2, a=1 repeats the first ballot two thirds of the time") {
    int repeats = 0;
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        const Profile p = generators::gen_urn(2, 2, {1}, core::derive_seed(5, 0, 0, i));
        if (p.entries[0].ballot == p.entries[1].ballot) ++repeats;
    }
    const double rate = static_cast<double>(repeats) / samples;
    CHECK(rate > 0.653);  // 2/3 minus ~4 sd
    CHECK(rate < 0.680);
}

TEST_CASE("urn with huge contagion locks onto the first ballot") {
    const Profile p = generators::gen_urn(3, 30, {1000000000LL}, 4242);
    for (const auto& entry : p.entries) CHECK(entry.ballot == p.entries[0].ballot);
}

TEST_CASE("urn refuses candidate counts whose factorial overflows") {
    CHECK_THROWS_AS(generators::gen_urn(21, 1, {1}, 0), generators::OverflowError);
    CHECK_NOTHROW(generators::gen_urn(20, 1, {1}, 0));
}

TEST_CASE("single-peaked sampling reaches exactly the single-peaked orders") {
    std::set<std::vector<core::Candidate>> seen;
    const Profile p = generators::gen_single_peaked(3, 4000, 31);
    for (const auto& entry : p.entries) {
        CHECK(generators::is_single_peaked(entry.ballot, Axis::identity(3)));
        seen.insert(entry.ballot.ranking);
    }
    const std::set<std::vector<core::Candidate>> expected{
        {0, 1, 2}, {1, 0, 2}, {1, 2, 0}, {2, 1, 0}};
    CHECK(seen == expected);
}

TEST_CASE("single-peaked on a custom axis") {
    const Axis axis{{2, 0, 1}};
    const Profile p = generators::gen_single_peaked(3, 200, 8, axis);
    for (const auto& entry : p.entries) {
        CHECK(generators::is_single_peaked(entry.ballot, axis));
    }
    // 2>1>0 jumps across 0 on the axis 2-0-1, so it must never be sampled.
    for (const auto& entry : p.entries) {
        CHECK(entry.ballot != Ballot{{2, 1, 0}});
    }
    CHECK_THROWS_AS(generators::gen_single_peaked(3, 1, 0, Axis{{0, 0, 1}}), core::ConfigError);
}

TEST_CASE("single-troughed ballots are reversed single-peaked ballots") {
    const Profile p = generators::gen_single_troughed(5, 300, 77);
    for (const auto& entry : p.entries) {
        Ballot reversed = entry.ballot;
        std::reverse(reversed.ranking.begin(), reversed.ranking.end());
        CHECK(generators::is_single_peaked(reversed, Axis::identity(5)));
    }
    // The worst candidate sits at an end of the axis only in peaked ballots;
    // troughed ballots instead rank an interior dip last... so check the dual:
    // the last-ranked candidate's neighbors on the axis cannot both be ranked
    // before everything else. Cheaper: 0>2>1 is troughed, 0>1>2 is not.
    CHECK(generators::is_single_peaked(Ballot{{2, 1, 0}}, Axis::identity(3)));
}

TEST_CASE("is_single_peaked spot checks") {
    const Axis id3 = Axis::identity(3);
    CHECK(generators::is_single_peaked(Ballot{{1, 0, 2}}, id3));
    CHECK(generators::is_single_peaked(Ballot{{1, 2, 0}}, id3));
    CHECK_FALSE(generators::is_single_peaked(Ballot{{0, 2, 1}}, id3));
    CHECK_FALSE(generators::is_single_peaked(Ballot{{2, 0, 1}}, id3));
    // Invalid ballots are simply not single-peaked.
    CHECK_FALSE(generators::is_single_peaked(Ballot{{0, 0, 1}}, id3));
    CHECK_FALSE(generators::is_single_peaked(Ballot{{0, 1}}, id3));
}

TEST_CASE("urn draws get reinforced") {
    // With a substantial a, big samples collapse onto few ballot types.
    const auto counts = ballot_counts(generators::gen_urn(4, 200, {50}, 17));
    CHECK(counts.size() < 24);  // cannot have touched every order
    int max_count = 0;
    for (const auto& [ballot, count] : counts) max_count = std::max(max_count, count);
    CHECK(max_count > 50);  // some type snowballed
}
