#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maniplab/core.hpp"
#include "maniplab/manipulation.hpp"

namespace maniplab::matching {

// Complete strict preference lists on both sides; no truncation, no ties.
struct MatchingInstance {
    int n = 0;
    std::vector<std::vector<int>> men_prefs;    // men_prefs[m] ranks women, best first
    std::vector<std::vector<int>> women_prefs;  // women_prefs[w] ranks men, best first
};

void require_valid(const MatchingInstance& instance);

struct Matching {
    std::vector<int> wife;  // wife[man] = woman

    std::vector<int> husbands() const;
    bool operator==(const Matching&) const = default;
};

enum class Side { Men, Women };

// Deferred acceptance; returns the proposing-side-optimal stable matching.
Matching gale_shapley(const MatchingInstance& instance, Side proposing);

struct BlockingPair {
    int man = 0;
    int woman = 0;
};

// Lexicographically least blocking pair (by man, then woman), or absent.
std::optional<BlockingPair> find_blocking_pair(const MatchingInstance& instance,
                                               const Matching& matching);
bool is_stable(const MatchingInstance& instance, const Matching& matching);

// Every stable matching, ordered lexicographically by wife vector. Brute
// force over all n! matchings; n <= 8.
std::vector<Matching> enumerate_stable(const MatchingInstance& instance);

// "The most popular people pick first": elect a popularity order over women
// by repeatedly applying the voting rule to the men's ballots (removing each
// winner), dually over men; interleave woman_1, man_1, woman_2, man_2, ...;
// then filter the stable set, keeping at each person the matchings that give
// them their best surviving partner. The survivor is unique. n <= 8.
Matching popular_stable_procedure(const MatchingInstance& instance, manipulation::Rule rule,
                                  const core::TieBreakPolicy& policy =
                                      core::TieBreakPolicy::lex_min());

struct Procedure {
    enum class Kind { GaleShapleyMen, GaleShapleyWomen, Popular };

    Kind kind = Kind::GaleShapleyMen;
    manipulation::Rule rule = manipulation::Rule::Stv;  // Popular only
    core::TieBreakPolicy policy = core::TieBreakPolicy::lex_min();

    static Procedure gs(Side side);
    static Procedure popular(manipulation::Rule rule,
                             core::TieBreakPolicy policy = core::TieBreakPolicy::lex_min());
};

Matching apply(const Procedure& procedure, const MatchingInstance& instance);

struct Agent {
    Side side = Side::Men;
    int index = 0;
};

struct Misreport {
    std::vector<int> list;  // the false preference list
    int new_partner = 0;    // strictly better than old_partner on the true list
    int old_partner = 0;
};

// First strictly-improving misreport for the agent, in lexicographic order
// over all n! alternative lists; absent if truth-telling is optimal. n <= 6.
std::optional<Misreport> find_matching_manipulation(const MatchingInstance& instance,
                                                    const Procedure& procedure, Agent agent);

// Instance file: first meaningful line `n`, then n men's ranking lines and n
// women's ranking lines (n space-separated indices each); `#` comments.
MatchingInstance read_instance(std::string_view text);
std::string write_instance(const MatchingInstance& instance);

}  // namespace maniplab::matching
