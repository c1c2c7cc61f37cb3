#include "maniplab/matching.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "maniplab/rules.hpp"

namespace maniplab::matching {

using core::ConfigError;
using core::ParseError;
using core::TooLargeError;
using manipulation::Rule;

namespace {

void check_permutation(const std::vector<int>& list, int n, const char* what) {
    const core::BallotCheck check = core::validate_ballot(core::Ballot{list}, n);
    if (!check.ok())
        throw ConfigError(std::string(what) + " is not a permutation: " + core::describe(check));
}

// rank[r][x] = position of x in r's list; lower is better.
std::vector<std::vector<int>> rank_table(const std::vector<std::vector<int>>& prefs) {
    const std::size_t n = prefs.size();
    std::vector<std::vector<int>> rank(n, std::vector<int>(n, 0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t pos = 0; pos < n; ++pos)
            rank[r][static_cast<std::size_t>(prefs[r][pos])] = static_cast<int>(pos);
    return rank;
}

// Proposer-optimal deferred acceptance; returns proposer -> responder.
std::vector<int> deferred_acceptance(const std::vector<std::vector<int>>& prop,
                                     const std::vector<std::vector<int>>& resp) {
    const int n = static_cast<int>(prop.size());
    const auto rank = rank_table(resp);
    std::vector<int> next(static_cast<std::size_t>(n), 0);
    std::vector<int> holds(static_cast<std::size_t>(n), -1);  // responder -> proposer
    std::vector<int> match(static_cast<std::size_t>(n), -1);
    std::vector<int> free(static_cast<std::size_t>(n));
    std::iota(free.begin(), free.end(), 0);
    // LIFO order; the outcome is proposal-order independent anyway.
    while (!free.empty()) {
        const int p = free.back();
        free.pop_back();
        const int r = prop[static_cast<std::size_t>(p)]
                          [static_cast<std::size_t>(next[static_cast<std::size_t>(p)]++)];
        const int held = holds[static_cast<std::size_t>(r)];
        if (held < 0) {
            holds[static_cast<std::size_t>(r)] = p;
            match[static_cast<std::size_t>(p)] = r;
        } else if (rank[static_cast<std::size_t>(r)][static_cast<std::size_t>(p)] <
                   rank[static_cast<std::size_t>(r)][static_cast<std::size_t>(held)]) {
            holds[static_cast<std::size_t>(r)] = p;
            match[static_cast<std::size_t>(p)] = r;
            match[static_cast<std::size_t>(held)] = -1;
            free.push_back(held);
        } else {
            free.push_back(p);
        }
    }
    return match;
}

void check_matching(const MatchingInstance& instance, const Matching& matching) {
    if (static_cast<int>(matching.wife.size()) != instance.n)
        throw ConfigError("matching size does not fit the instance");
    check_permutation(matching.wife, instance.n, "matching");
}

// One round of electing-and-removing with the given rule. `prefs` are the
// voters' full lists; `alive` marks the candidates still standing.
int elect_one(const std::vector<std::vector<int>>& prefs, const std::vector<char>& alive,
              const std::vector<int>& dense_of, const std::vector<int>& sparse_of, Rule rule,
              const core::TieBreakPolicy& policy) {
    core::Profile profile;
    profile.m = static_cast<int>(sparse_of.size());
    for (const auto& list : prefs) {
        core::Ballot ballot;
        ballot.ranking.reserve(sparse_of.size());
        for (int c : list)
            if (alive[static_cast<std::size_t>(c)])
                ballot.ranking.push_back(dense_of[static_cast<std::size_t>(c)]);
        profile.entries.push_back({std::move(ballot), 1});
    }
    core::TieBreakPolicy dense_policy = policy;
    if (policy.kind == core::TieBreakPolicy::Kind::FixedOrder) {
        dense_policy.order.clear();
        for (int c : policy.order)
            if (c >= 0 && c < static_cast<int>(alive.size()) && alive[static_cast<std::size_t>(c)])
                dense_policy.order.push_back(dense_of[static_cast<std::size_t>(c)]);
    }
    const int dense_winner =
        rule == Rule::Stv
            ? rules::stv_outcome(profile, dense_policy).winner
            : rules::veto_outcome(rules::to_veto_profile(profile), dense_policy).winner;
    return sparse_of[static_cast<std::size_t>(dense_winner)];
}

// Repeatedly elect the most popular remaining candidate. LexMin/LexMax are
// invariant under the order-preserving dense remap; FixedOrder is remapped.
std::vector<int> popularity_order(const std::vector<std::vector<int>>& prefs, Rule rule,
                                  const core::TieBreakPolicy& policy) {
    const int n = static_cast<int>(prefs.size());
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int round = 0; round < n; ++round) {
        std::vector<int> sparse_of;  // dense index -> candidate
        std::vector<int> dense_of(static_cast<std::size_t>(n), -1);
        for (int c = 0; c < n; ++c)
            if (alive[static_cast<std::size_t>(c)]) {
                dense_of[static_cast<std::size_t>(c)] = static_cast<int>(sparse_of.size());
                sparse_of.push_back(c);
            }
        int elected;
        if (sparse_of.size() == 1) {
            elected = sparse_of[0];
        } else {
            elected = elect_one(prefs, alive, dense_of, sparse_of, rule, policy);
        }
        order.push_back(elected);
        alive[static_cast<std::size_t>(elected)] = 0;
    }
    return order;
}

}  // namespace

void require_valid(const MatchingInstance& instance) {
    if (instance.n < 1) throw ConfigError("instance needs at least one person per side");
    if (static_cast<int>(instance.men_prefs.size()) != instance.n ||
        static_cast<int>(instance.women_prefs.size()) != instance.n)
        throw ConfigError("preference lists must cover every person");
    for (const auto& list : instance.men_prefs)
        check_permutation(list, instance.n, "a man's preference list");
    for (const auto& list : instance.women_prefs)
        check_permutation(list, instance.n, "a woman's preference list");
}

std::vector<int> Matching::husbands() const {
    std::vector<int> h(wife.size(), -1);
    for (std::size_t m = 0; m < wife.size(); ++m) h[static_cast<std::size_t>(wife[m])] = static_cast<int>(m);
    return h;
}

Matching gale_shapley(const MatchingInstance& instance, Side proposing) {
    require_valid(instance);
    Matching result;
    if (proposing == Side::Men) {
        result.wife = deferred_acceptance(instance.men_prefs, instance.women_prefs);
    } else {
        const std::vector<int> husband = deferred_acceptance(instance.women_prefs, instance.men_prefs);
        result.wife.assign(static_cast<std::size_t>(instance.n), -1);
        for (int w = 0; w < instance.n; ++w)
            result.wife[static_cast<std::size_t>(husband[static_cast<std::size_t>(w)])] = w;
    }
    return result;
}

std::optional<BlockingPair> find_blocking_pair(const MatchingInstance& instance,
                                               const Matching& matching) {
    require_valid(instance);
    check_matching(instance, matching);
    const auto mrank = rank_table(instance.men_prefs);
    const auto wrank = rank_table(instance.women_prefs);
    const auto husband = matching.husbands();
    for (int a = 0; a < instance.n; ++a)
        for (int b = 0; b < instance.n; ++b) {
            if (b == matching.wife[static_cast<std::size_t>(a)]) continue;
            const bool man_prefers =
                mrank[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] <
                mrank[static_cast<std::size_t>(a)]
                     [static_cast<std::size_t>(matching.wife[static_cast<std::size_t>(a)])];
            const bool woman_prefers =
                wrank[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] <
                wrank[static_cast<std::size_t>(b)]
                     [static_cast<std::size_t>(husband[static_cast<std::size_t>(b)])];
            if (man_prefers && woman_prefers) return BlockingPair{a, b};
        }
    return std::nullopt;
}

bool is_stable(const MatchingInstance& instance, const Matching& matching) {
    return !find_blocking_pair(instance, matching).has_value();
}

std::vector<Matching> enumerate_stable(const MatchingInstance& instance) {
    require_valid(instance);
    if (instance.n > 8) throw TooLargeError("stable-matching enumeration caps n at 8");
    std::vector<Matching> stable;
    Matching candidate;
    candidate.wife.resize(static_cast<std::size_t>(instance.n));
    std::iota(candidate.wife.begin(), candidate.wife.end(), 0);
    do {
        if (is_stable(instance, candidate)) stable.push_back(candidate);
    } while (std::next_permutation(candidate.wife.begin(), candidate.wife.end()));
    return stable;
}

Matching popular_stable_procedure(const MatchingInstance& instance, Rule rule,
                                  const core::TieBreakPolicy& policy) {
    require_valid(instance);
    std::vector<Matching> pool = enumerate_stable(instance);
    const std::vector<int> women_order = popularity_order(instance.men_prefs, rule, policy);
    const std::vector<int> men_order = popularity_order(instance.women_prefs, rule, policy);
    const auto mrank = rank_table(instance.men_prefs);
    const auto wrank = rank_table(instance.women_prefs);

    const auto keep_best = [&](auto partner_rank) {
        int best = instance.n;
        for (const Matching& matching : pool) best = std::min(best, partner_rank(matching));
        std::vector<Matching> kept;
        for (Matching& matching : pool)
            if (partner_rank(matching) == best) kept.push_back(std::move(matching));
        pool = std::move(kept);
    };

    for (int k = 0; k < instance.n; ++k) {
        const int w = women_order[static_cast<std::size_t>(k)];
        keep_best([&](const Matching& matching) {
            return wrank[static_cast<std::size_t>(w)]
                        [static_cast<std::size_t>(matching.husbands()[static_cast<std::size_t>(w)])];
        });
        const int m = men_order[static_cast<std::size_t>(k)];
        keep_best([&](const Matching& matching) {
            return mrank[static_cast<std::size_t>(m)]
                        [static_cast<std::size_t>(matching.wife[static_cast<std::size_t>(m)])];
        });
    }
    if (pool.empty()) throw std::logic_error("stable set filtered to nothing");
    // Every person's partner is pinned once all 2n filters ran, so any
    // remaining entries are equal.
    return pool.front();
}

Procedure Procedure::gs(Side side) {
    Procedure p;
    p.kind = side == Side::Men ? Kind::GaleShapleyMen : Kind::GaleShapleyWomen;
    return p;
}

Procedure Procedure::popular(Rule rule, core::TieBreakPolicy policy) {
    Procedure p;
    p.kind = Kind::Popular;
    p.rule = rule;
    p.policy = std::move(policy);
    return p;
}

Matching apply(const Procedure& procedure, const MatchingInstance& instance) {
    switch (procedure.kind) {
        case Procedure::Kind::GaleShapleyMen:
            return gale_shapley(instance, Side::Men);
        case Procedure::Kind::GaleShapleyWomen:
            return gale_shapley(instance, Side::Women);
        case Procedure::Kind::Popular:
            return popular_stable_procedure(instance, procedure.rule, procedure.policy);
    }
    throw ConfigError("unknown matching procedure");
}

std::optional<Misreport> find_matching_manipulation(const MatchingInstance& instance,
                                                    const Procedure& procedure, Agent agent) {
    require_valid(instance);
    if (instance.n > 6) throw TooLargeError("misreport search caps n at 6");
    if (agent.index < 0 || agent.index >= instance.n)
        throw ConfigError("agent index out of range");

    const Matching honest = apply(procedure, instance);
    const std::size_t i = static_cast<std::size_t>(agent.index);
    const std::vector<int>& true_list =
        agent.side == Side::Men ? instance.men_prefs[i] : instance.women_prefs[i];
    std::vector<int> true_rank(static_cast<std::size_t>(instance.n), 0);
    for (std::size_t pos = 0; pos < true_list.size(); ++pos)
        true_rank[static_cast<std::size_t>(true_list[pos])] = static_cast<int>(pos);
    const auto partner_of = [&](const Matching& matching) {
        return agent.side == Side::Men ? matching.wife[i] : matching.husbands()[i];
    };
    const int old_partner = partner_of(honest);

    MatchingInstance probe = instance;
    std::vector<int>& probe_list =
        agent.side == Side::Men ? probe.men_prefs[i] : probe.women_prefs[i];
    std::iota(probe_list.begin(), probe_list.end(), 0);
    do {
        const Matching outcome = apply(procedure, probe);
        const int partner = partner_of(outcome);
        if (true_rank[static_cast<std::size_t>(partner)] <
            true_rank[static_cast<std::size_t>(old_partner)])
            return Misreport{probe_list, partner, old_partner};
    } while (std::next_permutation(probe_list.begin(), probe_list.end()));
    return std::nullopt;
}

MatchingInstance read_instance(std::string_view text) {
    MatchingInstance instance;
    bool have_n = false;
    int rows_seen = 0;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<int> values;
        int v = 0;
        while (ls >> v) values.push_back(v);
        std::string junk;
        if (ls.clear(), ls >> junk)
            throw ParseError("unexpected token `" + junk + "`", line_no);
        if (values.empty()) continue;
        if (!have_n) {
            if (values.size() != 1) throw ParseError("expected the size alone first", line_no);
            instance.n = values[0];
            if (instance.n < 1) throw ParseError("size must be positive", line_no);
            have_n = true;
            continue;
        }
        if (rows_seen >= 2 * instance.n) throw ParseError("too many ranking lines", line_no);
        if (static_cast<int>(values.size()) != instance.n)
            throw ParseError("ranking line must list all " + std::to_string(instance.n) +
                                 " partners",
                             line_no);
        const core::BallotCheck check = core::validate_ballot(core::Ballot{values}, instance.n);
        if (!check.ok()) throw ParseError(core::describe(check), line_no);
        if (rows_seen < instance.n)
            instance.men_prefs.push_back(std::move(values));
        else
            instance.women_prefs.push_back(std::move(values));
        ++rows_seen;
    }
    if (!have_n) throw ParseError("instance file is empty", std::max(line_no, 1));
    if (rows_seen != 2 * instance.n)
        throw ParseError("expected " + std::to_string(2 * instance.n) + " ranking lines",
                         line_no);
    return instance;
}

std::string write_instance(const MatchingInstance& instance) {
    require_valid(instance);
    std::string out = std::to_string(instance.n) + "\n";
    const auto emit = [&](const std::vector<std::vector<int>>& prefs) {
        for (const auto& list : prefs) {
            for (std::size_t pos = 0; pos < list.size(); ++pos) {
                if (pos) out += ' ';
                out += std::to_string(list[pos]);
            }
            out += '\n';
        }
    };
    emit(instance.men_prefs);
    emit(instance.women_prefs);
    return out;
}

}  // namespace maniplab::matching
