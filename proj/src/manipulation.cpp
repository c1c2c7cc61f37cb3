#include "maniplab/manipulation.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>

namespace maniplab::manipulation {

using core::Ballot;
using core::Candidate;
using core::ConfigError;
using core::Profile;
using core::TooLargeError;
using core::VetoBallot;
using core::VetoProfile;
using core::Weight;

namespace {

using Clock = std::chrono::steady_clock;

void check_coalition(const ManipulationQuery& query) {
    if (query.coalition.empty()) throw ConfigError("coalition must be nonempty");
    for (Weight w : query.coalition)
        if (w <= 0) throw ConfigError("coalition weights must be positive");
}

void check_target(const ManipulationQuery& query, int m) {
    if (m < 1) throw rules::EmptyCandidateSetError();
    if (query.target < 0 || query.target >= m) throw ConfigError("target candidate out of range");
}

int profile_m(const core::AnyProfile& fixed) {
    return std::visit([](const auto& p) { return p.m; }, fixed);
}

const Profile& ranking_fixed(const ManipulationQuery& query) {
    if (const auto* p = std::get_if<Profile>(&query.fixed)) return *p;
    throw ConfigError("this solver needs ranking ballots as the fixed votes");
}

const VetoProfile& veto_fixed(const ManipulationQuery& query) {
    if (const auto* p = std::get_if<VetoProfile>(&query.fixed)) return *p;
    throw ConfigError("this solver needs veto ballots as the fixed votes");
}

Weight coalition_total(const ManipulationQuery& query) {
    Weight k = 0;
    for (Weight w : query.coalition) k += w;
    return k;
}

void assert_goal(const ManipulationQuery& query, Candidate winner, const char* solver) {
    const bool ok = (query.goal == Goal::Constructive) ? winner == query.target
                                                       : winner != query.target;
    if (!ok) throw std::logic_error(std::string(solver) + ": witness fails to achieve the goal");
}

void replay_ranking(const ManipulationQuery& query, const std::vector<Ballot>& ballots,
                    const char* solver) {
    const auto trace = rules::stv_outcome(combined_profile(query, ballots), query.policy);
    assert_goal(query, trace.winner, solver);
}

void replay_veto(const ManipulationQuery& query, const std::vector<VetoBallot>& vetoes,
                 const char* solver) {
    const auto tally = rules::veto_outcome(combined_veto_profile(query, vetoes), query.policy);
    assert_goal(query, tally.winner, solver);
}

// Constructive STV search. The coalition's (identical, aggregated) vote always
// sits with one surviving candidate; the fixed ballots' positions are a pure
// function of the surviving set, so the moment that support is eliminated the
// remainder of the election depends only on the surviving set and the next
// support choice. Decision states are therefore keyed by the surviving-set
// bitmask alone, failures are memoized per mask, and the witness ballot is the
// support trajectory followed by the untouched candidates in ascending order.
class StvSearch {
  public:
    struct BudgetStop {};

    StvSearch(const Profile& fixed, Weight coalition_weight, Candidate target,
              const core::TieBreakPolicy& policy, std::optional<std::uint64_t> budget)
        : fixed_(fixed),
          k_(coalition_weight),
          target_(target),
          policy_(policy),
          budget_(budget),
          total_(fixed.total_weight() + coalition_weight) {}

    bool run() {
        const std::uint64_t all =
            (fixed_.m >= 64) ? ~0ull : ((1ull << fixed_.m) - 1);
        return expand(all);
    }

    std::uint64_t nodes() const { return nodes_; }
    const std::vector<Candidate>& trajectory() const { return trajectory_; }

  private:
    enum class End { Win, Lose, Decision };

    bool expand(std::uint64_t alive) {
        if (!((alive >> target_) & 1)) return false;
        if (failed_.count(alive)) return false;
        if (budget_ && nodes_ >= *budget_) throw BudgetStop{};
        ++nodes_;
        // Support choices: target first, then the rest ascending. The first
        // trajectory found this way is the returned witness.
        for (int pass = 0; pass < 2; ++pass) {
            for (Candidate c = 0; c < fixed_.m; ++c) {
                if (!((alive >> c) & 1)) continue;
                if ((pass == 0) != (c == target_)) continue;
                trajectory_.push_back(c);
                std::uint64_t next = alive;
                const End end = cascade(next, c);
                if (end == End::Win) return true;
                if (end == End::Decision && expand(next)) return true;
                trajectory_.pop_back();
            }
        }
        failed_.insert(alive);
        return false;
    }

    // Run STV rounds with the coalition vote on `support` until the election
    // is decided or the support itself is eliminated (the next decision).
    End cascade(std::uint64_t& alive, Candidate support) {
        for (;;) {
            if (std::popcount(alive) == 1)
                return std::countr_zero(alive) == target_ ? End::Win : End::Lose;
            tallies_.assign(static_cast<std::size_t>(fixed_.m), 0);
            for (const auto& entry : fixed_.entries) {
                for (Candidate c : entry.ballot.ranking) {
                    if ((alive >> c) & 1) {
                        tallies_[static_cast<std::size_t>(c)] += entry.weight;
                        break;
                    }
                }
            }
            tallies_[static_cast<std::size_t>(support)] += k_;
            Candidate majority = -1;
            for (Candidate c = 0; c < fixed_.m; ++c) {
                if (((alive >> c) & 1) && 2 * tallies_[static_cast<std::size_t>(c)] > total_) {
                    majority = c;
                    break;
                }
            }
            if (majority >= 0) return majority == target_ ? End::Win : End::Lose;
            tied_.clear();
            Weight least = -1;
            for (Candidate c = 0; c < fixed_.m; ++c) {
                if (!((alive >> c) & 1)) continue;
                const Weight t = tallies_[static_cast<std::size_t>(c)];
                if (least < 0 || t < least) {
                    least = t;
                    tied_.clear();
                }
                if (t == least) tied_.push_back(c);
            }
            const Candidate out = core::break_tie(tied_, policy_);
            alive &= ~(1ull << out);
            if (out == support) {
                if (std::popcount(alive) == 1)
                    return std::countr_zero(alive) == target_ ? End::Win : End::Lose;
                return End::Decision;
            }
            if (out == target_) return End::Lose;
        }
    }

    const Profile& fixed_;
    const Weight k_;
    const Candidate target_;
    const core::TieBreakPolicy& policy_;
    const std::optional<std::uint64_t> budget_;
    const Weight total_;
    std::uint64_t nodes_ = 0;
    std::vector<Candidate> trajectory_;
    std::unordered_set<std::uint64_t> failed_;
    std::vector<Weight> tallies_;
    std::vector<Candidate> tied_;
};

// Branch and bound for the veto deficit-covering problem: weights (descending)
// are assigned one by one to candidates whose residual deficit is still
// positive. Any feasible assignment can be rerouted into that shape — weight
// aimed at an already-covered candidate may go to the leftover pile instead,
// since coverage never decreases — so the restriction loses nothing.
class VetoBnb {
  public:
    VetoBnb(int m, Candidate p, std::vector<Weight> weights_desc, std::vector<Weight> deficits)
        : m_(m), p_(p), weights_(std::move(weights_desc)), residual_(std::move(deficits)) {
        suffix_.assign(weights_.size() + 1, 0);
        for (std::size_t i = weights_.size(); i-- > 0;)
            suffix_[i] = suffix_[i + 1] + weights_[i];
        assignment_.assign(weights_.size(), -1);
    }

    bool run() { return solve(0); }
    std::uint64_t nodes() const { return nodes_; }
    // Per descending-order member: assigned candidate, or -1 for leftover.
    const std::vector<Candidate>& assignment() const { return assignment_; }

  private:
    bool solve(std::size_t i) {
        ++nodes_;
        Weight need = 0;
        for (Candidate c = 0; c < m_; ++c)
            if (c != p_) need += residual_[static_cast<std::size_t>(c)];
        if (need == 0) {
            std::fill(assignment_.begin() + static_cast<std::ptrdiff_t>(i), assignment_.end(), -1);
            return true;
        }
        if (suffix_[i] < need) return false;
        auto key = memo_key(i);
        if (failed_.count(key)) return false;
        for (Candidate c = 0; c < m_; ++c) {
            if (c == p_ || residual_[static_cast<std::size_t>(c)] <= 0) continue;
            const Weight saved = residual_[static_cast<std::size_t>(c)];
            residual_[static_cast<std::size_t>(c)] = std::max<Weight>(0, saved - weights_[i]);
            assignment_[i] = c;
            if (solve(i + 1)) return true;
            residual_[static_cast<std::size_t>(c)] = saved;
        }
        failed_.insert(std::move(key));
        return false;
    }

    // Feasibility from here on depends only on the multiset of positive
    // residuals, not on which candidate carries which.
    std::pair<std::size_t, std::vector<Weight>> memo_key(std::size_t i) const {
        std::vector<Weight> res;
        for (Candidate c = 0; c < m_; ++c)
            if (c != p_ && residual_[static_cast<std::size_t>(c)] > 0)
                res.push_back(residual_[static_cast<std::size_t>(c)]);
        std::sort(res.begin(), res.end());
        return {i, std::move(res)};
    }

    const int m_;
    const Candidate p_;
    std::vector<Weight> weights_;
    std::vector<Weight> residual_;
    std::vector<Weight> suffix_;
    std::vector<Candidate> assignment_;
    std::uint64_t nodes_ = 0;
    std::set<std::pair<std::size_t, std::vector<Weight>>> failed_;
};

}  // namespace

core::Profile combined_profile(const ManipulationQuery& query,
                               const std::vector<Ballot>& ballots) {
    const Profile& fixed = ranking_fixed(query);
    if (ballots.size() != query.coalition.size())
        throw ConfigError("need exactly one ballot per coalition member");
    Profile all = fixed;
    for (std::size_t i = 0; i < ballots.size(); ++i)
        all.entries.push_back({ballots[i], query.coalition[i]});
    return all;
}

core::VetoProfile combined_veto_profile(const ManipulationQuery& query,
                                        const std::vector<VetoBallot>& vetoes) {
    const VetoProfile& fixed = veto_fixed(query);
    if (vetoes.size() != query.coalition.size())
        throw ConfigError("need exactly one veto per coalition member");
    VetoProfile all = fixed;
    for (std::size_t i = 0; i < vetoes.size(); ++i)
        all.entries.push_back({vetoes[i], query.coalition[i]});
    return all;
}

ManipulationOutcome stv_constructive(const ManipulationQuery& query,
                                     std::optional<std::uint64_t> node_budget) {
    const Profile& fixed = ranking_fixed(query);
    core::require_valid(fixed);
    check_target(query, fixed.m);
    check_coalition(query);
    if (query.goal != Goal::Constructive)
        throw ConfigError("stv_constructive answers constructive queries only");
    if (fixed.m > 63) throw TooLargeError("too many candidates for the elimination-state search");

    const auto t0 = Clock::now();
    StvSearch search(fixed, coalition_total(query), query.target, query.policy, node_budget);
    ManipulationOutcome out;
    try {
        const bool found = search.run();
        out.verdict = found ? Verdict::Found : Verdict::Impossible;
        out.stats.decided = true;
        if (found) {
            Ballot witness;
            witness.ranking = search.trajectory();
            std::vector<char> used(static_cast<std::size_t>(fixed.m), 0);
            for (Candidate c : witness.ranking) used[static_cast<std::size_t>(c)] = 1;
            for (Candidate c = 0; c < fixed.m; ++c)
                if (!used[static_cast<std::size_t>(c)]) witness.ranking.push_back(c);
            out.ballots.assign(query.coalition.size(), witness);
        }
    } catch (const StvSearch::BudgetStop&) {
        out.verdict = Verdict::BudgetExhausted;
        out.stats.decided = false;
    }
    out.stats.nodes = search.nodes();
    out.stats.elapsed = Clock::now() - t0;
    if (out.verdict == Verdict::Found) replay_ranking(query, out.ballots, "stv_constructive");
    return out;
}

ManipulationOutcome brute_force_manipulate(Rule rule, const ManipulationQuery& query,
                                           BallotMode mode) {
    check_coalition(query);
    const int m = profile_m(query.fixed);
    check_target(query, m);
    if (m > 6) throw TooLargeError("brute force caps candidates at 6");

    const std::size_t k = query.coalition.size();
    const auto t0 = Clock::now();
    ManipulationOutcome out;

    const auto advance = [](std::vector<std::size_t>& idx, std::size_t radix) {
        std::size_t pos = idx.size();
        while (pos-- > 0) {
            if (++idx[pos] < radix) return true;
            idx[pos] = 0;
        }
        return false;
    };
    const auto achieves = [&](Candidate winner) {
        return query.goal == Goal::Constructive ? winner == query.target
                                                : winner != query.target;
    };

    if (rule == Rule::Stv) {
        const Profile& fixed = ranking_fixed(query);
        core::require_valid(fixed);
        if (mode == BallotMode::Distinct && k > 3)
            throw TooLargeError("brute force caps distinct-ballot coalitions at 3");
        std::vector<Ballot> space;
        {
            Ballot b;
            b.ranking.resize(static_cast<std::size_t>(m));
            std::iota(b.ranking.begin(), b.ranking.end(), 0);
            do {
                space.push_back(b);
            } while (std::next_permutation(b.ranking.begin(), b.ranking.end()));
        }
        std::vector<std::size_t> idx(mode == BallotMode::Identical ? 1 : k, 0);
        std::vector<Ballot> ballots(k);
        bool found = false;
        do {
            if (mode == BallotMode::Identical) {
                ballots.assign(k, space[idx[0]]);
            } else {
                for (std::size_t i = 0; i < k; ++i) ballots[i] = space[idx[i]];
            }
            ++out.stats.nodes;
            const Candidate winner =
                rules::stv_outcome(combined_profile(query, ballots), query.policy).winner;
            if (achieves(winner)) {
                found = true;
                out.ballots = ballots;
                break;
            }
        } while (advance(idx, space.size()));
        out.verdict = found ? Verdict::Found : Verdict::Impossible;
    } else {
        const VetoProfile& fixed = veto_fixed(query);
        core::require_valid(fixed);
        if (k > 8) throw TooLargeError("brute force caps veto coalitions at 8");
        std::vector<std::size_t> idx(k, 0);
        std::vector<VetoBallot> vetoes(k);
        bool found = false;
        do {
            for (std::size_t i = 0; i < k; ++i)
                vetoes[i].vetoed = static_cast<Candidate>(idx[i]);
            ++out.stats.nodes;
            const Candidate winner =
                rules::veto_outcome(combined_veto_profile(query, vetoes), query.policy).winner;
            if (achieves(winner)) {
                found = true;
                out.vetoes = vetoes;
                break;
            }
        } while (advance(idx, static_cast<std::size_t>(m)));
        out.verdict = found ? Verdict::Found : Verdict::Impossible;
    }
    out.stats.decided = true;
    out.stats.elapsed = Clock::now() - t0;
    return out;
}

ManipulationOutcome veto_constructive_weighted(const ManipulationQuery& query) {
    const VetoProfile& fixed = veto_fixed(query);
    core::require_valid(fixed);
    check_target(query, fixed.m);
    check_coalition(query);
    if (query.goal != Goal::Constructive)
        throw ConfigError("veto_constructive_weighted answers constructive queries only");

    const auto t0 = Clock::now();
    const int m = fixed.m;
    const Candidate p = query.target;
    const std::size_t k = query.coalition.size();
    ManipulationOutcome out;
    out.stats.decided = true;

    if (m == 1) {
        // The coalition has no choice and p is the only candidate.
        out.verdict = Verdict::Found;
        out.vetoes.assign(k, VetoBallot{0});
        out.stats.nodes = 1;
        out.stats.elapsed = Clock::now() - t0;
        replay_veto(query, out.vetoes, "veto_constructive_weighted");
        return out;
    }

    std::vector<Weight> f(static_cast<std::size_t>(m), 0);
    for (const auto& entry : fixed.entries)
        f[static_cast<std::size_t>(entry.veto.vetoed)] += entry.weight;

    // p wins iff every rival ends at strictly more vetoes than p, or ties and
    // loses the tie-break. The coalition never vetoes p (moving such a veto
    // elsewhere only helps), so each rival c must be lifted by at least d(c).
    std::vector<Weight> deficits(static_cast<std::size_t>(m), 0);
    for (Candidate c = 0; c < m; ++c) {
        if (c == p) continue;
        const Weight required =
            f[static_cast<std::size_t>(p)] + (query.policy.prefers(p, c) ? 0 : 1);
        deficits[static_cast<std::size_t>(c)] =
            std::max<Weight>(0, required - f[static_cast<std::size_t>(c)]);
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return query.coalition[a] > query.coalition[b];
    });
    std::vector<Weight> w_desc(k);
    for (std::size_t i = 0; i < k; ++i) w_desc[i] = query.coalition[order[i]];

    VetoBnb bnb(m, p, std::move(w_desc), std::move(deficits));
    const bool found = bnb.run();
    out.stats.nodes = bnb.nodes();
    if (found) {
        const Candidate leftover = p == 0 ? 1 : 0;
        out.verdict = Verdict::Found;
        out.vetoes.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            const Candidate c = bnb.assignment()[i];
            out.vetoes[order[i]] = VetoBallot{c < 0 ? leftover : c};
        }
    } else {
        out.verdict = Verdict::Impossible;
    }
    out.stats.elapsed = Clock::now() - t0;
    if (out.verdict == Verdict::Found) replay_veto(query, out.vetoes, "veto_constructive_weighted");
    return out;
}

ManipulationOutcome veto_destructive_weighted(const ManipulationQuery& query) {
    const VetoProfile& fixed = veto_fixed(query);
    core::require_valid(fixed);
    check_target(query, fixed.m);
    check_coalition(query);
    if (query.goal != Goal::Destructive)
        throw ConfigError("veto_destructive_weighted answers destructive queries only");

    const auto t0 = Clock::now();
    ManipulationOutcome out;
    out.stats.nodes = 1;
    out.stats.decided = true;

    if (fixed.m == 1) {
        out.verdict = Verdict::Impossible;
        out.stats.elapsed = Clock::now() - t0;
        return out;
    }

    // All-in on the target is optimal: it maximizes the target's count and
    // leaves every rival's untouched, so if any assignment defeats the target
    // this one does.
    std::vector<VetoBallot> vetoes(query.coalition.size(), VetoBallot{query.target});
    const auto tally = rules::veto_outcome(combined_veto_profile(query, vetoes), query.policy);
    if (tally.winner != query.target) {
        out.verdict = Verdict::Found;
        out.vetoes = std::move(vetoes);
    } else {
        out.verdict = Verdict::Impossible;
    }
    out.stats.elapsed = Clock::now() - t0;
    if (out.verdict == Verdict::Found) replay_veto(query, out.vetoes, "veto_destructive_weighted");
    return out;
}

}  // namespace maniplab::manipulation
