#include "maniplab/rules.hpp"

#include <algorithm>

namespace maniplab::rules {

using core::Candidate;
using core::Weight;

StvTrace stv_outcome(const core::Profile& profile, const core::TieBreakPolicy& policy) {
    if (profile.m == 0) throw EmptyCandidateSetError();
    core::require_valid(profile);
    const Weight total = profile.total_weight();
    if (total == 0) throw EmptyProfileError();

    const int m = profile.m;
    std::vector<char> alive(static_cast<std::size_t>(m), 1);
    // Per-entry cursor into the ranking: position of the current top survivor.
    std::vector<std::size_t> top(profile.entries.size(), 0);
    int alive_count = m;

    StvTrace trace;
    for (;;) {
        std::vector<Weight> tally(static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < profile.entries.size(); ++i) {
            const auto& entry = profile.entries[i];
            while (!alive[static_cast<std::size_t>(entry.ballot.ranking[top[i]])]) ++top[i];
            tally[static_cast<std::size_t>(entry.ballot.ranking[top[i]])] += entry.weight;
        }

        RoundRecord round;
        for (Candidate c = 0; c < m; ++c)
            if (alive[static_cast<std::size_t>(c)])
                round.tallies.emplace_back(c, tally[static_cast<std::size_t>(c)]);

        // Strict majority check before any elimination; a sole survivor always
        // holds the full weight.
        Candidate winner = -1;
        for (const auto& [c, w] : round.tallies) {
            if (2 * w > total) winner = c;
        }
        if (winner < 0 && alive_count == 1) winner = round.tallies.front().first;
        if (winner >= 0) {
            trace.rounds.push_back(std::move(round));
            trace.winner = winner;
            return trace;
        }

        Weight least = round.tallies.front().second;
        for (const auto& [c, w] : round.tallies) least = std::min(least, w);
        std::vector<Candidate> tied;
        for (const auto& [c, w] : round.tallies)
            if (w == least) tied.push_back(c);
        Candidate eliminated = core::break_tie(tied, policy);

        round.eliminated = eliminated;
        trace.rounds.push_back(std::move(round));
        alive[static_cast<std::size_t>(eliminated)] = 0;
        --alive_count;
    }
}

VetoTally veto_outcome(const core::VetoProfile& profile, const core::TieBreakPolicy& policy) {
    if (profile.m == 0) throw EmptyCandidateSetError();
    core::require_valid(profile);

    VetoTally result;
    result.vetoes.assign(static_cast<std::size_t>(profile.m), 0);
    for (const auto& entry : profile.entries)
        result.vetoes[static_cast<std::size_t>(entry.veto.vetoed)] += entry.weight;

    Weight least = result.vetoes.front();
    for (Weight w : result.vetoes) least = std::min(least, w);
    std::vector<Candidate> tied;
    for (Candidate c = 0; c < profile.m; ++c)
        if (result.vetoes[static_cast<std::size_t>(c)] == least) tied.push_back(c);
    result.winner = core::break_tie(tied, policy);
    return result;
}

core::VetoProfile to_veto_profile(const core::Profile& profile) {
    core::require_valid(profile);
    if (profile.m == 0 && !profile.entries.empty()) throw EmptyCandidateSetError();
    core::VetoProfile out;
    out.m = profile.m;
    out.entries.reserve(profile.entries.size());
    for (const auto& entry : profile.entries)
        out.entries.push_back({core::VetoBallot{entry.ballot.ranking.back()}, entry.weight});
    return out;
}

}  // namespace maniplab::rules
