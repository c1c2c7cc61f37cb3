#pragma once

#include <optional>
#include <vector>

#include "maniplab/core.hpp"

namespace maniplab::generators {

// Urn counters overflowed (m! beyond 64 bits, or too much replacement mass).
struct OverflowError : core::Error {
    using Error::Error;
};

// Replacement count of the Polya-Eggenberger urn. a=0 reduces to impartial
// culture, a=1 to impartial anonymous culture.
struct UrnParams {
    long long a = 0;
};

// Left-to-right spatial order of candidates for single-peaked and
// single-troughed sampling. The default axis is the identity order.
struct Axis {
    std::vector<core::Candidate> order;

    static Axis identity(int m);
};

// n ballots drawn uniformly at random from all m! strict orders, weight 1 each.
core::Profile gen_impartial_culture(int m, int n, core::Seed seed);

// Sequential draws from an urn holding one copy of every one of the m! ballot
// types; each draw returns the drawn type plus `a` extra copies. Only drawn
// types are materialized; the untouched mass stays a single scalar.
core::Profile gen_urn(int m, int n, UrnParams params, core::Seed seed);

// Ballots single-peaked w.r.t. the axis: a uniform peak, then repeatedly the
// nearer unconsumed neighbour on a uniformly chosen side. Every single-peaked
// order is reachable; the distribution over them is not uniform.
core::Profile gen_single_peaked(int m, int n, core::Seed seed,
                                const std::optional<Axis>& axis = std::nullopt);

// Reverse of a single-peaked draw: the trough is the least-preferred candidate.
core::Profile gen_single_troughed(int m, int n, core::Seed seed,
                                  const std::optional<Axis>& axis = std::nullopt);

// O(m) interval check: walking the ballot from the top, every next candidate
// must extend the axis interval covered so far by exactly one position.
bool is_single_peaked(const core::Ballot& ballot, const Axis& axis);

}  // namespace maniplab::generators
