#include "maniplab/generators.hpp"

#include <algorithm>
#include <map>

#include "maniplab/rng.hpp"

namespace maniplab::generators {

using core::Ballot;
using core::Candidate;
using core::Profile;
using core::Rng;

namespace {

void check_mn(int m, int n) {
    if (m < 1) throw core::ConfigError("need at least one candidate");
    if (n < 0) throw core::ConfigError("agent count must be nonnegative");
}

std::uint64_t factorial_u64(int m) {
    // 20! is the last factorial below 2^64.
    if (m > 20) throw OverflowError("m! exceeds the urn counter range (m > 20)");
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

}  // namespace

Axis Axis::identity(int m) {
    Axis axis;
    axis.order.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) axis.order[static_cast<std::size_t>(i)] = i;
    return axis;
}

Profile gen_impartial_culture(int m, int n, core::Seed seed) {
    check_mn(m, n);
    Rng rng(seed);
    Profile profile;
    profile.m = m;
    profile.entries.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) profile.entries.push_back({rng.next_ballot(m), 1});
    return profile;
}

Profile gen_urn(int m, int n, UrnParams params, core::Seed seed) {
    check_mn(m, n);
    if (params.a < 0) throw core::ConfigError("urn replacement count must be nonnegative");
    const std::uint64_t a = static_cast<std::uint64_t>(params.a);

    Rng rng(seed);
    Profile profile;
    profile.m = m;
    profile.entries.reserve(static_cast<std::size_t>(n));

    // Urn state: total mass, plus per drawn type its current copy count. Types
    // never drawn stay aggregated in fresh_mass = m! - |drawn|.
    std::uint64_t total = factorial_u64(m);
    std::uint64_t fresh_mass = total;
    std::map<Ballot, std::uint64_t> drawn;

    for (int i = 0; i < n; ++i) {
        std::uint64_t u = rng.next_below(total);
        Ballot picked;
        if (u < fresh_mass) {
            // Conditioned on landing in the untouched mass, the type is
            // uniform over the not-yet-drawn orders; rejection sampling
            // against the drawn set realizes exactly that.
            do {
                picked = rng.next_ballot(m);
            } while (drawn.count(picked));
            drawn.emplace(picked, 1 + a);
            --fresh_mass;
        } else {
            std::uint64_t cursor = u - fresh_mass;
            auto it = drawn.begin();
            while (cursor >= it->second) {
                cursor -= it->second;
                ++it;
            }
            picked = it->first;
            it->second += a;
        }
        std::uint64_t new_total;
        if (__builtin_add_overflow(total, a, &new_total))
            throw OverflowError("urn mass exceeds the counter range");
        total = new_total;
        profile.entries.push_back({std::move(picked), 1});
    }
    return profile;
}

namespace {

Ballot single_peaked_walk(int m, Rng& rng, const Axis& axis) {
    // Walk outward from a uniform peak along axis positions.
    int peak = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    Ballot ballot;
    ballot.ranking.reserve(static_cast<std::size_t>(m));
    int left = peak - 1;
    int right = peak + 1;
    ballot.ranking.push_back(axis.order[static_cast<std::size_t>(peak)]);
    while (left >= 0 || right < m) {
        bool take_left;
        if (left < 0)
            take_left = false;
        else if (right >= m)
            take_left = true;
        else
            take_left = rng.next_bool();
        if (take_left)
            ballot.ranking.push_back(axis.order[static_cast<std::size_t>(left--)]);
        else
            ballot.ranking.push_back(axis.order[static_cast<std::size_t>(right++)]);
    }
    return ballot;
}

const Axis& resolve_axis(int m, const std::optional<Axis>& axis, Axis& storage) {
    if (!axis) {
        storage = Axis::identity(m);
        return storage;
    }
    Ballot as_ballot{axis->order};
    core::BallotCheck check = core::validate_ballot(as_ballot, m);
    if (!check.ok()) throw core::ConfigError("invalid axis: " + core::describe(check));
    return *axis;
}

}  // namespace

Profile gen_single_peaked(int m, int n, core::Seed seed, const std::optional<Axis>& axis) {
    check_mn(m, n);
    Axis storage;
    const Axis& ax = resolve_axis(m, axis, storage);
    Rng rng(seed);
    Profile profile;
    profile.m = m;
    for (int i = 0; i < n; ++i) profile.entries.push_back({single_peaked_walk(m, rng, ax), 1});
    return profile;
}

Profile gen_single_troughed(int m, int n, core::Seed seed, const std::optional<Axis>& axis) {
    check_mn(m, n);
    Axis storage;
    const Axis& ax = resolve_axis(m, axis, storage);
    Rng rng(seed);
    Profile profile;
    profile.m = m;
    for (int i = 0; i < n; ++i) {
        Ballot ballot = single_peaked_walk(m, rng, ax);
        std::reverse(ballot.ranking.begin(), ballot.ranking.end());
        profile.entries.push_back({std::move(ballot), 1});
    }
    return profile;
}

bool is_single_peaked(const Ballot& ballot, const Axis& axis) {
    const int m = static_cast<int>(axis.order.size());
    Ballot as_ballot{axis.order};
    if (!core::validate_ballot(as_ballot, m).ok()) return false;
    if (!core::validate_ballot(ballot, m).ok()) return false;
    std::vector<int> pos(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(axis.order[static_cast<std::size_t>(i)])] = i;
    if (m == 0) return true;
    int lo = pos[static_cast<std::size_t>(ballot.ranking.front())];
    int hi = lo;
    for (std::size_t k = 1; k < ballot.ranking.size(); ++k) {
        int p = pos[static_cast<std::size_t>(ballot.ranking[k])];
        if (p == lo - 1)
            lo = p;
        else if (p == hi + 1)
            hi = p;
        else
            return false;
    }
    return true;
}

}  // namespace maniplab::generators
