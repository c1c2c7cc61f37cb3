#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace maniplab::core {

// Candidates are dense integer indices in [0, m). Names, if any, live in I/O
// layers only.
using Candidate = int;
using Weight = std::int64_t;
using Seed = std::uint64_t;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_no);
    int line = 0;
};

// Invalid arguments or configuration (bad flags, malformed queries, ...).
struct ConfigError : Error {
    using Error::Error;
};

// An exhaustive routine was asked to run beyond its enforced size limits.
struct TooLargeError : Error {
    using Error::Error;
};

// A strict total order over all m candidates, most preferred first.
struct Ballot {
    std::vector<Candidate> ranking;
    auto operator<=>(const Ballot&) const = default;
};

struct VetoBallot {
    Candidate vetoed = 0;
    auto operator<=>(const VetoBallot&) const = default;
};

struct WeightedBallot {
    Ballot ballot;
    Weight weight = 1;
    bool operator==(const WeightedBallot&) const = default;
};

struct VetoEntry {
    VetoBallot veto;
    Weight weight = 1;
    bool operator==(const VetoEntry&) const = default;
};

// A weighted multiset of ballots. Entry order carries no meaning (anonymity);
// weights are positive integers.
struct Profile {
    int m = 0;
    std::vector<WeightedBallot> entries;

    Weight total_weight() const;
    bool operator==(const Profile&) const = default;
};

struct VetoProfile {
    int m = 0;
    std::vector<VetoEntry> entries;

    Weight total_weight() const;
    bool operator==(const VetoProfile&) const = default;
};

enum class BallotFault { None, DuplicateCandidate, MissingCandidate, OutOfRange };

struct BallotCheck {
    BallotFault fault = BallotFault::None;
    Candidate offender = -1;

    bool ok() const { return fault == BallotFault::None; }
};

// Checks that `ballot` is a permutation of 0..m-1. On failure the returned
// check names the offending candidate index.
BallotCheck validate_ballot(const Ballot& ballot, int m);

std::string describe(const BallotCheck& check);

// Throws ConfigError if any entry is invalid or any weight is not positive.
void require_valid(const Profile& profile);
void require_valid(const VetoProfile& profile);

// Deterministic tie-break rule. LexMin selects the smallest candidate index,
// LexMax the largest, FixedOrder the earliest in a given preference order.
struct TieBreakPolicy {
    enum class Kind { LexMin, LexMax, FixedOrder };

    Kind kind = Kind::LexMin;
    std::vector<Candidate> order;  // FixedOrder only; earlier entries are selected first

    static TieBreakPolicy lex_min() { return {}; }
    static TieBreakPolicy lex_max() { return {Kind::LexMax, {}}; }
    static TieBreakPolicy fixed_order(std::vector<Candidate> order);

    // True if the policy selects a over b when both are tied.
    bool prefers(Candidate a, Candidate b) const;

    bool operator==(const TieBreakPolicy&) const = default;
};

// Returns the policy-selected member of a nonempty tied set.
// Throws ConfigError on an empty set or, for FixedOrder, on a candidate
// missing from the order.
Candidate break_tie(std::span<const Candidate> tied, const TieBreakPolicy& policy);

// ---------------------------------------------------------------------------
// Profile text format (UTF-8, LF):
//   line 1:      m=<int> n=<int>          (n = total weight)
//   ranking row: <weight>: c0>c1>...>c(m-1)
//   veto row:    <weight>: veto c
//   comments start with '#'; blank lines are ignored.
// A file mixes ranking and veto rows never; n must equal the weight sum.
// ---------------------------------------------------------------------------

using AnyProfile = std::variant<Profile, VetoProfile>;

AnyProfile read_profile_text(std::string_view text);

// Convenience wrappers; a file with zero entries satisfies either kind.
Profile read_ranking_profile(std::string_view text);
VetoProfile read_veto_profile(std::string_view text);

std::string write_profile_text(const Profile& profile);
std::string write_profile_text(const VetoProfile& profile);

std::string format_ballot(const Ballot& ballot);

}  // namespace maniplab::core
