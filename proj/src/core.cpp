#include "maniplab/core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "maniplab/rng.hpp"

namespace maniplab::core {

ParseError::ParseError(const std::string& msg, int line_no)
    : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}

Weight Profile::total_weight() const {
    Weight total = 0;
    for (const auto& entry : entries) total += entry.weight;
    return total;
}

Weight VetoProfile::total_weight() const {
    Weight total = 0;
    for (const auto& entry : entries) total += entry.weight;
    return total;
}

BallotCheck validate_ballot(const Ballot& ballot, int m) {
    std::vector<char> seen(static_cast<std::size_t>(m > 0 ? m : 0), 0);
    for (Candidate c : ballot.ranking) {
        if (c < 0 || c >= m) return {BallotFault::OutOfRange, c};
        if (seen[static_cast<std::size_t>(c)]) return {BallotFault::DuplicateCandidate, c};
        seen[static_cast<std::size_t>(c)] = 1;
    }
    for (Candidate c = 0; c < m; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) return {BallotFault::MissingCandidate, c};
    }
    return {};
}

std::string describe(const BallotCheck& check) {
    switch (check.fault) {
        case BallotFault::None: return "ok";
        case BallotFault::DuplicateCandidate:
            return "duplicate candidate " + std::to_string(check.offender);
        case BallotFault::MissingCandidate:
            return "missing candidate " + std::to_string(check.offender);
        case BallotFault::OutOfRange:
            return "candidate " + std::to_string(check.offender) + " out of range";
    }
    return "ok";
}

void require_valid(const Profile& profile) {
    if (profile.m < 0) throw ConfigError("negative candidate count");
    for (const auto& entry : profile.entries) {
        if (entry.weight <= 0) throw ConfigError("ballot weight must be positive");
        BallotCheck check = validate_ballot(entry.ballot, profile.m);
        if (!check.ok()) throw ConfigError("invalid ballot: " + describe(check));
    }
}

void require_valid(const VetoProfile& profile) {
    if (profile.m < 0) throw ConfigError("negative candidate count");
    for (const auto& entry : profile.entries) {
        if (entry.weight <= 0) throw ConfigError("veto weight must be positive");
        if (entry.veto.vetoed < 0 || entry.veto.vetoed >= profile.m)
            throw ConfigError("vetoed candidate " + std::to_string(entry.veto.vetoed) +
                              " out of range");
    }
}

TieBreakPolicy TieBreakPolicy::fixed_order(std::vector<Candidate> order) {
    TieBreakPolicy policy;
    policy.kind = Kind::FixedOrder;
    policy.order = std::move(order);
    return policy;
}

bool TieBreakPolicy::prefers(Candidate a, Candidate b) const {
    switch (kind) {
        case Kind::LexMin: return a < b;
        case Kind::LexMax: return a > b;
        case Kind::FixedOrder: {
            for (Candidate c : order) {
                if (c == a) return true;
                if (c == b) return false;
            }
            throw ConfigError("tie-break order does not cover candidates " +
                              std::to_string(a) + ", " + std::to_string(b));
        }
    }
    throw ConfigError("invalid tie-break policy");
}

Candidate break_tie(std::span<const Candidate> tied, const TieBreakPolicy& policy) {
    if (tied.empty()) throw ConfigError("break_tie on empty set");
    Candidate best = tied.front();
    for (std::size_t i = 1; i < tied.size(); ++i) {
        if (policy.prefers(tied[i], best)) best = tied[i];
    }
    return best;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

long long parse_int(std::string_view token, int line_no, const char* what) {
    token = trim(token);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(std::string("bad ") + what + " '" + std::string(token) + "'", line_no);
    return value;
}

}  // namespace

AnyProfile read_profile_text(std::string_view text) {
    int m = -1;
    Weight declared_n = -1;
    bool header_seen = false;
    bool saw_ranking = false;
    bool saw_veto = false;
    Profile rankings;
    VetoProfile vetoes;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos
                                                                               : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (!header_seen) {
            // m=<int> n=<int>
            std::size_t space = line.find(' ');
            if (space == std::string_view::npos || line.substr(0, 2) != "m=" ||
                trim(line.substr(space)).substr(0, 2) != "n=")
                throw ParseError("expected header 'm=<int> n=<int>'", line_no);
            m = static_cast<int>(parse_int(line.substr(2, space - 2), line_no, "candidate count"));
            declared_n = parse_int(trim(line.substr(space)).substr(2), line_no, "agent count");
            if (m < 0) throw ParseError("candidate count must be nonnegative", line_no);
            if (declared_n < 0) throw ParseError("agent count must be nonnegative", line_no);
            header_seen = true;
            rankings.m = m;
            vetoes.m = m;
            continue;
        }

        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            throw ParseError("expected '<weight>: <ballot>'", line_no);
        Weight weight = parse_int(line.substr(0, colon), line_no, "weight");
        if (weight <= 0) throw ParseError("weight must be positive", line_no);
        std::string_view body = trim(line.substr(colon + 1));

        if (body.substr(0, 5) == "veto ") {
            if (saw_ranking) throw ParseError("veto row in a ranking profile", line_no);
            saw_veto = true;
            Candidate c =
                static_cast<Candidate>(parse_int(body.substr(5), line_no, "vetoed candidate"));
            if (c < 0 || c >= m)
                throw ParseError("vetoed candidate " + std::to_string(c) + " out of range",
                                 line_no);
            vetoes.entries.push_back({VetoBallot{c}, weight});
        } else {
            if (saw_veto) throw ParseError("ranking row in a veto profile", line_no);
            saw_ranking = true;
            Ballot ballot;
            std::size_t start = 0;
            while (start <= body.size()) {
                std::size_t sep = body.find('>', start);
                std::string_view token =
                    body.substr(start, sep == std::string_view::npos ? body.size() - start
                                                                     : sep - start);
                ballot.ranking.push_back(
                    static_cast<Candidate>(parse_int(token, line_no, "candidate")));
                if (sep == std::string_view::npos) break;
                start = sep + 1;
            }
            BallotCheck check = validate_ballot(ballot, m);
            if (!check.ok()) throw ParseError("invalid ballot: " + describe(check), line_no);
            rankings.entries.push_back({std::move(ballot), weight});
        }
    }

    if (!header_seen) throw ParseError("missing 'm=<int> n=<int>' header", 1);
    Weight total = saw_veto ? vetoes.total_weight() : rankings.total_weight();
    if (total != declared_n)
        throw ParseError("header declares n=" + std::to_string(declared_n) +
                             " but weights sum to " + std::to_string(total),
                         line_no);
    if (saw_veto) return vetoes;
    return rankings;
}

Profile read_ranking_profile(std::string_view text) {
    AnyProfile any = read_profile_text(text);
    if (auto* p = std::get_if<Profile>(&any)) return std::move(*p);
    const auto& v = std::get<VetoProfile>(any);
    if (v.entries.empty()) return Profile{v.m, {}};
    throw ConfigError("expected a ranking profile but file holds veto ballots");
}

VetoProfile read_veto_profile(std::string_view text) {
    AnyProfile any = read_profile_text(text);
    if (auto* v = std::get_if<VetoProfile>(&any)) return std::move(*v);
    const auto& p = std::get<Profile>(any);
    if (p.entries.empty()) return VetoProfile{p.m, {}};
    throw ConfigError("expected a veto profile but file holds ranking ballots");
}

std::string format_ballot(const Ballot& ballot) {
    std::string out;
    for (std::size_t i = 0; i < ballot.ranking.size(); ++i) {
        if (i) out += '>';
        out += std::to_string(ballot.ranking[i]);
    }
    return out;
}

std::string write_profile_text(const Profile& profile) {
    std::string out = "m=" + std::to_string(profile.m) +
                      " n=" + std::to_string(profile.total_weight()) + "\n";
    for (const auto& entry : profile.entries)
        out += std::to_string(entry.weight) + ": " + format_ballot(entry.ballot) + "\n";
    return out;
}

std::string write_profile_text(const VetoProfile& profile) {
    std::string out = "m=" + std::to_string(profile.m) +
                      " n=" + std::to_string(profile.total_weight()) + "\n";
    for (const auto& entry : profile.entries)
        out += std::to_string(entry.weight) + ": veto " + std::to_string(entry.veto.vetoed) +
               "\n";
    return out;
}

}  // namespace maniplab::core

namespace maniplab::core {

std::uint64_t Rng::next_below(std::uint64_t bound) {
    if (bound == 0) throw ConfigError("next_below(0)");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

Ballot Rng::next_ballot(int m) {
    Ballot ballot;
    ballot.ranking.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) ballot.ranking[static_cast<std::size_t>(i)] = i;
    shuffle(ballot.ranking);
    return ballot;
}

}  // namespace maniplab::core
