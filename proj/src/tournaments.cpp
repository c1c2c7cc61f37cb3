#include "maniplab/tournaments.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace maniplab::tournaments {

using core::ConfigError;
using core::ParseError;

namespace {

constexpr int kInf = INT_MAX / 2;

int to_int(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError("expected an integer, got `" + s + "`", line_no);
    }
}

double to_double(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError("expected a probability, got `" + s + "`", line_no);
    }
}

void require_valid_bracket(const Bracket& bracket) {
    const int t = bracket.t();
    if (t < 1 || (t & (t - 1)) != 0) throw NotPowerOfTwoError();
    std::vector<char> seen(static_cast<std::size_t>(t), 0);
    for (Team x : bracket.leaves) {
        if (x < 0 || x >= t) throw ConfigError("bracket leaf out of range");
        if (seen[static_cast<std::size_t>(x)]) throw ConfigError("bracket repeats a team");
        seen[static_cast<std::size_t>(x)] = 1;
    }
}

void check_instance(const BeatsModel& model, const Coalition& coalition) {
    require_valid(model);
    for (Team x : coalition.members)
        if (x < 0 || x >= model.t) throw ConfigError("coalition member out of range");
}

void check_target(const BeatsModel& model, Team target) {
    if (target < 0 || target >= model.t) throw ConfigError("target team out of range");
}

void check_bracket(const Bracket& bracket, const BeatsModel& model) {
    require_valid_bracket(bracket);
    if (bracket.t() != model.t) throw ConfigError("bracket and model disagree on the team count");
}

bool achievable_win(const BeatsModel& model, const Coalition& coalition, Team x, Team y) {
    return model.winner_of(x, y) == x || coalition.contains(y);
}

// Successive shortest augmenting paths; costs are nonnegative here, so plain
// label-correcting search suffices at these sizes.
class MinCostFlow {
  public:
    explicit MinCostFlow(int n) : adj_(static_cast<std::size_t>(n)) {}

    int add_edge(int u, int v, int cap, int cost) {
        adj_[static_cast<std::size_t>(u)].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({v, cap, cost});
        adj_[static_cast<std::size_t>(v)].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({u, 0, -cost});
        return static_cast<int>(edges_.size()) - 2;
    }

    // Returns (max flow, min cost of that flow).
    std::pair<int, int> run(int s, int t) {
        int flow = 0;
        int total_cost = 0;
        const int n = static_cast<int>(adj_.size());
        for (;;) {
            std::vector<int> dist(static_cast<std::size_t>(n), kInf);
            std::vector<int> pre(static_cast<std::size_t>(n), -1);
            std::vector<char> inq(static_cast<std::size_t>(n), 0);
            std::deque<int> queue{s};
            dist[static_cast<std::size_t>(s)] = 0;
            inq[static_cast<std::size_t>(s)] = 1;
            while (!queue.empty()) {
                const int u = queue.front();
                queue.pop_front();
                inq[static_cast<std::size_t>(u)] = 0;
                for (int id : adj_[static_cast<std::size_t>(u)]) {
                    const Edge& e = edges_[static_cast<std::size_t>(id)];
                    if (e.cap > 0 && dist[static_cast<std::size_t>(u)] + e.cost <
                                         dist[static_cast<std::size_t>(e.to)]) {
                        dist[static_cast<std::size_t>(e.to)] =
                            dist[static_cast<std::size_t>(u)] + e.cost;
                        pre[static_cast<std::size_t>(e.to)] = id;
                        if (!inq[static_cast<std::size_t>(e.to)]) {
                            inq[static_cast<std::size_t>(e.to)] = 1;
                            queue.push_back(e.to);
                        }
                    }
                }
            }
            if (dist[static_cast<std::size_t>(t)] >= kInf) break;
            int aug = kInf;
            for (int v = t; v != s;) {
                const int id = pre[static_cast<std::size_t>(v)];
                aug = std::min(aug, edges_[static_cast<std::size_t>(id)].cap);
                v = edges_[static_cast<std::size_t>(id ^ 1)].to;
            }
            for (int v = t; v != s;) {
                const int id = pre[static_cast<std::size_t>(v)];
                edges_[static_cast<std::size_t>(id)].cap -= aug;
                edges_[static_cast<std::size_t>(id ^ 1)].cap += aug;
                v = edges_[static_cast<std::size_t>(id ^ 1)].to;
            }
            flow += aug;
            total_cost += aug * dist[static_cast<std::size_t>(t)];
        }
        return {flow, total_cost};
    }

    bool saturated(int id) const { return edges_[static_cast<std::size_t>(id)].cap == 0; }

  private:
    struct Edge {
        int to;
        int cap;
        int cost;
    };
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

bool rival_ok(int score, int target_score, Team rival, Team target,
              const std::optional<core::TieBreakPolicy>& tie_break) {
    if (score < target_score) return true;
    return score == target_score && tie_break && tie_break->prefers(target, rival);
}

void assert_rr_witness(const BeatsModel& model, const Coalition& coalition, Team target,
                       const std::optional<core::TieBreakPolicy>& tie_break,
                       const RrWitness& witness) {
    std::map<std::pair<Team, Team>, Team> overrides;
    for (const GameOutcome& g : witness.outcomes) {
        const Team hw = model.winner_of(g.a, g.b);
        if (!coalition.contains(hw))
            throw std::logic_error("rr witness touches a game nobody can throw");
        if (g.winner != g.a && g.winner != g.b)
            throw std::logic_error("rr witness names a third-party winner");
        overrides[{g.a, g.b}] = g.winner;
    }
    std::vector<int> score(static_cast<std::size_t>(model.t), 0);
    for (Team i = 0; i < model.t; ++i)
        for (Team j = i + 1; j < model.t; ++j) {
            const auto it = overrides.find({i, j});
            const Team w = it != overrides.end() ? it->second : model.winner_of(i, j);
            ++score[static_cast<std::size_t>(w)];
        }
    for (Team c = 0; c < model.t; ++c) {
        if (c == target) continue;
        if (!rival_ok(score[static_cast<std::size_t>(c)],
                      score[static_cast<std::size_t>(target)], c, target, tie_break))
            throw std::logic_error("rr witness fails to hand the target the title");
    }
}

}  // namespace

void require_valid(const BeatsModel& model) {
    const auto t = static_cast<std::size_t>(model.t);
    if (model.t < 1) throw ConfigError("team count must be positive");
    if (model.beats.size() != t) throw ConfigError("result matrix must be t x t");
    for (const auto& row : model.beats)
        if (row.size() != t) throw ConfigError("result matrix must be t x t");
    for (std::size_t i = 0; i < t; ++i) {
        if (model.beats[i][i]) throw ConfigError("teams do not play themselves");
        for (std::size_t j = i + 1; j < t; ++j)
            if (static_cast<bool>(model.beats[i][j]) == static_cast<bool>(model.beats[j][i]))
                throw ConfigError("results must pick exactly one winner per pair");
    }
    if (!model.prob.empty()) {
        if (model.prob.size() != t) throw ConfigError("probability matrix must be t x t");
        for (const auto& row : model.prob)
            if (row.size() != t) throw ConfigError("probability matrix must be t x t");
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = i + 1; j < t; ++j) {
                const double p = model.prob[i][j];
                const double q = model.prob[j][i];
                if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
                    throw ConfigError("probabilities must lie in [0, 1]");
                if (std::abs(p + q - 1.0) > 1e-9)
                    throw ConfigError("probabilities must be complementary per pair");
            }
    }
}

Bracket Bracket::seeded(std::vector<Team> leaves) {
    Bracket bracket{std::move(leaves)};
    require_valid_bracket(bracket);
    return bracket;
}

Bracket Bracket::standard(int t) {
    std::vector<Team> leaves(static_cast<std::size_t>(std::max(t, 0)));
    for (int i = 0; i < t; ++i) leaves[static_cast<std::size_t>(i)] = i;
    return seeded(std::move(leaves));
}

std::vector<std::set<Team>> cup_possible_winners(const Bracket& bracket, const BeatsModel& model,
                                                 const Coalition& coalition) {
    check_instance(model, coalition);
    check_bracket(bracket, model);
    const int t = bracket.t();
    std::vector<std::set<Team>> sets(static_cast<std::size_t>(2 * t));
    for (int i = 0; i < t; ++i)
        sets[static_cast<std::size_t>(t + i)].insert(bracket.leaves[static_cast<std::size_t>(i)]);
    for (int v = t - 1; v >= 1; --v) {
        for (Team x : sets[static_cast<std::size_t>(2 * v)])
            for (Team y : sets[static_cast<std::size_t>(2 * v + 1)]) {
                if (achievable_win(model, coalition, x, y))
                    sets[static_cast<std::size_t>(v)].insert(x);
                if (achievable_win(model, coalition, y, x))
                    sets[static_cast<std::size_t>(v)].insert(y);
            }
    }
    return sets;
}

bool cup_can_win(const Bracket& bracket, const BeatsModel& model, const Coalition& coalition,
                 Team target) {
    check_target(model, target);
    const auto sets = cup_possible_winners(bracket, model, coalition);
    return sets[1].count(target) != 0;
}

std::optional<int> cup_min_throws(const Bracket& bracket, const BeatsModel& model,
                                  const Coalition& coalition, Team target) {
    check_instance(model, coalition);
    check_bracket(bracket, model);
    check_target(model, target);
    const int t = bracket.t();
    std::vector<std::vector<int>> cost(static_cast<std::size_t>(2 * t),
                                       std::vector<int>(static_cast<std::size_t>(t), kInf));
    for (int i = 0; i < t; ++i)
        cost[static_cast<std::size_t>(t + i)]
            [static_cast<std::size_t>(bracket.leaves[static_cast<std::size_t>(i)])] = 0;
    for (int v = t - 1; v >= 1; --v) {
        const auto& left = cost[static_cast<std::size_t>(2 * v)];
        const auto& right = cost[static_cast<std::size_t>(2 * v + 1)];
        auto& here = cost[static_cast<std::size_t>(v)];
        for (Team x = 0; x < t; ++x) {
            if (left[static_cast<std::size_t>(x)] >= kInf) continue;
            for (Team y = 0; y < t; ++y) {
                if (right[static_cast<std::size_t>(y)] >= kInf) continue;
                const int base =
                    left[static_cast<std::size_t>(x)] + right[static_cast<std::size_t>(y)];
                if (achievable_win(model, coalition, x, y)) {
                    const int extra = model.winner_of(x, y) == y ? 1 : 0;
                    here[static_cast<std::size_t>(x)] =
                        std::min(here[static_cast<std::size_t>(x)], base + extra);
                }
                if (achievable_win(model, coalition, y, x)) {
                    const int extra = model.winner_of(x, y) == x ? 1 : 0;
                    here[static_cast<std::size_t>(y)] =
                        std::min(here[static_cast<std::size_t>(y)], base + extra);
                }
            }
        }
    }
    const int answer = cost[1][static_cast<std::size_t>(target)];
    if (answer >= kInf) return std::nullopt;
    return answer;
}

double cup_win_probability(const Bracket& bracket, const BeatsModel& model,
                           const Coalition& coalition, Team target, ThrowPolicy policy) {
    check_instance(model, coalition);
    check_bracket(bracket, model);
    check_target(model, target);
    if (!model.has_prob()) throw MissingProbabilitiesError();
    const int t = bracket.t();
    const auto q = [&](Team x, Team y) -> double {
        if (policy == ThrowPolicy::ThrowToTarget) {
            if (x == target && coalition.contains(y)) return 1.0;
            if (y == target && coalition.contains(x)) return 0.0;
        }
        return model.prob[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
    };
    std::vector<std::vector<double>> P(static_cast<std::size_t>(2 * t),
                                       std::vector<double>(static_cast<std::size_t>(t), 0.0));
    for (int i = 0; i < t; ++i)
        P[static_cast<std::size_t>(t + i)]
         [static_cast<std::size_t>(bracket.leaves[static_cast<std::size_t>(i)])] = 1.0;
    for (int v = t - 1; v >= 1; --v) {
        const auto& left = P[static_cast<std::size_t>(2 * v)];
        const auto& right = P[static_cast<std::size_t>(2 * v + 1)];
        auto& here = P[static_cast<std::size_t>(v)];
        for (Team x = 0; x < t; ++x) {
            double total = 0.0;
            if (left[static_cast<std::size_t>(x)] > 0.0) {
                double s = 0.0;
                for (Team y = 0; y < t; ++y)
                    if (right[static_cast<std::size_t>(y)] > 0.0)
                        s += right[static_cast<std::size_t>(y)] * q(x, y);
                total += left[static_cast<std::size_t>(x)] * s;
            }
            if (right[static_cast<std::size_t>(x)] > 0.0) {
                double s = 0.0;
                for (Team y = 0; y < t; ++y)
                    if (left[static_cast<std::size_t>(y)] > 0.0)
                        s += left[static_cast<std::size_t>(y)] * q(x, y);
                total += right[static_cast<std::size_t>(x)] * s;
            }
            here[static_cast<std::size_t>(x)] = total;
        }
    }
    return P[1][static_cast<std::size_t>(target)];
}

std::optional<RrWitness> rr_can_win(const BeatsModel& model, const Coalition& coalition,
                                    Team target,
                                    const std::optional<core::TieBreakPolicy>& tie_break) {
    check_instance(model, coalition);
    check_target(model, target);
    const int t = model.t;

    // Fix everything that is not a real choice: honest outcomes for
    // unthrowable games, and target-favorable outcomes for throwable games
    // the target plays in (extra target wins and fewer rival wins never hurt).
    std::vector<int> base(static_cast<std::size_t>(t), 0);
    int target_score = 0;
    std::vector<GameOutcome> outcomes;
    std::vector<std::pair<Team, Team>> free_games;
    std::vector<std::size_t> free_slot;
    for (Team i = 0; i < t; ++i)
        for (Team j = i + 1; j < t; ++j) {
            const Team hw = model.winner_of(i, j);
            const bool manip = coalition.contains(hw);
            if (i == target || j == target) {
                const Team other = i == target ? j : i;
                if (hw == target || manip) {
                    ++target_score;
                    if (manip) outcomes.push_back({i, j, target});
                } else {
                    ++base[static_cast<std::size_t>(other)];
                }
            } else if (manip) {
                free_slot.push_back(outcomes.size());
                outcomes.push_back({i, j, -1});
                free_games.emplace_back(i, j);
            } else {
                ++base[static_cast<std::size_t>(hw)];
            }
        }

    std::vector<int> cap(static_cast<std::size_t>(t), 0);
    for (Team c = 0; c < t; ++c) {
        if (c == target) continue;
        const int allowed =
            target_score - 1 + (tie_break && tie_break->prefers(target, c) ? 1 : 0);
        cap[static_cast<std::size_t>(c)] = allowed - base[static_cast<std::size_t>(c)];
        if (cap[static_cast<std::size_t>(c)] < 0) return std::nullopt;
    }

    // One unit per free game, routed to one of its two endpoints, within each
    // rival's remaining allowance.
    const int games = static_cast<int>(free_games.size());
    const int source = 0;
    const int game0 = 1;
    const int team0 = 1 + games;
    const int sink = team0 + t;
    MinCostFlow net(sink + 1);
    std::vector<std::pair<int, int>> game_edges(static_cast<std::size_t>(games));
    for (int g = 0; g < games; ++g) {
        net.add_edge(source, game0 + g, 1, 0);
        game_edges[static_cast<std::size_t>(g)] = {
            net.add_edge(game0 + g, team0 + free_games[static_cast<std::size_t>(g)].first, 1, 0),
            net.add_edge(game0 + g, team0 + free_games[static_cast<std::size_t>(g)].second, 1, 0)};
    }
    for (Team c = 0; c < t; ++c)
        if (c != target && cap[static_cast<std::size_t>(c)] > 0)
            net.add_edge(team0 + c, sink, cap[static_cast<std::size_t>(c)], 0);
    const auto [flow, cost] = net.run(source, sink);
    (void)cost;
    if (flow < games) return std::nullopt;

    RrWitness witness;
    witness.outcomes = std::move(outcomes);
    for (int g = 0; g < games; ++g) {
        const auto& [a_edge, b_edge] = game_edges[static_cast<std::size_t>(g)];
        (void)b_edge;
        witness.outcomes[free_slot[static_cast<std::size_t>(g)]].winner =
            net.saturated(a_edge) ? free_games[static_cast<std::size_t>(g)].first
                                  : free_games[static_cast<std::size_t>(g)].second;
    }
    assert_rr_witness(model, coalition, target, tie_break, witness);
    return witness;
}

std::optional<int> rr_min_throws(const BeatsModel& model, const Coalition& coalition, Team target,
                                 const std::optional<core::TieBreakPolicy>& tie_break) {
    check_instance(model, coalition);
    check_target(model, target);
    const int t = model.t;

    // The target never throws its own games. Games it loses honestly against a
    // coalition member may each be thrown (cost 1) — which ones matters, so
    // those subsets are enumerated; everything else reduces to a min-cost
    // assignment of the free games.
    std::vector<int> base0(static_cast<std::size_t>(t), 0);
    int honest_wins = 0;
    std::vector<Team> throwable;
    std::vector<std::pair<Team, Team>> free_games;
    for (Team i = 0; i < t; ++i)
        for (Team j = i + 1; j < t; ++j) {
            const Team hw = model.winner_of(i, j);
            if (i == target || j == target) {
                const Team other = i == target ? j : i;
                if (hw == target)
                    ++honest_wins;
                else if (coalition.contains(other))
                    throwable.push_back(other);
                else
                    ++base0[static_cast<std::size_t>(other)];
            } else if (coalition.contains(hw)) {
                free_games.emplace_back(i, j);
            } else {
                ++base0[static_cast<std::size_t>(hw)];
            }
        }
    if (throwable.size() > 20)
        throw core::TooLargeError("too many throwable target games to enumerate");

    const int games = static_cast<int>(free_games.size());
    std::optional<int> best;
    for (std::uint32_t mask = 0; mask < (1u << throwable.size()); ++mask) {
        const int thrown = std::popcount(mask);
        const int target_score = honest_wins + thrown;
        std::vector<int> base = base0;
        for (std::size_t idx = 0; idx < throwable.size(); ++idx)
            if (!((mask >> idx) & 1)) ++base[static_cast<std::size_t>(throwable[idx])];
        bool feasible = true;
        std::vector<int> cap(static_cast<std::size_t>(t), 0);
        for (Team c = 0; c < t; ++c) {
            if (c == target) continue;
            const int allowed =
                target_score - 1 + (tie_break && tie_break->prefers(target, c) ? 1 : 0);
            cap[static_cast<std::size_t>(c)] = allowed - base[static_cast<std::size_t>(c)];
            if (cap[static_cast<std::size_t>(c)] < 0) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        const int source = 0;
        const int game0 = 1;
        const int team0 = 1 + games;
        const int sink = team0 + t;
        MinCostFlow net(sink + 1);
        for (int g = 0; g < games; ++g) {
            const auto& [a, b] = free_games[static_cast<std::size_t>(g)];
            const Team hw = model.winner_of(a, b);
            net.add_edge(source, game0 + g, 1, 0);
            net.add_edge(game0 + g, team0 + a, 1, hw == a ? 0 : 1);
            net.add_edge(game0 + g, team0 + b, 1, hw == b ? 0 : 1);
        }
        for (Team c = 0; c < t; ++c)
            if (c != target && cap[static_cast<std::size_t>(c)] > 0)
                net.add_edge(team0 + c, sink, cap[static_cast<std::size_t>(c)], 0);
        const auto [flow, cost] = net.run(source, sink);
        if (flow < games) continue;
        const int total = thrown + cost;
        if (!best || total < *best) best = total;
    }
    return best;
}

BeatsModel read_beats_model(std::string_view text) {
    BeatsModel model;
    std::vector<std::vector<char>> have_beats;
    std::vector<std::vector<char>> have_prob;
    bool have_t = false;
    bool any_prob = false;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        if (!have_t) {
            if (toks.size() != 1)
                throw ParseError("expected the team count alone on the first line", line_no);
            model.t = to_int(toks[0], line_no);
            if (model.t < 1) throw ParseError("team count must be positive", line_no);
            const auto t = static_cast<std::size_t>(model.t);
            model.beats.assign(t, std::vector<char>(t, 0));
            model.prob.assign(t, std::vector<double>(t, 0.0));
            have_beats.assign(t, std::vector<char>(t, 0));
            have_prob.assign(t, std::vector<char>(t, 0));
            have_t = true;
            continue;
        }
        if (toks.size() != 3) throw ParseError("expected `i j winner` or `i j p`", line_no);
        const int i = to_int(toks[0], line_no);
        const int j = to_int(toks[1], line_no);
        if (i < 0 || i >= model.t || j < 0 || j >= model.t)
            throw ParseError("team index out of range", line_no);
        if (i == j) throw ParseError("teams do not play themselves", line_no);
        const auto si = static_cast<std::size_t>(i);
        const auto sj = static_cast<std::size_t>(j);
        if (toks[2].find_first_of(".eE") != std::string::npos) {
            const double p = to_double(toks[2], line_no);
            if (!(p >= 0.0 && p <= 1.0))
                throw ParseError("probability must lie in [0, 1]", line_no);
            if (have_prob[si][sj]) throw ParseError("duplicate probability line", line_no);
            model.prob[si][sj] = p;
            model.prob[sj][si] = 1.0 - p;
            have_prob[si][sj] = have_prob[sj][si] = 1;
            any_prob = true;
        } else {
            const int w = to_int(toks[2], line_no);
            if (w != i && w != j)
                throw ParseError("winner must be one of the two teams", line_no);
            if (have_beats[si][sj]) throw ParseError("duplicate result line", line_no);
            model.beats[static_cast<std::size_t>(w)][w == i ? sj : si] = 1;
            have_beats[si][sj] = have_beats[sj][si] = 1;
        }
    }
    if (!have_t) throw core::ParseError("team file is empty", 1);
    for (std::size_t i = 0; i < static_cast<std::size_t>(model.t); ++i)
        for (std::size_t j = i + 1; j < static_cast<std::size_t>(model.t); ++j) {
            if (!have_beats[i][j])
                throw ConfigError("missing result for teams " + std::to_string(i) + " and " +
                                  std::to_string(j));
            if (any_prob && !have_prob[i][j])
                throw ConfigError("probabilities must cover every pair or none");
        }
    if (!any_prob) model.prob.clear();
    require_valid(model);
    return model;
}

std::string write_beats_model(const BeatsModel& model) {
    require_valid(model);
    std::string out = std::to_string(model.t) + "\n";
    for (Team i = 0; i < model.t; ++i)
        for (Team j = i + 1; j < model.t; ++j)
            out += std::to_string(i) + " " + std::to_string(j) + " " +
                   std::to_string(model.winner_of(i, j)) + "\n";
    if (model.has_prob()) {
        char buf[64];
        for (Team i = 0; i < model.t; ++i)
            for (Team j = i + 1; j < model.t; ++j) {
                std::snprintf(buf, sizeof buf, "%d %d %.6f\n", i, j,
                              model.prob[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                out += buf;
            }
    }
    return out;
}

}  // namespace maniplab::tournaments
