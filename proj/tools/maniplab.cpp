// maniplab: command line front end for the election / tournament / matching lab.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "maniplab/core.hpp"
#include "maniplab/experiments.hpp"
#include "maniplab/generators.hpp"
#include "maniplab/manipulation.hpp"
#include "maniplab/matching.hpp"
#include "maniplab/rules.hpp"
#include "maniplab/tournaments.hpp"

namespace core = maniplab::core;
namespace rules = maniplab::rules;
namespace gen = maniplab::generators;
namespace manip = maniplab::manipulation;
namespace ex = maniplab::experiments;
namespace trn = maniplab::tournaments;
namespace mat = maniplab::matching;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw core::ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw core::ConfigError("cannot write " + path);
    out << text;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw core::ConfigError("bad " + what + " entry `" + item + "` in `" + text + "`");
        }
    }
    if (out.empty()) throw core::ConfigError(what + " list is empty");
    return out;
}

core::TieBreakPolicy parse_tie(const std::string& text) {
    if (text == "lexmin") return core::TieBreakPolicy::lex_min();
    if (text == "lexmax") return core::TieBreakPolicy::lex_max();
    const std::string prefix = "order:";
    if (text.rfind(prefix, 0) == 0) {
        return core::TieBreakPolicy::fixed_order(parse_int_list(text.substr(prefix.size()), "tie order"));
    }
    throw core::ConfigError("unknown tie-break `" + text + "` (expected lexmin, lexmax or order:<perm>)");
}

ex::Distribution parse_dist(const std::string& name, long long urn_a, const std::string& in_path) {
    if (name == "ic") return ex::Distribution::ic();
    if (name == "urn") return ex::Distribution::urn(urn_a);
    if (name == "sp" || name == "single-peaked") return ex::Distribution::single_peaked();
    if (name == "st" || name == "single-troughed") return ex::Distribution::single_troughed();
    if (name == "file") {
        if (in_path.empty()) throw core::ConfigError("--dist file requires --in <path>");
        return ex::Distribution::file(in_path);
    }
    throw core::ConfigError("unknown distribution `" + name + "` (expected ic, urn, sp, st or file)");
}

manip::Rule parse_rule(const std::string& name) {
    if (name == "stv") return manip::Rule::Stv;
    if (name == "veto") return manip::Rule::Veto;
    throw core::ConfigError("unknown rule `" + name + "` (expected stv or veto)");
}

std::string verdict_name(manip::Verdict v) {
    switch (v) {
        case manip::Verdict::Found: return "found";
        case manip::Verdict::Impossible: return "impossible";
        case manip::Verdict::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
}

core::Profile sample_profile(const ex::Distribution& dist, int m, int n, core::Seed seed) {
    switch (dist.kind) {
        case ex::Distribution::Kind::ImpartialCulture:
            return gen::gen_impartial_culture(m, n, seed);
        case ex::Distribution::Kind::Urn:
            return gen::gen_urn(m, n, gen::UrnParams{dist.urn_a}, seed);
        case ex::Distribution::Kind::SinglePeaked:
            return gen::gen_single_peaked(m, n, seed);
        case ex::Distribution::Kind::SingleTroughed:
            return gen::gen_single_troughed(m, n, seed);
        case ex::Distribution::Kind::File:
            break;
    }
    throw core::ConfigError("--dist file makes no sense for generate");
}

void print_stv_trace(const rules::StvTrace& trace) {
    int round = 1;
    for (const auto& rec : trace.rounds) {
        std::cout << "round " << round++ << ":";
        for (const auto& [cand, tally] : rec.tallies) std::cout << ' ' << cand << '=' << tally;
        if (rec.eliminated) {
            std::cout << "  eliminate " << *rec.eliminated << '\n';
        } else {
            std::cout << "  decided\n";
        }
    }
    std::cout << "winner: " << trace.winner << '\n';
}

void print_veto_tally(const rules::VetoTally& tally) {
    std::cout << "vetoes:";
    for (size_t c = 0; c < tally.vetoes.size(); ++c) std::cout << ' ' << c << '=' << tally.vetoes[c];
    std::cout << '\n' << "winner: " << tally.winner << '\n';
}

void print_outcome(const manip::ManipulationOutcome& out, const std::vector<core::Weight>& coalition) {
    std::cout << "verdict: " << verdict_name(out.verdict) << '\n';
    if (out.verdict == manip::Verdict::Found) {
        for (size_t i = 0; i < coalition.size(); ++i) {
            std::cout << "member " << i << " (weight " << coalition[i] << "): ";
            if (!out.ballots.empty()) {
                std::cout << core::format_ballot(out.ballots[i]) << '\n';
            } else {
                std::cout << "veto " << out.vetoes[i].vetoed << '\n';
            }
        }
    }
    std::cout << "nodes: " << out.stats.nodes << '\n';
    std::cout << "decided: " << (out.stats.decided ? "yes" : "no") << '\n';
}

void print_matching(const std::string& label, const mat::Matching& matching) {
    std::cout << label << ':';
    for (size_t m = 0; m < matching.wife.size(); ++m) std::cout << " m" << m << "-w" << matching.wife[m];
    std::cout << '\n';
}

mat::Agent parse_agent(const std::string& text, int n) {
    if (text.size() < 2 || (text[0] != 'm' && text[0] != 'w')) {
        throw core::ConfigError("bad agent `" + text + "` (expected like m0 or w3)");
    }
    int idx = 0;
    try {
        size_t used = 0;
        idx = std::stoi(text.substr(1), &used);
        if (used + 1 != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw core::ConfigError("bad agent `" + text + "` (expected like m0 or w3)");
    }
    if (idx < 0 || idx >= n) throw core::ConfigError("agent index out of range in `" + text + "`");
    return mat::Agent{text[0] == 'm' ? mat::Side::Men : mat::Side::Women, idx};
}

struct GenerateOpts {
    int m = 0;
    int n = 0;
    std::string dist = "ic";
    long long urn_a = 0;
    core::Seed seed = 0;
    std::string out;
};

struct ElectOpts {
    std::string rule = "stv";
    std::string in;
    std::string tie = "lexmin";
};

struct ManipulateOpts {
    std::string rule = "stv";
    std::string in;
    int target = 0;
    int coalition = 1;
    std::string weights;
    std::string goal = "constructive";
    std::uint64_t budget = 0;
    bool has_budget = false;
    std::string tie = "lexmin";
};

struct SweepOpts {
    std::string rule = "stv";
    std::string dist = "ic";
    long long urn_a = 0;
    std::string in;
    std::string vary;
    int m = 0;
    bool has_m = false;
    int n = 0;
    bool has_n = false;
    int coalition = 1;
    int target = 0;
    bool has_target = false;
    long long trials = 0;
    core::Seed seed = 0;
    std::uint64_t budget = 0;
    bool has_budget = false;
    std::string tie = "lexmin";
    std::string out;
    std::string plot_data;
};

struct EstimateOpts {
    std::string rule = "stv";
    std::string dist = "ic";
    long long urn_a = 0;
    std::string in;
    int m = 0;
    int n = 0;
    int coalition = 1;
    int target = 0;
    bool has_target = false;
    long long trials = 0;
    core::Seed seed = 0;
    std::string tie = "lexmin";
};

struct TourneyOpts {
    std::string kind;
    std::string teams;
    std::string coalition;
    int target = 0;
    bool min_throws = false;
    bool prob = false;
    std::string policy = "throw";
    std::string seeding;
    std::string tie;
    bool has_tie = false;
};

struct MatchOpts {
    std::string instance;
    std::string gs;
    bool popular = false;
    std::string rule = "stv";
    std::string probe;
    std::string tie = "lexmin";
};

void run_generate(const GenerateOpts& o) {
    const ex::Distribution dist = parse_dist(o.dist, o.urn_a, "");
    const core::Profile profile = sample_profile(dist, o.m, o.n, o.seed);
    write_output(o.out, core::write_profile_text(profile));
}

void run_elect(const ElectOpts& o) {
    const core::TieBreakPolicy policy = parse_tie(o.tie);
    const core::AnyProfile any = core::read_profile_text(read_input(o.in));
    if (o.rule == "stv") {
        const auto* profile = std::get_if<core::Profile>(&any);
        if (!profile) throw core::ConfigError("stv needs a ranking profile, got a veto profile");
        print_stv_trace(rules::stv_outcome(*profile, policy));
    } else if (o.rule == "veto") {
        if (const auto* vp = std::get_if<core::VetoProfile>(&any)) {
            print_veto_tally(rules::veto_outcome(*vp, policy));
        } else {
            print_veto_tally(rules::veto_outcome(rules::to_veto_profile(std::get<core::Profile>(any)), policy));
        }
    } else {
        throw core::ConfigError("unknown rule `" + o.rule + "` (expected stv or veto)");
    }
}

std::vector<core::Weight> coalition_weights(int coalition, const std::string& weights) {
    if (!weights.empty()) {
        std::vector<core::Weight> out;
        for (int w : parse_int_list(weights, "weight")) {
            if (w <= 0) throw core::ConfigError("coalition weights must be positive");
            out.push_back(w);
        }
        return out;
    }
    if (coalition < 1) throw core::ConfigError("--coalition must be at least 1");
    return std::vector<core::Weight>(static_cast<size_t>(coalition), 1);
}

void run_manipulate(const ManipulateOpts& o) {
    const manip::Rule rule = parse_rule(o.rule);
    manip::ManipulationQuery query;
    query.policy = parse_tie(o.tie);
    query.target = o.target;
    query.coalition = coalition_weights(o.coalition, o.weights);
    if (o.goal == "constructive") {
        query.goal = manip::Goal::Constructive;
    } else if (o.goal == "destructive") {
        query.goal = manip::Goal::Destructive;
    } else {
        throw core::ConfigError("unknown goal `" + o.goal + "` (expected constructive or destructive)");
    }

    const core::AnyProfile any = core::read_profile_text(read_input(o.in));
    manip::ManipulationOutcome out;
    if (rule == manip::Rule::Stv) {
        const auto* profile = std::get_if<core::Profile>(&any);
        if (!profile) throw core::ConfigError("stv needs a ranking profile, got a veto profile");
        query.fixed = *profile;
        if (query.goal == manip::Goal::Constructive) {
            std::optional<std::uint64_t> budget;
            if (o.has_budget) budget = o.budget;
            out = manip::stv_constructive(query, budget);
        } else {
            // No dedicated destructive search for stv; fall back to exhaustive
            // evaluation, which is exact at this scale.
            out = manip::brute_force_manipulate(manip::Rule::Stv, query);
        }
    } else {
        if (const auto* vp = std::get_if<core::VetoProfile>(&any)) {
            query.fixed = *vp;
        } else {
            query.fixed = rules::to_veto_profile(std::get<core::Profile>(any));
        }
        out = query.goal == manip::Goal::Constructive ? manip::veto_constructive_weighted(query)
                                                      : manip::veto_destructive_weighted(query);
    }
    print_outcome(out, query.coalition);
}

ex::SweepSpec build_sweep_spec(const SweepOpts& o) {
    ex::SweepSpec spec;
    spec.rule = parse_rule(o.rule);
    spec.distribution = parse_dist(o.dist, o.urn_a, o.in);
    spec.policy = parse_tie(o.tie);
    if (o.coalition < 1) throw core::ConfigError("--coalition must be at least 1");
    spec.coalition_size = o.coalition;
    if (o.trials < 1) throw core::ConfigError("--trials must be at least 1");
    spec.trials = o.trials;
    spec.seed = o.seed;
    if (o.has_budget) spec.node_budget = o.budget;
    if (o.has_target) spec.target_mode = ex::TargetMode::fixed(o.target);

    std::istringstream ss(o.vary);
    std::string which, lo_s, hi_s;
    if (!std::getline(ss, which, ':') || !std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s)) {
        throw core::ConfigError("bad --vary `" + o.vary + "` (expected m:lo:hi or n:lo:hi)");
    }
    int lo = 0, hi = 0;
    try {
        lo = std::stoi(lo_s);
        hi = std::stoi(hi_s);
    } catch (const std::exception&) {
        throw core::ConfigError("bad --vary bounds in `" + o.vary + "`");
    }
    if (which == "m") {
        if (!o.has_n) throw core::ConfigError("--vary m:lo:hi requires --n for the fixed voter count");
        spec.axis = ex::SweepAxis::vary_m(o.n, lo, hi);
    } else if (which == "n") {
        if (!o.has_m) throw core::ConfigError("--vary n:lo:hi requires --m for the fixed candidate count");
        spec.axis = ex::SweepAxis::vary_n(o.m, lo, hi);
    } else {
        throw core::ConfigError("bad --vary axis `" + which + "` (expected m or n)");
    }
    return spec;
}

void run_sweep(const SweepOpts& o) {
    const ex::SweepSpec spec = build_sweep_spec(o);
    const std::vector<ex::SweepRecord> records = ex::run_sweep(spec);
    write_output(o.out, ex::emit_csv(records));
    if (!o.plot_data.empty()) write_output(o.plot_data, ex::emit_plot_data(records));
}

void run_estimate(const EstimateOpts& o) {
    if (o.trials < 1) throw core::ConfigError("--trials must be at least 1");
    if (o.coalition < 0) throw core::ConfigError("--coalition must be at least 0");
    const ex::Distribution dist = parse_dist(o.dist, o.urn_a, o.in);
    const ex::TargetMode mode =
        o.has_target ? ex::TargetMode::fixed(o.target) : ex::TargetMode::random();
    const ex::Estimate est =
        ex::estimate_coalition_success(parse_rule(o.rule), o.m, o.n, o.coalition, dist, mode,
                                        o.trials, o.seed, parse_tie(o.tie));
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(6);
    ss << "p_hat=" << est.p_hat << " interval95=[" << est.lo << ',' << est.hi << ']'
       << " successes=" << est.successes << " trials=" << est.trials << '\n';
    std::cout << ss.str();
}

void run_tourney(const TourneyOpts& o) {
    const trn::BeatsModel model = trn::read_beats_model(read_input(o.teams));
    trn::Coalition coalition;
    if (!o.coalition.empty()) {
        for (int team : parse_int_list(o.coalition, "coalition")) {
            if (team < 0 || team >= model.t) throw core::ConfigError("coalition team out of range");
            coalition.members.insert(team);
        }
    }
    if (o.target < 0 || o.target >= model.t) throw core::ConfigError("--target out of range");

    if (o.kind == "cup") {
        trn::Bracket bracket = o.seeding.empty()
                                   ? trn::Bracket::standard(model.t)
                                   : trn::Bracket::seeded(parse_int_list(o.seeding, "seeding"));
        const bool can = trn::cup_can_win(bracket, model, coalition, o.target);
        std::cout << "target " << o.target << " can win: " << (can ? "yes" : "no") << '\n';
        if (o.min_throws) {
            const std::optional<int> throws = trn::cup_min_throws(bracket, model, coalition, o.target);
            if (throws) {
                std::cout << "minimum thrown games: " << *throws << '\n';
            } else {
                std::cout << "minimum thrown games: impossible\n";
            }
        }
        if (o.prob) {
            trn::ThrowPolicy policy;
            if (o.policy == "throw") {
                policy = trn::ThrowPolicy::ThrowToTarget;
            } else if (o.policy == "honest") {
                policy = trn::ThrowPolicy::Honest;
            } else {
                throw core::ConfigError("unknown policy `" + o.policy + "` (expected throw or honest)");
            }
            std::ostringstream ss;
            ss.setf(std::ios::fixed);
            ss.precision(6);
            ss << trn::cup_win_probability(bracket, model, coalition, o.target, policy);
            std::cout << "win probability: " << ss.str() << '\n';
        }
    } else if (o.kind == "rr") {
        std::optional<core::TieBreakPolicy> tie;
        if (o.has_tie) tie = parse_tie(o.tie);
        const std::optional<trn::RrWitness> witness = trn::rr_can_win(model, coalition, o.target, tie);
        std::cout << "target " << o.target << " can win: " << (witness ? "yes" : "no") << '\n';
        if (witness) {
            for (const auto& game : witness->outcomes) {
                std::cout << "game " << game.a << " vs " << game.b << ": winner " << game.winner << '\n';
            }
        }
        if (o.min_throws) {
            const std::optional<int> throws = trn::rr_min_throws(model, coalition, o.target, tie);
            if (throws) {
                std::cout << "minimum thrown games: " << *throws << '\n';
            } else {
                std::cout << "minimum thrown games: impossible\n";
            }
        }
    } else {
        throw core::ConfigError("unknown kind `" + o.kind + "` (expected cup or rr)");
    }
}

void run_match(const MatchOpts& o) {
    const mat::MatchingInstance instance = mat::read_instance(read_input(o.instance));
    const core::TieBreakPolicy policy = parse_tie(o.tie);
    bool did_anything = false;

    std::optional<mat::Side> gs_side;
    if (!o.gs.empty()) {
        if (o.gs == "men") {
            gs_side = mat::Side::Men;
        } else if (o.gs == "women") {
            gs_side = mat::Side::Women;
        } else {
            throw core::ConfigError("unknown side `" + o.gs + "` (expected men or women)");
        }
        const char* label = *gs_side == mat::Side::Men ? "men-proposing" : "women-proposing";
        print_matching(std::string(label) + " stable matching", mat::gale_shapley(instance, *gs_side));
        did_anything = true;
    }
    if (o.popular) {
        print_matching("popular stable matching (" + o.rule + ")",
                       mat::popular_stable_procedure(instance, parse_rule(o.rule), policy));
        did_anything = true;
    }
    if (!o.probe.empty()) {
        const mat::Agent agent = parse_agent(o.probe, instance.n);
        mat::Procedure procedure = o.popular
                                       ? mat::Procedure::popular(parse_rule(o.rule), policy)
                                       : mat::Procedure::gs(gs_side.value_or(mat::Side::Men));
        const std::optional<mat::Misreport> found =
            mat::find_matching_manipulation(instance, procedure, agent);
        const char other = agent.side == mat::Side::Men ? 'w' : 'm';
        if (found) {
            std::cout << "probe " << o.probe << ": misreport " << core::format_ballot({found->list})
                      << " improves partner to " << other << found->new_partner << " (was " << other
                      << found->old_partner << ")\n";
        } else {
            std::cout << "probe " << o.probe << ": no beneficial misreport\n";
        }
        did_anything = true;
    }
    if (!did_anything) {
        throw core::ConfigError("nothing to do: pass --gs, --popular and/or --probe-agent");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"manipulation laboratory for elections, tournaments and stable marriage"};
    app.require_subcommand(1);

    GenerateOpts gen_opts;
    auto* cmd_gen = app.add_subcommand("generate", "sample a preference profile and print it");
    cmd_gen->add_option("--m", gen_opts.m, "number of candidates")->required();
    cmd_gen->add_option("--n", gen_opts.n, "number of voters")->required();
    cmd_gen->add_option("--dist", gen_opts.dist, "distribution: ic, urn, sp, st");
    cmd_gen->add_option("--urn-a", gen_opts.urn_a, "urn contagion parameter");
    cmd_gen->add_option("--seed", gen_opts.seed, "random seed");
    cmd_gen->add_option("--out", gen_opts.out, "output file (default stdout)");

    ElectOpts elect_opts;
    auto* cmd_elect = app.add_subcommand("elect", "run an election over a profile file");
    cmd_elect->add_option("--rule", elect_opts.rule, "voting rule: stv or veto");
    cmd_elect->add_option("--in", elect_opts.in, "profile file (- for stdin)")->required();
    cmd_elect->add_option("--tie", elect_opts.tie, "tie-break: lexmin, lexmax, order:<perm>");

    ManipulateOpts man_opts;
    auto* cmd_man = app.add_subcommand("manipulate", "search for a coalition manipulation");
    cmd_man->add_option("--rule", man_opts.rule, "voting rule: stv or veto");
    cmd_man->add_option("--in", man_opts.in, "profile file (- for stdin)")->required();
    cmd_man->add_option("--target", man_opts.target, "target candidate")->required();
    cmd_man->add_option("--coalition", man_opts.coalition, "coalition size (unit weights)");
    cmd_man->add_option("--weights", man_opts.weights, "comma separated coalition weights");
    cmd_man->add_option("--goal", man_opts.goal, "constructive or destructive");
    auto* budget_opt = cmd_man->add_option("--budget", man_opts.budget, "node budget for the search");
    cmd_man->add_option("--tie", man_opts.tie, "tie-break: lexmin, lexmax, order:<perm>");

    SweepOpts sweep_opts;
    auto* cmd_sweep = app.add_subcommand("sweep", "run a manipulation sweep and emit CSV");
    cmd_sweep->add_option("--rule", sweep_opts.rule, "voting rule: stv or veto");
    cmd_sweep->add_option("--dist", sweep_opts.dist, "distribution: ic, urn, sp, st, file");
    cmd_sweep->add_option("--urn-a", sweep_opts.urn_a, "urn contagion parameter");
    cmd_sweep->add_option("--in", sweep_opts.in, "profile file for --dist file");
    cmd_sweep->add_option("--vary", sweep_opts.vary, "swept axis, m:lo:hi or n:lo:hi")->required();
    auto* sweep_m = cmd_sweep->add_option("--m", sweep_opts.m, "fixed candidate count (with --vary n)");
    auto* sweep_n = cmd_sweep->add_option("--n", sweep_opts.n, "fixed voter count (with --vary m)");
    cmd_sweep->add_option("--coalition", sweep_opts.coalition, "coalition size");
    auto* sweep_target = cmd_sweep->add_option("--target", sweep_opts.target, "fixed target candidate");
    cmd_sweep->add_option("--trials", sweep_opts.trials, "trials per sweep point")->required();
    cmd_sweep->add_option("--seed", sweep_opts.seed, "base seed");
    auto* sweep_budget = cmd_sweep->add_option("--budget", sweep_opts.budget, "node budget per trial");
    cmd_sweep->add_option("--tie", sweep_opts.tie, "tie-break: lexmin, lexmax, order:<perm>");
    cmd_sweep->add_option("--out", sweep_opts.out, "CSV output file (default stdout)");
    cmd_sweep->add_option("--plot-data", sweep_opts.plot_data, "gnuplot-style data file");

    EstimateOpts est_opts;
    auto* cmd_est = app.add_subcommand("estimate", "estimate coalition success probability");
    cmd_est->add_option("--rule", est_opts.rule, "voting rule: stv or veto");
    cmd_est->add_option("--dist", est_opts.dist, "distribution: ic, urn, sp, st, file");
    cmd_est->add_option("--urn-a", est_opts.urn_a, "urn contagion parameter");
    cmd_est->add_option("--in", est_opts.in, "profile file for --dist file");
    cmd_est->add_option("--m", est_opts.m, "number of candidates")->required();
    cmd_est->add_option("--n", est_opts.n, "number of fixed voters")->required();
    cmd_est->add_option("--coalition", est_opts.coalition, "coalition size (0 = honest)");
    auto* est_target = cmd_est->add_option("--target", est_opts.target, "fixed target candidate");
    cmd_est->add_option("--trials", est_opts.trials, "number of trials")->required();
    cmd_est->add_option("--seed", est_opts.seed, "base seed");
    cmd_est->add_option("--tie", est_opts.tie, "tie-break: lexmin, lexmax, order:<perm>");

    TourneyOpts trn_opts;
    auto* cmd_trn = app.add_subcommand("tourney", "tournament manipulation queries");
    cmd_trn->add_option("--kind", trn_opts.kind, "tournament kind: cup or rr")->required();
    cmd_trn->add_option("--teams", trn_opts.teams, "team model file")->required();
    cmd_trn->add_option("--coalition", trn_opts.coalition, "comma separated coalition teams");
    cmd_trn->add_option("--target", trn_opts.target, "target team")->required();
    cmd_trn->add_flag("--min-throws", trn_opts.min_throws, "also report the minimum thrown games");
    cmd_trn->add_flag("--prob", trn_opts.prob, "also report the target's cup win probability");
    cmd_trn->add_option("--policy", trn_opts.policy, "coalition policy for --prob: throw or honest");
    cmd_trn->add_option("--seeding", trn_opts.seeding, "cup seeding as a comma separated permutation");
    auto* trn_tie = cmd_trn->add_option("--tie", trn_opts.tie, "round robin tie-break (default: strict win)");

    MatchOpts match_opts;
    auto* cmd_match = app.add_subcommand("match", "stable marriage procedures");
    cmd_match->add_option("--instance", match_opts.instance, "matching instance file")->required();
    cmd_match->add_option("--gs", match_opts.gs, "run deferred acceptance: men or women");
    cmd_match->add_flag("--popular", match_opts.popular, "run the popularity-driven procedure");
    cmd_match->add_option("--rule", match_opts.rule, "voting rule for --popular: stv or veto");
    cmd_match->add_option("--probe-agent", match_opts.probe, "search misreports for an agent, e.g. w1");
    cmd_match->add_option("--tie", match_opts.tie, "tie-break: lexmin, lexmax, order:<perm>");

    cmd_gen->callback([&] { run_generate(gen_opts); });
    cmd_elect->callback([&] { run_elect(elect_opts); });
    cmd_man->callback([&] {
        man_opts.has_budget = budget_opt->count() > 0;
        run_manipulate(man_opts);
    });
    cmd_sweep->callback([&] {
        sweep_opts.has_m = sweep_m->count() > 0;
        sweep_opts.has_n = sweep_n->count() > 0;
        sweep_opts.has_target = sweep_target->count() > 0;
        sweep_opts.has_budget = sweep_budget->count() > 0;
        run_sweep(sweep_opts);
    });
    cmd_est->callback([&] {
        est_opts.has_target = est_target->count() > 0;
        run_estimate(est_opts);
    });
    cmd_trn->callback([&] {
        trn_opts.has_tie = trn_tie->count() > 0;
        run_tourney(trn_opts);
    });
    cmd_match->callback([&] { run_match(match_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const core::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
