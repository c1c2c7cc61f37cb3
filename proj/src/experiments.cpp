#include "maniplab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "maniplab/generators.hpp"
#include "maniplab/rng.hpp"
#include "maniplab/rules.hpp"

namespace maniplab::experiments {

using core::Candidate;
using core::ConfigError;
using core::Profile;
using core::Rng;
using core::Weight;
using manipulation::Goal;
using manipulation::ManipulationOutcome;
using manipulation::ManipulationQuery;
using manipulation::Rule;
using manipulation::Verdict;

namespace {

struct TrialOut {
    int verdict = -1;  // 0 found, 1 impossible, 2 undecided
    std::uint64_t nodes = 0;
    std::string error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open profile file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Profile sample_profile(const Distribution& dist, int m, int n, core::Seed seed,
                       const Profile* file_profile) {
    switch (dist.kind) {
        case Distribution::Kind::ImpartialCulture:
            return generators::gen_impartial_culture(m, n, seed);
        case Distribution::Kind::Urn:
            return generators::gen_urn(m, n, {dist.urn_a}, seed);
        case Distribution::Kind::SinglePeaked:
            return generators::gen_single_peaked(m, n, seed);
        case Distribution::Kind::SingleTroughed:
            return generators::gen_single_troughed(m, n, seed);
        case Distribution::Kind::File:
            return *file_profile;
    }
    throw ConfigError("unknown distribution");
}

Candidate pick_target(const TargetMode& mode, int m, Rng& rng) {
    // The draw happens even in Fixed mode so both modes consume the same
    // stream prefix and trials stay comparable across modes.
    const Candidate random_pick = static_cast<Candidate>(rng.next_below(static_cast<std::uint64_t>(m)));
    return mode.kind == TargetMode::Kind::RandomCandidate ? random_pick : mode.candidate;
}

TrialOut run_trial(const SweepSpec& spec, int m, int n, long long i,
                   const Profile* file_profile) {
    TrialOut out;
    try {
        Rng r(trial_seed(spec.seed, m, n, i));
        const core::Seed gen_seed = r.next_u64();
        Profile profile = sample_profile(spec.distribution, m, n, gen_seed, file_profile);
        ManipulationQuery query;
        query.coalition.assign(static_cast<std::size_t>(spec.coalition_size), 1);
        query.target = pick_target(spec.target_mode, m, r);
        query.goal = Goal::Constructive;
        query.policy = spec.policy;
        ManipulationOutcome res;
        if (spec.rule == Rule::Stv) {
            query.fixed = std::move(profile);
            res = manipulation::stv_constructive(query, spec.node_budget);
        } else {
            query.fixed = rules::to_veto_profile(profile);
            res = manipulation::veto_constructive_weighted(query);
        }
        out.nodes = res.stats.nodes;
        out.verdict = res.verdict == Verdict::Found ? 0
                      : res.verdict == Verdict::Impossible ? 1
                                                           : 2;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

void validate_spec(const SweepSpec& spec) {
    if (spec.trials <= 0) throw ConfigError("trials must be positive");
    if (spec.coalition_size < 1) throw ConfigError("coalition size must be at least 1");
    if (spec.axis.lo > spec.axis.hi) throw ConfigError("sweep range must be nonempty and increasing");
    if (spec.axis.vary == SweepAxis::Vary::M) {
        if (spec.axis.lo < 1) throw ConfigError("candidate counts start at 1");
        if (spec.axis.fixed < 0) throw ConfigError("agent count must be nonnegative");
    } else {
        if (spec.axis.lo < 0) throw ConfigError("agent counts start at 0");
        if (spec.axis.fixed < 1) throw ConfigError("candidate counts start at 1");
    }
    if (spec.distribution.kind == Distribution::Kind::Urn && spec.distribution.urn_a < 0)
        throw ConfigError("urn replacement count must be nonnegative");
}

}  // namespace

core::Seed trial_seed(core::Seed base, int m, int n, long long trial) {
    return core::derive_seed(base, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(trial));
}

int thread_cap() {
    if (const char* env = std::getenv("MANIPLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

double worst_case_bound(int m) {
    double b = 1.0;
    for (int i = 0; i < m; ++i) b *= 1.62;
    return b;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    validate_spec(spec);

    std::optional<Profile> file_profile;
    if (spec.distribution.kind == Distribution::Kind::File) {
        try {
            file_profile = core::read_ranking_profile(slurp(spec.distribution.path));
        } catch (const core::ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw core::ConfigError("cannot load profile file " + spec.distribution.path + ": " +
                                    e.what());
        }
    }

    std::vector<SweepRecord> records;
    for (int x = spec.axis.lo; x <= spec.axis.hi; ++x) {
        const int m = spec.axis.vary == SweepAxis::Vary::M ? x : spec.axis.fixed;
        const int n = spec.axis.vary == SweepAxis::Vary::M ? spec.axis.fixed : x;
        SweepRecord rec;
        rec.m = m;
        rec.n = n;
        rec.trials = spec.trials;

        std::string point_error;
        if (file_profile &&
            (file_profile->m != m || file_profile->total_weight() != n)) {
            point_error = "profile file is m=" + std::to_string(file_profile->m) + " n=" +
                          std::to_string(file_profile->total_weight()) +
                          ", point wants m=" + std::to_string(m) + " n=" + std::to_string(n);
        } else if (spec.target_mode.kind == TargetMode::Kind::Fixed &&
                   (spec.target_mode.candidate < 0 || spec.target_mode.candidate >= m)) {
            point_error = "fixed target out of range at this point";
        }
        if (!point_error.empty()) {
            rec.error = point_error;
            records.push_back(std::move(rec));
            continue;
        }

        const long long total = spec.trials;
        std::vector<TrialOut> slots(static_cast<std::size_t>(total));
        const Profile* fp = file_profile ? &*file_profile : nullptr;
        const int workers = static_cast<int>(std::min<long long>(thread_cap(), total));
        if (workers <= 1) {
            for (long long i = 0; i < total; ++i)
                slots[static_cast<std::size_t>(i)] = run_trial(spec, m, n, i, fp);
        } else {
            std::atomic<long long> next{0};
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (;;) {
                        const long long i = next.fetch_add(1);
                        if (i >= total) break;
                        slots[static_cast<std::size_t>(i)] = run_trial(spec, m, n, i, fp);
                    }
                });
            }
            for (auto& th : pool) th.join();
        }

        std::vector<std::uint64_t> nodes;
        nodes.reserve(slots.size());
        for (const TrialOut& t : slots) {
            if (!t.error.empty()) {
                rec.error = t.error;
                break;
            }
            if (t.verdict == 0)
                ++rec.found;
            else if (t.verdict == 1)
                ++rec.impossible;
            else
                ++rec.undecided;
            if (t.verdict == 0 || t.verdict == 1) nodes.push_back(t.nodes);
        }
        if (rec.error) {
            rec.found = rec.impossible = rec.undecided = 0;
            records.push_back(std::move(rec));
            continue;
        }

        const long long decided = rec.found + rec.impossible;
        rec.undecided_fraction = static_cast<double>(rec.undecided) / static_cast<double>(total);
        if (decided > 0) {
            rec.p_manipulable = static_cast<double>(rec.found) / static_cast<double>(decided);
            std::sort(nodes.begin(), nodes.end());
            std::uint64_t sum = 0;
            for (std::uint64_t v : nodes) sum += v;
            const std::size_t d = nodes.size();
            rec.mean_nodes = static_cast<double>(sum) / static_cast<double>(decided);
            rec.median_nodes = static_cast<double>(nodes[(d - 1) / 2] + nodes[d / 2]) / 2.0;
            const std::size_t rank = (9 * d + 9) / 10;  // nearest-rank ceil(0.9 d)
            rec.p90_nodes = static_cast<double>(nodes[rank - 1]);
        }
        rec.bound_ratio = rec.mean_nodes / worst_case_bound(m);
        records.push_back(std::move(rec));
    }
    return records;
}

Estimate estimate_coalition_success(Rule rule, int m, int n, int k,
                                    const Distribution& distribution, TargetMode target_mode,
                                    long long trials, core::Seed seed,
                                    const core::TieBreakPolicy& policy) {
    if (trials <= 0) throw ConfigError("trials must be positive");
    if (m < 1) throw ConfigError("need at least one candidate");
    if (n < 0 || k < 0) throw ConfigError("agent counts must be nonnegative");
    if (n == 0 && k == 0) throw ConfigError("need at least one voter overall");
    if (target_mode.kind == TargetMode::Kind::Fixed &&
        (target_mode.candidate < 0 || target_mode.candidate >= m))
        throw ConfigError("fixed target out of range");

    std::optional<Profile> file_profile;
    if (distribution.kind == Distribution::Kind::File) {
        file_profile = core::read_ranking_profile(slurp(distribution.path));
        if (file_profile->m != m || file_profile->total_weight() != n)
            throw ConfigError("profile file does not match the requested m and n");
    }
    const Profile* fp = file_profile ? &*file_profile : nullptr;

    long long successes = 0;
    for (long long i = 0; i < trials; ++i) {
        Rng r(trial_seed(seed, m, n, i));
        const core::Seed gen_seed = r.next_u64();
        Profile profile = sample_profile(distribution, m, n, gen_seed, fp);
        const Candidate target = pick_target(target_mode, m, r);
        bool success;
        if (k == 0) {
            const Candidate winner =
                rule == Rule::Stv
                    ? rules::stv_outcome(profile, policy).winner
                    : rules::veto_outcome(rules::to_veto_profile(profile), policy).winner;
            success = winner == target;
        } else {
            ManipulationQuery query;
            query.coalition.assign(static_cast<std::size_t>(k), 1);
            query.target = target;
            query.goal = Goal::Constructive;
            query.policy = policy;
            ManipulationOutcome res;
            if (rule == Rule::Stv) {
                query.fixed = std::move(profile);
                res = manipulation::stv_constructive(query);
            } else {
                query.fixed = rules::to_veto_profile(profile);
                res = manipulation::veto_constructive_weighted(query);
            }
            success = res.verdict == Verdict::Found;
        }
        if (success) ++successes;
    }

    const double z = 1.96;
    const double nt = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (phat + z2 / (2.0 * nt)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;

    Estimate est;
    est.p_hat = phat;
    est.lo = std::max(0.0, center - half);
    est.hi = std::min(1.0, center + half);
    est.successes = successes;
    est.trials = trials;
    return est;
}

double max_adjacent_slope(const std::vector<SweepRecord>& records) {
    double best = 0.0;
    const SweepRecord* prev = nullptr;
    for (const auto& rec : records) {
        if (rec.error) continue;
        if (prev) {
            const double dx = rec.m != prev->m ? static_cast<double>(rec.m - prev->m)
                                               : static_cast<double>(rec.n - prev->n);
            if (dx != 0.0)
                best = std::max(best,
                                std::abs(rec.p_manipulable - prev->p_manipulable) / std::abs(dx));
        }
        prev = &rec;
    }
    return best;
}

std::string emit_csv(const std::vector<SweepRecord>& records) {
    std::string out = "m,n,p_manipulable,mean_nodes,median_nodes,p90_nodes,undecided,bound_ratio\n";
    char buf[256];
    for (const auto& rec : records) {
        if (rec.error) {
            out += "# m=" + std::to_string(rec.m) + " n=" + std::to_string(rec.n) +
                   " skipped: " + *rec.error + "\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", rec.m, rec.n,
                      rec.p_manipulable, rec.mean_nodes, rec.median_nodes, rec.p90_nodes,
                      rec.undecided_fraction, rec.bound_ratio);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "# max_adjacent_slope=%.6f\n", max_adjacent_slope(records));
    out += buf;
    return out;
}

std::string emit_plot_data(const std::vector<SweepRecord>& records) {
    std::string out = "# m n p_manipulable mean_nodes median_nodes p90_nodes undecided bound\n";
    char buf[256];
    for (const auto& rec : records) {
        if (rec.error) {
            out += "# m=" + std::to_string(rec.m) + " n=" + std::to_string(rec.n) +
                   " skipped: " + *rec.error + "\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%d %d %.6f %.6f %.6f %.6f %.6f %.6f\n", rec.m, rec.n,
                      rec.p_manipulable, rec.mean_nodes, rec.median_nodes, rec.p90_nodes,
                      rec.undecided_fraction, worst_case_bound(rec.m));
        out += buf;
    }
    return out;
}

}  // namespace maniplab::experiments
