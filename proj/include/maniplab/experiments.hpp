#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maniplab/core.hpp"
#include "maniplab/manipulation.hpp"

namespace maniplab::experiments {

struct Distribution {
    enum class Kind { ImpartialCulture, Urn, SinglePeaked, SingleTroughed, File };
    Kind kind = Kind::ImpartialCulture;
    long long urn_a = 0;  // Kind::Urn only
    std::string path;     // Kind::File only

    static Distribution ic() { return {}; }
    static Distribution urn(long long a) { return {Kind::Urn, a, {}}; }
    static Distribution single_peaked() { return {Kind::SinglePeaked, 0, {}}; }
    static Distribution single_troughed() { return {Kind::SingleTroughed, 0, {}}; }
    static Distribution file(std::string path) { return {Kind::File, 0, std::move(path)}; }
};

struct SweepAxis {
    enum class Vary { M, N };
    Vary vary = Vary::M;
    int fixed = 0;        // the coordinate that stays put
    int lo = 0, hi = 0;   // inclusive range of the varied coordinate

    static SweepAxis vary_m(int n, int m_lo, int m_hi) { return {Vary::M, n, m_lo, m_hi}; }
    static SweepAxis vary_n(int m, int n_lo, int n_hi) { return {Vary::N, m, n_lo, n_hi}; }
};

struct TargetMode {
    enum class Kind { RandomCandidate, Fixed };
    Kind kind = Kind::RandomCandidate;
    core::Candidate candidate = 0;  // Kind::Fixed only

    static TargetMode random() { return {}; }
    static TargetMode fixed(core::Candidate c) { return {Kind::Fixed, c}; }
};

struct SweepSpec {
    manipulation::Rule rule = manipulation::Rule::Stv;
    Distribution distribution;
    SweepAxis axis;
    int coalition_size = 1;
    TargetMode target_mode;
    long long trials = 0;
    std::optional<std::uint64_t> node_budget;
    core::Seed seed = 0;
    core::TieBreakPolicy policy = core::TieBreakPolicy::lex_min();
};

struct SweepRecord {
    int m = 0;
    int n = 0;
    long long trials = 0;
    long long found = 0;
    long long impossible = 0;
    long long undecided = 0;
    double p_manipulable = 0.0;  // found / decided; 0 when nothing decided
    double mean_nodes = 0.0;     // over decided trials
    double median_nodes = 0.0;
    double p90_nodes = 0.0;      // nearest-rank 90th percentile
    double undecided_fraction = 0.0;
    double bound_ratio = 0.0;    // mean_nodes / 1.62^m
    std::optional<std::string> error;  // point skipped; excluded from CSV rows
};

// One record per sweep point. Trials are independently seeded from
// (spec.seed, m, n, trial index) and may run on several threads; the records
// are identical either way. MANIPLAB_THREADS caps the worker count.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

core::Seed trial_seed(core::Seed base, int m, int n, long long trial);

struct Estimate {
    double p_hat = 0.0;
    double lo = 0.0;  // Wilson 95% interval
    double hi = 1.0;
    long long successes = 0;
    long long trials = 0;
};

// Monte Carlo estimate of the probability that a coalition of k unit-weight
// agents can make the target win. k = 0 asks whether the target wins the
// sampled election as-is.
Estimate estimate_coalition_success(manipulation::Rule rule, int m, int n, int k,
                                    const Distribution& distribution, TargetMode target_mode,
                                    long long trials, core::Seed seed,
                                    const core::TieBreakPolicy& policy =
                                        core::TieBreakPolicy::lex_min());

std::string emit_csv(const std::vector<SweepRecord>& records);
std::string emit_plot_data(const std::vector<SweepRecord>& records);

// 1.62^m by iterated multiplication, so every platform prints the same digits.
double worst_case_bound(int m);

double max_adjacent_slope(const std::vector<SweepRecord>& records);

// Worker count: MANIPLAB_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int thread_cap();

}  // namespace maniplab::experiments
