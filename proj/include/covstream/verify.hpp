#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covstream/core.hpp"

namespace covstream {

/// One Monte-Carlo verification run. Statistical checks report the empirical
/// rate next to the theoretical failure bound (where one exists) and leave
/// threshold decisions to the caller; deterministic sub-checks inside a run
/// throw instead of reporting a rate below 1.
struct TrialReport {
    std::string lemma_id;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_rate = 0.0;
    std::optional<double> paper_bound;  // theoretical failure bound, if any
    std::vector<std::pair<std::string, double>> params;
    Seed seed;
};

std::string to_kv(const TrialReport& report);    // single key=value line
std::string to_json(const TrialReport& report);  // one JSON object

/// k near-equal blocks partitioning [0, n) plus m - k uniform random
/// (n/2)-subsets, in shuffled order. Optimum cover size is at most k.
SetSystem planted_partition_instance(std::uint64_t n, std::uint64_t m, std::uint64_t k,
                                     Rng& rng);

/// Draws k uniform (n-s)-subsets against a fixed u_size-element target and
/// counts how often the uncovered remainder drops below
/// (|U|/2) * (s/2n)^k. Success = the bad event did not fire.
TrialReport check_coverage_lemma(std::uint64_t n, std::uint64_t s, std::uint64_t k,
                                 std::uint64_t u_size, std::uint64_t trials, Seed seed);

/// theta = 0 instances: success = exhaustive search certifies no cover of
/// size <= 2 * alpha. Companion theta = 1 instances must plant a feasible
/// pair every time (hard assertion), and every theta = 0 matched pair must
/// miss exactly n/t elements (hard assertion).
TrialReport check_sc_opt_gap(std::uint64_t n, std::uint64_t m, std::uint64_t t,
                             std::uint32_t alpha, std::uint64_t trials, Seed seed);

/// Planted instances with opt <= k; per trial, samples the universe with
/// p = 16 k ln(m) / (rho n) and audits every covering k-subset of the sample
/// for >= (1 - rho) n true coverage.
TrialReport check_element_sampling(std::uint64_t n, std::uint64_t m, std::uint64_t k,
                                   double rho, std::uint64_t trials, Seed seed);

/// Trial pairs (theta = 0, theta = 1): success = the exact 2-cover optimum
/// falls on the correct side of tau for both. Cross-pair unions are audited
/// against (3/4 + 0.2) t2 + t1; violations are reported in params.
TrialReport check_mc_gap(std::uint64_t m, std::uint64_t t1, std::uint64_t a,
                         std::uint64_t b, std::uint64_t trials, Seed seed);

/// End-to-end solver runs on planted instances: success = feasible and
/// |SOL| <= ceil((alpha + eps) (1 + eps) planted_opt). passes = 2 alpha + 1
/// is a hard assertion on every trial.
TrialReport check_solver_contract(std::uint64_t n, std::uint64_t m, std::uint32_t alpha,
                                  double eps, std::uint64_t planted_opt,
                                  std::uint64_t trials, Seed seed);

}  // namespace covstream
