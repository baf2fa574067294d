#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covstream/core.hpp"
#include "covstream/oracles.hpp"
#include "covstream/stream.hpp"

namespace covstream {

enum class LogBase { natural, base2 };

/// Sub-instance solver for the per-iteration "find an optimal set cover of
/// the stored projections" step. `greedy` trades the approximation guarantee
/// for speed and is a documented deviation from the exact default.
enum class Subsolver { exact, greedy };

struct SolverConfig {
    std::uint32_t alpha = 1;          // pass/approximation knob, >= 1
    double eps = 0.5;                 // in (0, 1)
    double sampling_constant = 16.0;  // the constant in p = c * guess * log m / n^(1-1/alpha)
    LogBase log_base = LogBase::natural;
    std::optional<std::uint64_t> guess_override;
    Seed seed{0};
    Subsolver subsolver = Subsolver::exact;
    std::optional<std::uint64_t> ledger_budget;  // space cutoff; a tripping guess fails
};

struct GuessOutcome {
    std::uint64_t guess = 0;
    bool feasible = false;
    std::size_t sol_size = 0;
    std::size_t sol0_size = 0;          // picks from the pruning pass
    std::size_t largest_subcover = 0;   // largest per-iteration sub-cover
};

struct SolveResult {
    std::vector<std::size_t> chosen;
    bool feasible = false;
    std::uint32_t passes_used = 0;
    std::uint64_t peak_entries = 0;
    std::uint64_t winning_guess = 0;
    std::vector<GuessOutcome> per_guess;

    // Projection-storage accounting across all guesses and iterations:
    // actual stored entries vs. the expectation sum |S_i ∩ U| * p.
    std::uint64_t proj_entries_stored = 0;
    double proj_entries_expected = 0.0;
};

/// min(1, c * guess * log(m) / n^(1 - 1/alpha)). Requires n >= 1, m >= 2.
double sampling_probability(std::uint64_t n, std::uint64_t m, std::uint64_t guess,
                            std::uint32_t alpha, const SolverConfig& config);

/// Independent inclusion of each element of `u` with probability p.
ElementSet sample_universe(const ElementSet& u, double p, Rng& rng);

/// Pruning threshold min(n, ceil(n / (eps * guess))): the clamp keeps a full
/// set pickable when eps * guess < 1.
std::uint64_t prune_threshold(std::uint64_t n, double eps, std::uint64_t guess);

struct PruneResult {
    std::vector<std::size_t> picked;  // SOL_0
    ElementSet uncovered;             // universe minus the picked sets
};

/// One pass; picks every set whose intersection with the evolving uncovered
/// universe meets the threshold. The final |uncovered| stays charged to the
/// ledger (the caller owns it).
PruneResult prune_pass(SetStream& stream, std::uint64_t guess, double eps,
                       SpaceLedger& ledger);

struct IterationResult {
    std::vector<std::size_t> picked;
    ElementSet remaining;   // sample minus the full picked sets
    bool coverable = true;  // false if some sampled element lies in no set
};

/// One collect pass (store projections onto the sample, charged) plus one
/// removal pass (subtract full sets). Always consumes exactly 2 passes.
IterationResult iteration(SetStream& stream, const ElementSet& sample,
                          SpaceLedger& ledger, Subsolver subsolver = Subsolver::exact);

/// Full run for a single guess: pruning pass, then alpha sample/solve/remove
/// iterations. Exactly 2*alpha + 1 passes on coverable instances.
SolveResult solve_for_guess(SetStream& stream, std::uint64_t guess,
                            const SolverConfig& config);

/// Runs the guess schedule ceil((1+eps)^j), deduplicated and capped at n, all
/// guesses multiplexed through shared physical passes; returns the smallest
/// feasible cover (ties to the smaller guess). Infeasibility is a result
/// state, reported after a single pass for uncoverable inputs.
SolveResult solve(SetStream& stream, const SolverConfig& config);

/// The deduplicated guess schedule used by solve().
std::vector<std::uint64_t> guess_schedule(std::uint64_t n, double eps);

}  // namespace covstream
