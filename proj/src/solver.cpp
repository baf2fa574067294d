#include "covstream/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covstream {

namespace {

void validate(const SolverConfig& config) {
    if (config.alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    if (!(config.eps > 0.0 && config.eps < 1.0))
        throw std::invalid_argument("eps must lie in (0, 1)");
    if (!(config.sampling_constant > 0.0))
        throw std::invalid_argument("sampling_constant must be positive");
    if (config.guess_override && *config.guess_override < 1)
        throw std::invalid_argument("guess override must be >= 1");
}

double log_of(double x, LogBase base) {
    return base == LogBase::natural ? std::log(x) : std::log2(x);
}

}  // namespace

double sampling_probability(std::uint64_t n, std::uint64_t m, std::uint64_t guess,
                            std::uint32_t alpha, const SolverConfig& config) {
    if (n < 1 || m < 2)
        throw std::invalid_argument("sampling_probability requires n >= 1, m >= 2");
    if (guess < 1) throw std::invalid_argument("guess must be >= 1");
    const double exponent = 1.0 - 1.0 / static_cast<double>(alpha);
    const double denom = std::pow(static_cast<double>(n), exponent);
    const double raw = config.sampling_constant * static_cast<double>(guess) *
                       log_of(static_cast<double>(m), config.log_base) / denom;
    return std::min(1.0, raw);
}

ElementSet sample_universe(const ElementSet& u, double p, Rng& rng) {
    if (p >= 1.0) return u;
    std::vector<Element> out;
    for (Element e : u)
        if (rng.bernoulli(p)) out.push_back(e);
    return ElementSet(std::move(out));
}

std::uint64_t prune_threshold(std::uint64_t n, double eps, std::uint64_t guess) {
    const double raw = static_cast<double>(n) / (eps * static_cast<double>(guess));
    if (raw >= static_cast<double>(n)) return n;
    return static_cast<std::uint64_t>(std::ceil(raw));
}

PruneResult prune_pass(SetStream& stream, std::uint64_t guess, double eps,
                       SpaceLedger& ledger) {
    if (guess < 1) throw std::invalid_argument("guess must be >= 1");
    const std::size_t n = stream.universe_size();
    const std::uint64_t threshold = prune_threshold(n, eps, guess);

    PruneResult res;
    Bitmask uncovered = Bitmask::full(n);
    ledger.charge(n);
    stream.run_pass([&](std::size_t idx, const ElementSet& s) {
        const Bitmask mask = s.to_bitmask(n);
        const std::size_t gain = uncovered.count_and(mask);
        if (gain >= threshold) {
            res.picked.push_back(idx);
            uncovered.subtract(mask);
            ledger.discharge(gain);
        }
    });
    res.uncovered = ElementSet::from_bitmask(uncovered);
    return res;
}

IterationResult iteration(SetStream& stream, const ElementSet& sample,
                          SpaceLedger& ledger, Subsolver subsolver) {
    const std::size_t n = stream.universe_size();
    const std::size_t m = stream.set_count();
    const Bitmask target = sample.to_bitmask(n);

    // Collect pass: store the per-set projections onto the sample.
    std::vector<Bitmask> proj(m, Bitmask(n));
    std::uint64_t charged = 0;
    stream.run_pass([&](std::size_t idx, const ElementSet& s) {
        Bitmask pr = s.to_bitmask(n);
        pr &= target;
        const std::uint64_t cnt = pr.count();
        charged += cnt;
        ledger.charge(cnt);
        proj[idx] = std::move(pr);
    });

    IterationResult res;
    if (subsolver == Subsolver::exact) {
        auto sub = exact_cover_masks(proj, target);
        if (sub.status == ExactCoverResult::Status::uncoverable)
            res.coverable = false;
        else
            res.picked = std::move(sub.witness);
    } else {
        auto sub = greedy_cover_masks(proj, target);
        res.coverable = sub.complete;
        if (sub.complete) res.picked = std::move(sub.picked);
    }
    ledger.discharge(charged);
    proj.clear();

    // Removal pass: subtract the full picked sets from the sample. The pass
    // runs even when nothing was picked; the schedule is fixed.
    std::vector<std::uint8_t> picked_flag(m, 0);
    for (std::size_t i : res.picked) picked_flag[i] = 1;
    Bitmask remaining = target;
    stream.run_pass([&](std::size_t idx, const ElementSet& s) {
        if (picked_flag[idx]) remaining.subtract(s.to_bitmask(n));
    });
    res.remaining = ElementSet::from_bitmask(remaining);
    return res;
}

std::vector<std::uint64_t> guess_schedule(std::uint64_t n, double eps) {
    std::vector<std::uint64_t> guesses;
    for (int j = 0;; ++j) {
        const double raw = std::pow(1.0 + eps, j);
        std::uint64_t g = static_cast<std::uint64_t>(std::ceil(raw));
        const bool last = g >= n;
        if (last) g = n;
        if (guesses.empty() || guesses.back() != g) guesses.push_back(g);
        if (last) break;
    }
    return guesses;
}

namespace {

struct GuessState {
    std::uint64_t guess = 0;
    std::uint64_t threshold = 0;
    double p = 0.0;

    Bitmask uncovered;  // U_g; its current size stays charged while held
    std::uint64_t u_charge = 0;
    std::vector<std::size_t> sol;
    std::size_t sol0_size = 0;
    std::size_t largest_subcover = 0;
    bool failed = false;

    Bitmask sample;
    std::uint64_t sample_charge = 0;
    std::vector<Bitmask> proj;
    std::uint64_t proj_charge = 0;
    std::vector<std::uint8_t> picked_flag;

    // Releases everything this guess holds and takes it out of the run.
    void fail(SpaceLedger& ledger) {
        failed = true;
        ledger.discharge(proj_charge + sample_charge + u_charge);
        proj_charge = 0;
        sample_charge = 0;
        u_charge = 0;
        proj.clear();
        picked_flag.clear();
    }

    // Space-cutoff behavior: a guess whose storage would push the ledger
    // past the budget is marked failed instead of aborting the run.
    bool try_charge(std::uint64_t amount, SpaceLedger& ledger,
                    const std::optional<std::uint64_t>& budget) {
        if (budget && ledger.current_entries() + amount > *budget) {
            fail(ledger);
            return false;
        }
        ledger.charge(amount);
        return true;
    }
};

SolveResult finish(const SetStream& stream, const SpaceLedger& ledger,
                   const std::vector<GuessState>& states, SolveResult res) {
    res.passes_used = stream.passes_used();
    res.peak_entries = ledger.peak_entries();

    std::size_t best = states.size();
    for (std::size_t g = 0; g < states.size(); ++g) {
        const auto& st = states[g];
        const bool feasible = !st.failed && st.uncovered.empty();
        res.per_guess.push_back(
            {st.guess, feasible, st.sol.size(), st.sol0_size, st.largest_subcover});
        if (feasible && (best == states.size() || st.sol.size() < states[best].sol.size()))
            best = g;
    }
    res.feasible = best != states.size();
    if (!res.feasible) {
        // Fall back to the partial cover with the most coverage.
        std::size_t best_cov = 0;
        for (std::size_t g = 0; g < states.size(); ++g) {
            const std::size_t cov =
                states[g].uncovered.size_bits() - states[g].uncovered.count();
            if (best == states.size() || cov > best_cov) {
                best = g;
                best_cov = cov;
            }
        }
    }
    if (best != states.size()) {
        res.chosen = states[best].sol;
        res.winning_guess = states[best].guess;
    }
    return res;
}

}  // namespace

SolveResult solve(SetStream& stream, const SolverConfig& config) {
    validate(config);
    const std::size_t n = stream.universe_size();
    const std::size_t m = stream.set_count();
    Rng rng(config.seed);
    SpaceLedger ledger;
    SolveResult res;

    std::vector<std::uint64_t> guesses;
    if (config.guess_override)
        guesses.push_back(*config.guess_override);
    else
        guesses = guess_schedule(n, config.eps);

    std::vector<GuessState> states(guesses.size());
    for (std::size_t g = 0; g < guesses.size(); ++g) {
        auto& st = states[g];
        st.guess = guesses[g];
        st.threshold = prune_threshold(n, config.eps, st.guess);
        st.p = sampling_probability(n, std::max<std::uint64_t>(m, 2), st.guess,
                                    config.alpha, config);
        st.uncovered = Bitmask::full(n);
        if (st.try_charge(n, ledger, config.ledger_budget)) st.u_charge = n;
    }

    // Pass 1: prune. The union of everything seen rides along so uncoverable
    // instances are detected right after this pass.
    Bitmask seen(n);
    std::uint64_t seen_charge = 0;
    stream.run_pass([&](std::size_t idx, const ElementSet& s) {
        const Bitmask mask = s.to_bitmask(n);
        seen |= mask;
        const std::uint64_t c = seen.count();
        ledger.charge(c - seen_charge);
        seen_charge = c;
        for (auto& st : states) {
            if (st.failed) continue;
            const std::size_t gain = st.uncovered.count_and(mask);
            if (gain >= st.threshold) {
                st.sol.push_back(idx);
                st.uncovered.subtract(mask);
                ledger.discharge(gain);
                st.u_charge -= gain;
            }
        }
    });
    const bool coverable = seen.count() == n;
    ledger.discharge(seen_charge);
    for (auto& st : states) st.sol0_size = st.sol.size();

    if (!coverable) {
        for (auto& st : states) st.failed = true;
        return finish(stream, ledger, states, std::move(res));
    }

    for (std::uint32_t iter = 0; iter < config.alpha; ++iter) {
        // Each guess draws a fresh sample from its current uncovered universe.
        for (auto& st : states) {
            st.sample = Bitmask(n);
            st.sample_charge = 0;
            if (st.failed) continue;
            st.uncovered.for_each([&](std::size_t e) {
                if (rng.bernoulli(st.p)) st.sample.set(e);
            });
            const std::uint64_t cnt = st.sample.count();
            if (st.try_charge(cnt, ledger, config.ledger_budget))
                st.sample_charge = cnt;
        }

        // Collect pass: store projections, one charged entry per element.
        for (auto& st : states)
            if (!st.failed) st.proj.assign(m, Bitmask(n));
        stream.run_pass([&](std::size_t idx, const ElementSet& s) {
            const Bitmask mask = s.to_bitmask(n);
            for (auto& st : states) {
                if (st.failed) continue;
                Bitmask pr = mask;
                pr &= st.sample;
                const std::uint64_t cnt = pr.count();
                res.proj_entries_expected +=
                    static_cast<double>(st.uncovered.count_and(mask)) * st.p;
                if (!st.try_charge(cnt, ledger, config.ledger_budget)) continue;
                res.proj_entries_stored += cnt;
                st.proj_charge += cnt;
                st.proj[idx] = std::move(pr);
            }
        });

        // Solve each stored sub-instance, then release its storage.
        for (auto& st : states) {
            if (st.failed) continue;
            std::vector<std::size_t> picked;
            bool coverable_sub = true;
            if (config.subsolver == Subsolver::exact) {
                auto sub = exact_cover_masks(st.proj, st.sample);
                coverable_sub = sub.status != ExactCoverResult::Status::uncoverable;
                if (coverable_sub) picked = std::move(sub.witness);
            } else {
                auto sub = greedy_cover_masks(st.proj, st.sample);
                coverable_sub = sub.complete;
                if (coverable_sub) picked = std::move(sub.picked);
            }
            if (!coverable_sub) {
                st.fail(ledger);
                continue;
            }
            st.largest_subcover = std::max(st.largest_subcover, picked.size());
            st.picked_flag.assign(m, 0);
            for (std::size_t i : picked) {
                st.picked_flag[i] = 1;
                st.sol.push_back(i);
            }
            ledger.discharge(st.proj_charge);
            st.proj_charge = 0;
            st.proj.clear();
        }

        // Removal pass: subtract full picked sets from the uncovered trackers.
        stream.run_pass([&](std::size_t idx, const ElementSet& s) {
            for (auto& st : states) {
                if (st.failed || st.picked_flag.empty() || !st.picked_flag[idx])
                    continue;
                const Bitmask mask = s.to_bitmask(n);
                const std::uint64_t delta = st.uncovered.count_and(mask);
                st.uncovered.subtract(mask);
                ledger.discharge(delta);
                st.u_charge -= delta;
            }
        });

        for (auto& st : states) {
            if (st.failed) continue;
            ledger.discharge(st.sample_charge);
            st.sample_charge = 0;
            st.picked_flag.clear();
        }
    }

    return finish(stream, ledger, states, std::move(res));
}

SolveResult solve_for_guess(SetStream& stream, std::uint64_t guess,
                            const SolverConfig& config) {
    SolverConfig single = config;
    single.guess_override = guess;
    return solve(stream, single);
}

}  // namespace covstream
