#include <doctest.h>

#include <cmath>

#include "covstream/solver.hpp"
#include "covstream/verify.hpp"
#include "test_support.hpp"

using namespace covstream;
using namespace covstream::testing;

TEST_SUITE_BEGIN("solver");

TEST_CASE("sampling probability follows the clamped formula") {
    SolverConfig cfg;

    // 16 * 4 * ln(64) / 1024^(1/2) is well above 1, so it clamps.
    CHECK(sampling_probability(1024, 64, 4, 2, cfg) == 1.0);

    // 16 * ln(64) / 1000; frozen from an independent evaluation of the
    // formula: 16 * 4.1588830833596715 / 1000.
    CHECK(sampling_probability(1'000'000, 64, 1, 2, cfg) ==
          doctest::Approx(0.066542129333).epsilon(1e-9));

    SolverConfig base2 = cfg;
    base2.log_base = LogBase::base2;
    CHECK(sampling_probability(1'000'000, 64, 1, 2, base2) ==
          doctest::Approx(16.0 * 6.0 / 1000.0).epsilon(1e-12));

    CHECK_THROWS_AS(sampling_probability(0, 64, 1, 2, cfg), std::invalid_argument);
    CHECK_THROWS_AS(sampling_probability(16, 1, 1, 2, cfg), std::invalid_argument);
}

TEST_CASE("sample_universe keeps everything at p=1 and nothing at p=0") {
    Rng rng(Seed{1});
    auto u = range_set(0, 100);
    CHECK(sample_universe(u, 1.0, rng) == u);
    CHECK(sample_universe(u, 0.0, rng).empty());
}

TEST_CASE("sample_universe hits the binomial mean") {
    // |U| = 10000, p = 0.1: the mean over 100 trials concentrates within
    // +/- 100 of 1000 (3 sigma of the trial mean is about 9, so the band is
    // generous).
    auto u = range_set(0, 10000);
    Seed base{404};
    double total = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(base.derive(trial));
        total += static_cast<double>(sample_universe(u, 0.1, rng).size());
    }
    const double mean = total / 100.0;
    CHECK(mean > 900.0);
    CHECK(mean < 1100.0);
}

TEST_CASE("prune threshold clamps at the universe size") {
    CHECK(prune_threshold(100, 0.5, 4) == 50);
    CHECK(prune_threshold(100, 0.5, 1) == 100);   // raw 200 clamps to n
    CHECK(prune_threshold(1024, 0.5, 2048) == 1); // tiny raw threshold
}

TEST_CASE("prune pass picks against the evolving uncovered universe") {
    // Hand trace: threshold n/(eps*guess) = 50. Set 0 gains 60 (picked),
    // set 1 then gains only 40 (skipped), set 2 gains 10 (skipped).
    std::vector<Element> s0, s1, s2;
    for (Element e = 0; e < 60; ++e) s0.push_back(e);
    for (Element e = 45; e < 100; ++e) s1.push_back(e);
    for (Element e = 0; e < 70; ++e) s2.push_back(e);
    SetSystem sys(100, {ElementSet(s0), ElementSet(s1), ElementSet(s2)});

    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    auto res = prune_pass(stream, 4, 0.5, ledger);
    CHECK(res.picked == std::vector<std::size_t>{0});
    CHECK(res.uncovered == range_set(60, 100));
    CHECK(stream.passes_used() == 1);
}

TEST_CASE("prune pass with clamped threshold still picks a full set") {
    auto sys = make_system(8, {{0, 1, 2, 3, 4, 5, 6, 7}, {0, 1}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    // eps * guess = 0.5 < 1: unclamped threshold would exceed n.
    auto res = prune_pass(stream, 1, 0.5, ledger);
    CHECK(res.picked == std::vector<std::size_t>{0});
    CHECK(res.uncovered.empty());
}

TEST_CASE("prune pass picks nothing when all sets are small") {
    auto sys = make_system(100, {{0, 1}, {5, 6, 7}, {50}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    auto res = prune_pass(stream, 4, 0.5, ledger);
    CHECK(res.picked.empty());
    CHECK(res.uncovered.size() == 100);
}

TEST_CASE("prune pass pick count stays within the epsilon budget") {
    Rng rng(Seed{31337});
    for (int round = 0; round < 30; ++round) {
        auto sys = random_system(128, 24, 0.35, rng);
        auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
        SpaceLedger ledger;
        const std::uint64_t guess = 1 + rng.below(16);
        const double eps = 0.1 + 0.8 * rng.unit();
        auto res = prune_pass(stream, guess, eps, ledger);
        const double budget = std::max(1.0, std::ceil(eps * static_cast<double>(guess)));
        CHECK(static_cast<double>(res.picked.size()) <= budget);
    }
}

TEST_CASE("iteration consumes two passes even on an empty sample") {
    auto sys = make_system(6, {{0, 1, 2}, {3, 4, 5}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    auto res = iteration(stream, ElementSet{}, ledger);
    CHECK(res.picked.empty());
    CHECK(res.coverable);
    CHECK(stream.passes_used() == 2);
}

TEST_CASE("iteration picks a single covering set") {
    auto sys = make_system(6, {{0, 2}, {0, 1, 2, 3, 4, 5}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    auto res = iteration(stream, es({1, 4}), ledger);
    CHECK(res.picked == std::vector<std::size_t>{1});
    CHECK(res.remaining.empty());
}

TEST_CASE("iteration agrees with the exact oracle on the projection") {
    // Projection equals the four-set instance with optimum 2.
    auto sys = make_system(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    auto res = iteration(stream, range_set(0, 4), ledger);
    CHECK(res.picked.size() == 2);
    CHECK(res.remaining.empty());
    CHECK(res.coverable);
    // Stored projections were charged and then released.
    CHECK(ledger.peak_entries() >= 8);
    CHECK(ledger.current_entries() == 0);
}

TEST_CASE("iteration reports an uncoverable sample") {
    auto sys = make_system(4, {{0, 1}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    auto res = iteration(stream, es({2}), ledger);
    CHECK_FALSE(res.coverable);
    CHECK(stream.passes_used() == 2);
}

TEST_CASE("guess schedule walks ceil((1+eps)^j) up to n") {
    CHECK(guess_schedule(8, 1.0 - 1e-12) == std::vector<std::uint64_t>{1, 2, 4, 8});
    CHECK(guess_schedule(10, 0.99999999) == std::vector<std::uint64_t>{1, 2, 4, 8, 10});
    CHECK(guess_schedule(1, 0.5) == std::vector<std::uint64_t>{1});
    auto sched = guess_schedule(1024, 0.5);
    CHECK(sched.front() == 1);
    CHECK(sched.back() == 1024);
    for (std::size_t i = 1; i < sched.size(); ++i) CHECK(sched[i] > sched[i - 1]);
}

TEST_CASE("solve uses exactly 2 alpha + 1 passes and verifies feasibility") {
    auto sys = make_system(12, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},
                                {0, 3},
                                {5, 6, 7},
                                {1, 2, 11}});
    for (std::uint32_t alpha = 1; alpha <= 3; ++alpha) {
        auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
        SolverConfig cfg;
        cfg.alpha = alpha;
        cfg.eps = 0.5;
        cfg.seed = Seed{9};
        auto res = solve(stream, cfg);
        CHECK(res.passes_used == 2 * alpha + 1);
        REQUIRE(res.feasible);
        CHECK(is_feasible_cover(sys, res.chosen));
        CHECK(res.chosen.size() <= 1 + alpha);  // dominant set instance
    }
}

TEST_CASE("guess override runs a single guess") {
    auto sys = make_system(8, {{0, 1, 2, 3}, {4, 5, 6, 7}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SolverConfig cfg;
    cfg.alpha = 1;
    cfg.seed = Seed{1};
    cfg.guess_override = 2;
    auto res = solve(stream, cfg);
    REQUIRE(res.per_guess.size() == 1);
    CHECK(res.per_guess[0].guess == 2);
    CHECK(res.winning_guess == 2);
    CHECK(res.feasible);
}

TEST_CASE("solve result is the best per-guess outcome") {
    Rng rng(Seed{5150});
    for (int round = 0; round < 10; ++round) {
        auto sys = random_system(64, 12, 0.5, rng);
        auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
        SolverConfig cfg;
        cfg.alpha = 2;
        cfg.seed = Seed{rng.next_u64()};
        auto res = solve(stream, cfg);
        auto exact = exact_set_cover(sys);
        for (const auto& outcome : res.per_guess) {
            if (outcome.feasible && res.feasible)
                CHECK(res.chosen.size() <= outcome.sol_size);
            // Honest size reporting per guess.
            if (outcome.feasible)
                CHECK(outcome.sol_size <=
                      outcome.sol0_size + cfg.alpha * outcome.largest_subcover);
            // The approximation bound for adequate guesses whose sub-covers
            // stayed within the guess.
            if (outcome.feasible &&
                exact.status == ExactCoverResult::Status::optimal &&
                outcome.guess >= exact.opt_size &&
                outcome.largest_subcover <= outcome.guess)
                CHECK(static_cast<double>(outcome.sol_size) <=
                      std::ceil(cfg.eps * static_cast<double>(outcome.guess)) +
                          cfg.alpha * static_cast<double>(outcome.guess));
        }
        if (res.feasible) CHECK(is_feasible_cover(sys, res.chosen));
    }
}

TEST_CASE("solve is deterministic for a fixed seed") {
    Rng rng(Seed{8080});
    auto sys = random_system(96, 16, 0.4, rng);
    SolverConfig cfg;
    cfg.alpha = 2;
    cfg.eps = 0.3;
    cfg.seed = Seed{777};

    auto s1 = SetStream::from_system(sys, StreamOrder::adversarial);
    auto s2 = SetStream::from_system(sys, StreamOrder::adversarial);
    auto r1 = solve(s1, cfg);
    auto r2 = solve(s2, cfg);
    CHECK(r1.chosen == r2.chosen);
    CHECK(r1.feasible == r2.feasible);
    CHECK(r1.winning_guess == r2.winning_guess);
    CHECK(r1.peak_entries == r2.peak_entries);
    CHECK(r1.proj_entries_stored == r2.proj_entries_stored);
}

TEST_CASE("uncoverable instances fail after a single scan pass") {
    auto sys = make_system(5, {{0, 1}, {2, 3}});  // element 4 nowhere
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SolverConfig cfg;
    cfg.alpha = 2;
    cfg.seed = Seed{3};
    auto res = solve(stream, cfg);
    CHECK_FALSE(res.feasible);
    CHECK(res.passes_used == 1);
}

TEST_CASE("a single-element universe solves immediately") {
    auto sys = make_system(1, {{0}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SolverConfig cfg;
    cfg.alpha = 2;
    cfg.seed = Seed{1};
    auto res = solve(stream, cfg);
    REQUIRE(res.feasible);
    CHECK(res.chosen == std::vector<std::size_t>{0});
    CHECK(res.passes_used == 5);
}

TEST_CASE("an empty stream is infeasible") {
    SetSystem sys(4, {});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SolverConfig cfg;
    cfg.seed = Seed{3};
    auto res = solve(stream, cfg);
    CHECK_FALSE(res.feasible);
    CHECK(res.chosen.empty());
    CHECK(res.passes_used == 1);
}

TEST_CASE("planted instances solve within the approximation bound") {
    // Smaller sibling of the acceptance run: n=256, m=24, alpha=2, eps=0.5,
    // planted opt 3; bound (alpha + eps) * opt rounds down to 7.
    Seed base{606};
    int good = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(base.derive(trial));
        auto sys = planted_partition_instance(256, 24, 3, rng);
        auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
        SolverConfig cfg;
        cfg.alpha = 2;
        cfg.eps = 0.5;
        cfg.seed = base.derive(1000 + trial);
        auto res = solve(stream, cfg);
        REQUIRE(res.passes_used == 5);
        if (res.feasible && is_feasible_cover(sys, res.chosen) && res.chosen.size() <= 7)
            ++good;
    }
    CHECK(good >= trials - 1);
}

TEST_CASE("greedy subsolver and ledger budget are honored") {
    Rng rng(Seed{9999});
    auto sys = random_system(64, 10, 0.5, rng);

    SolverConfig cfg;
    cfg.alpha = 1;
    cfg.seed = Seed{12};
    cfg.subsolver = Subsolver::greedy;
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    auto res = solve(stream, cfg);
    CHECK(res.passes_used == 3);
    if (res.feasible) CHECK(is_feasible_cover(sys, res.chosen));

    // A budget too small for anything: every guess fails, infeasible result.
    SolverConfig tight = cfg;
    tight.ledger_budget = 4;
    auto stream2 = SetStream::from_system(sys, StreamOrder::adversarial);
    auto res2 = solve(stream2, tight);
    CHECK_FALSE(res2.feasible);
}

TEST_SUITE_END();
