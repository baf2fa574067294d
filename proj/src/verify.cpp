#include "covstream/verify.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "covstream/hardgen.hpp"
#include "covstream/oracles.hpp"
#include "covstream/solver.hpp"
#include "covstream/stream.hpp"

namespace covstream {

namespace {

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

// Sum_{i<=r} C(n, i), saturating; guards enumeration budgets.
double subsets_up_to(std::uint64_t n, std::uint64_t r) {
    double total = 0.0, c = 1.0;
    for (std::uint64_t i = 0; i <= r; ++i) {
        total += c;
        c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (total > 1e18) return total;
    }
    return total;
}

Bitmask random_exact_size_subset(std::uint64_t n, std::uint64_t size, Rng& rng,
                                 std::vector<Element>& scratch) {
    scratch.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) scratch[i] = static_cast<Element>(i);
    Bitmask b(n);
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t j = i + rng.below(n - i);
        std::swap(scratch[i], scratch[j]);
        b.set(scratch[i]);
    }
    return b;
}

}  // namespace

std::string to_kv(const TrialReport& report) {
    std::string out = "lemma=" + report.lemma_id;
    out += " trials=" + std::to_string(report.trials);
    out += " successes=" + std::to_string(report.successes);
    out += " empirical_rate=" + format_double(report.empirical_rate);
    out += " paper_bound=";
    out += report.paper_bound ? format_double(*report.paper_bound) : "none";
    out += " seed=" + std::to_string(report.seed.value);
    for (const auto& [key, value] : report.params)
        out += " " + key + "=" + format_double(value);
    out += "\n";
    return out;
}

std::string to_json(const TrialReport& report) {
    nlohmann::ordered_json j;
    j["lemma"] = report.lemma_id;
    j["trials"] = report.trials;
    j["successes"] = report.successes;
    j["empirical_rate"] = report.empirical_rate;
    j["paper_bound"] =
        report.paper_bound ? nlohmann::ordered_json(*report.paper_bound)
                           : nlohmann::ordered_json(nullptr);
    j["seed"] = report.seed.value;
    for (const auto& [key, value] : report.params) j["params"][key] = value;
    return j.dump(2) + "\n";
}

SetSystem planted_partition_instance(std::uint64_t n, std::uint64_t m, std::uint64_t k,
                                     Rng& rng) {
    if (k < 1 || k > m) throw std::invalid_argument("need 1 <= k <= m");
    if (n < k) throw std::invalid_argument("need n >= k");

    std::vector<Element> perm(n);
    for (std::uint64_t i = 0; i < n; ++i) perm[i] = static_cast<Element>(i);
    rng.shuffle(perm);

    std::vector<ElementSet> sets;
    sets.reserve(m);
    // k near-equal blocks of the shuffled universe.
    std::uint64_t at = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t len = n / k + (i < n % k ? 1 : 0);
        sets.push_back(ElementSet(std::vector<Element>(
            perm.begin() + static_cast<std::ptrdiff_t>(at),
            perm.begin() + static_cast<std::ptrdiff_t>(at + len))));
        at += len;
    }
    std::vector<Element> scratch;
    for (std::uint64_t i = k; i < m; ++i) {
        Bitmask b = random_exact_size_subset(n, n / 2, rng, scratch);
        sets.push_back(ElementSet::from_bitmask(b));
    }

    std::vector<std::size_t> order(m);
    for (std::uint64_t i = 0; i < m; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<ElementSet> shuffled;
    shuffled.reserve(m);
    for (std::size_t i : order) shuffled.push_back(std::move(sets[i]));
    return SetSystem(n, std::move(shuffled));
}

TrialReport check_coverage_lemma(std::uint64_t n, std::uint64_t s, std::uint64_t k,
                                 std::uint64_t u_size, std::uint64_t trials, Seed seed) {
    if (s > n || u_size > n || k < 1)
        throw std::invalid_argument("check_coverage_lemma: need s <= n, u_size <= n, k >= 1");

    const double ratio_pow = std::pow(static_cast<double>(s) / (2.0 * static_cast<double>(n)),
                                      static_cast<double>(k));
    const double threshold = static_cast<double>(u_size) / 2.0 * ratio_pow;
    const double bound = 2.0 * std::exp(-static_cast<double>(u_size) / 8.0 * ratio_pow);

    Bitmask u(n);
    for (std::uint64_t e = 0; e < u_size; ++e) u.set(e);

    std::uint64_t bad = 0;
    std::vector<Element> scratch;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng(seed.derive(trial));
        Bitmask covered(n);
        for (std::uint64_t i = 0; i < k; ++i)
            covered |= random_exact_size_subset(n, n - s, rng, scratch);
        Bitmask left = u;
        left.subtract(covered);
        if (static_cast<double>(left.count()) < threshold) ++bad;
    }

    TrialReport report;
    report.lemma_id = "coverage";
    report.trials = trials;
    report.successes = trials - bad;
    report.empirical_rate = trials ? static_cast<double>(report.successes) /
                                         static_cast<double>(trials)
                                   : 0.0;
    report.paper_bound = bound;
    report.seed = seed;
    report.params = {{"n", static_cast<double>(n)},
                     {"s", static_cast<double>(s)},
                     {"k", static_cast<double>(k)},
                     {"u_size", static_cast<double>(u_size)},
                     {"threshold", threshold}};
    return report;
}

TrialReport check_sc_opt_gap(std::uint64_t n, std::uint64_t m, std::uint64_t t,
                             std::uint32_t alpha, std::uint64_t trials, Seed seed) {
    if (subsets_up_to(2 * m, 2 * alpha) > 5e7)
        throw std::invalid_argument(
            "check_sc_opt_gap: enumeration budget exceeded; use smaller m or alpha");

    std::uint64_t gap_holds = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        // theta = 0: certify no cover of size <= 2 alpha, and the matched-pair
        // structure exactly.
        auto inst = gen_sc(n, m, t, alpha, 0, seed.derive(2 * trial));
        for (std::uint64_t i = 0; i < m; ++i) {
            const std::size_t idx[2] = {static_cast<std::size_t>(i),
                                        static_cast<std::size_t>(m + i)};
            const std::size_t covered = coverage(inst.system, idx).size();
            if (covered != n - n / t)
                throw std::logic_error("gen_sc invariant violated: matched pair misses " +
                                       std::to_string(n - covered) + " != n/t elements");
        }
        auto res = exact_set_cover(inst.system, 2 * alpha);
        if (res.status == ExactCoverResult::Status::exceeds_cap) ++gap_holds;

        // theta = 1 companion: the planted pair covers, every time.
        auto planted = gen_sc(n, m, t, alpha, 1, seed.derive(2 * trial + 1));
        const std::size_t i_star = *planted.i_star;
        const std::size_t pair_idx[2] = {i_star, static_cast<std::size_t>(m) + i_star};
        if (!is_feasible_cover(planted.system, pair_idx))
            throw std::logic_error("gen_sc invariant violated: planted pair does not cover");
    }

    TrialReport report;
    report.lemma_id = "sc-opt";
    report.trials = trials;
    report.successes = gap_holds;
    report.empirical_rate =
        trials ? static_cast<double>(gap_holds) / static_cast<double>(trials) : 0.0;
    report.paper_bound = std::nullopt;  // the known rate is asymptotic, 1 - o(1)
    report.seed = seed;
    report.params = {{"n", static_cast<double>(n)},
                     {"m", static_cast<double>(m)},
                     {"t", static_cast<double>(t)},
                     {"alpha", static_cast<double>(alpha)}};
    return report;
}

TrialReport check_element_sampling(std::uint64_t n, std::uint64_t m, std::uint64_t k,
                                   double rho, std::uint64_t trials, Seed seed) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("check_element_sampling: rho must lie in (0, 1)");
    if (subsets_up_to(m, k) > 1e6)
        throw std::invalid_argument(
            "check_element_sampling: C(m, k) enumeration budget exceeded");

    const double p = std::min(
        1.0, 16.0 * static_cast<double>(k) * std::log(static_cast<double>(m)) /
                 (rho * static_cast<double>(n)));
    const double needed = (1.0 - rho) * static_cast<double>(n);

    std::uint64_t ok = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng(seed.derive(trial));
        SetSystem system = planted_partition_instance(n, m, k, rng);
        std::vector<Bitmask> masks;
        masks.reserve(m);
        for (const auto& s : system.sets()) masks.push_back(s.to_bitmask(n));

        Bitmask sample(n);
        for (std::uint64_t e = 0; e < n; ++e)
            if (rng.bernoulli(p)) sample.set(e);

        // Every k-subset covering the sample must cover >= (1 - rho) n truly.
        bool good = true;
        std::vector<std::size_t> idx(k);
        for (std::uint64_t i = 0; i < k; ++i) idx[i] = i;
        for (;;) {
            Bitmask u(n);
            for (std::size_t i : idx) u |= masks[i];
            Bitmask missed = sample;
            missed.subtract(u);
            if (missed.empty() && static_cast<double>(u.count()) < needed) {
                good = false;
                break;
            }
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (good) ++ok;
    }

    TrialReport report;
    report.lemma_id = "sampling";
    report.trials = trials;
    report.successes = ok;
    report.empirical_rate =
        trials ? static_cast<double>(ok) / static_cast<double>(trials) : 0.0;
    report.paper_bound = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    report.seed = seed;
    report.params = {{"n", static_cast<double>(n)},
                     {"m", static_cast<double>(m)},
                     {"k", static_cast<double>(k)},
                     {"rho", rho},
                     {"p", p}};
    return report;
}

TrialReport check_mc_gap(std::uint64_t m, std::uint64_t t1, std::uint64_t a,
                         std::uint64_t b, std::uint64_t trials, Seed seed) {
    if (m > 64) throw std::invalid_argument("check_mc_gap: need m <= 64");

    std::uint64_t correct = 0;
    std::uint64_t cross_violations = 0;
    double tau = 0.0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        auto lo = gen_mc(m, t1, a, b, 0, seed.derive(2 * trial));
        auto hi = gen_mc(m, t1, a, b, 1, seed.derive(2 * trial + 1));
        tau = lo.tau;

        const auto v0 = exact_max_coverage(lo.system, 2).best_value;
        const auto v1 = exact_max_coverage(hi.system, 2).best_value;
        if (static_cast<double>(v1) > tau && static_cast<double>(v0) < tau) ++correct;

        // Cross-pair audit on the theta = 0 instance.
        const double cross_bound = (0.75 + 0.2) * static_cast<double>(lo.t2) +
                                   static_cast<double>(t1);
        for (std::uint64_t i = 0; i < 2 * m; ++i)
            for (std::uint64_t j = i + 1; j < 2 * m; ++j) {
                if (j == i + m) continue;  // matched pair, not a cross pair
                const std::size_t idx[2] = {static_cast<std::size_t>(i),
                                            static_cast<std::size_t>(j)};
                if (static_cast<double>(coverage(lo.system, idx).size()) > cross_bound)
                    ++cross_violations;
            }
    }

    TrialReport report;
    report.lemma_id = "mc-gap";
    report.trials = trials;
    report.successes = correct;
    report.empirical_rate =
        trials ? static_cast<double>(correct) / static_cast<double>(trials) : 0.0;
    report.paper_bound = std::nullopt;  // the known rate is asymptotic, 1 - o(1)
    report.seed = seed;
    report.params = {{"m", static_cast<double>(m)},
                     {"t1", static_cast<double>(t1)},
                     {"a", static_cast<double>(a)},
                     {"b", static_cast<double>(b)},
                     {"tau", tau},
                     {"cross_pair_violations", static_cast<double>(cross_violations)}};
    return report;
}

TrialReport check_solver_contract(std::uint64_t n, std::uint64_t m, std::uint32_t alpha,
                                  double eps, std::uint64_t planted_opt,
                                  std::uint64_t trials, Seed seed) {
    const double sol_cap = std::ceil((static_cast<double>(alpha) + eps) * (1.0 + eps) *
                                     static_cast<double>(planted_opt));

    std::uint64_t ok = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng(seed.derive(2 * trial));
        SetSystem system = planted_partition_instance(n, m, planted_opt, rng);
        SetStream stream = SetStream::from_system(system, StreamOrder::adversarial);

        SolverConfig config;
        config.alpha = alpha;
        config.eps = eps;
        config.seed = seed.derive(2 * trial + 1);
        SolveResult res = solve(stream, config);

        if (res.passes_used != 2 * alpha + 1)
            throw std::logic_error("pass budget violated: " +
                                   std::to_string(res.passes_used) + " passes");
        if (res.feasible && !is_feasible_cover(system, res.chosen))
            throw std::logic_error("solver reported an infeasible cover as feasible");
        if (res.feasible && static_cast<double>(res.chosen.size()) <= sol_cap) ++ok;
    }

    TrialReport report;
    report.lemma_id = "solver";
    report.trials = trials;
    report.successes = ok;
    report.empirical_rate =
        trials ? static_cast<double>(ok) / static_cast<double>(trials) : 0.0;
    report.paper_bound = 1.0 / static_cast<double>(m);
    report.seed = seed;
    report.params = {{"n", static_cast<double>(n)},
                     {"m", static_cast<double>(m)},
                     {"alpha", static_cast<double>(alpha)},
                     {"eps", eps},
                     {"planted_opt", static_cast<double>(planted_opt)},
                     {"sol_cap", sol_cap}};
    return report;
}

}  // namespace covstream
