#include "covstream/oracles.hpp"

#include <algorithm>

namespace covstream {

std::uint64_t hamming_distance(const ElementSet& a, const ElementSet& b) {
    // |a ^ b| = |a| + |b| - 2|a & b|, via a single sorted merge.
    std::size_t common = 0;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return a.size() + b.size() - 2 * common;
}

GreedyMaskResult greedy_cover_masks(std::span<const Bitmask> sets, const Bitmask& target) {
    GreedyMaskResult res;
    Bitmask uncovered = target;
    while (!uncovered.empty()) {
        std::size_t best = sets.size();
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            std::size_t gain = sets[i].count_and(uncovered);
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == sets.size()) return res;  // some element in no set
        res.picked.push_back(best);
        uncovered.subtract(sets[best]);
    }
    res.complete = true;
    return res;
}

namespace {

// Depth-budgeted DFS with the trivial bound ceil(|uncovered| / max gain),
// run under iterative deepening from the greedy upper bound. A budget-s
// search visits only nodes that could still finish within s sets, which is
// what keeps refutations ("no cover of size <= s") cheap.
struct CoverSearch {
    std::span<const Bitmask> sets;
    const std::vector<std::vector<std::size_t>>& sets_with;  // element -> set ids
    std::uint64_t nodes = 0;
    std::vector<std::size_t> chain{};
    std::vector<std::size_t> gains{};                                 // per-set scratch
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cands_by_depth{};
    std::vector<Bitmask> scratch_by_depth{};

    bool dfs(const Bitmask& uncovered, std::size_t cnt, std::size_t budget,
             std::size_t depth) {
        ++nodes;
        if (cnt == 0) return true;
        if (budget == 0) return false;

        if (budget == 1) {
            // Only a single containing set can finish; it must hold the
            // lowest uncovered element.
            for (std::size_t i : sets_with[uncovered.first()]) {
                if (sets[i].covers(uncovered)) {
                    chain.push_back(i);
                    return true;
                }
            }
            return false;
        }

        // One gain sweep feeds both the bound and the candidate ordering.
        gains.assign(sets.size(), 0);
        std::size_t max_gain = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            gains[i] = sets[i].count_and(uncovered);
            if (gains[i] > max_gain) max_gain = gains[i];
        }
        if (max_gain == 0) return false;
        if ((cnt + max_gain - 1) / max_gain > budget) return false;

        auto& cands = cands_by_depth[depth];
        cands.clear();
        for (std::size_t i : sets_with[uncovered.first()])
            cands.emplace_back(i, gains[i]);
        std::stable_sort(cands.begin(), cands.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });

        for (const auto& [i, gain] : cands) {
            const std::size_t child_cnt = cnt - gain;
            // Max gain only shrinks down the tree, so the parent's max bounds
            // every child; candidates are gain-sorted, so the first one past
            // the budget ends the loop.
            if ((child_cnt + max_gain - 1) / max_gain > budget - 1) break;
            Bitmask& next = scratch_by_depth[depth];
            next = uncovered;
            next.subtract(sets[i]);
            chain.push_back(i);
            if (dfs(next, child_cnt, budget - 1, depth + 1)) return true;
            chain.pop_back();
        }
        return false;
    }
};

}  // namespace

ExactCoverResult exact_cover_masks(std::span<const Bitmask> sets, const Bitmask& target,
                                   std::optional<std::size_t> cap) {
    ExactCoverResult res;

    // Uncoverable elements are detected up front.
    Bitmask reachable(target.size_bits());
    for (const auto& s : sets) reachable |= s;
    Bitmask unreachable = target;
    unreachable.subtract(reachable);
    if (!unreachable.empty()) {
        res.status = ExactCoverResult::Status::uncoverable;
        res.uncoverable_element = static_cast<Element>(unreachable.first());
        return res;
    }

    std::vector<std::vector<std::size_t>> sets_with(target.size_bits());
    for (std::size_t i = 0; i < sets.size(); ++i)
        sets[i].for_each([&](std::size_t e) { sets_with[e].push_back(i); });

    auto greedy = greedy_cover_masks(sets, target);
    const std::size_t upper = greedy.picked.size();  // complete, by reachability
    const std::size_t sweep_to = cap ? std::min(*cap, upper) : upper;

    CoverSearch search{sets, sets_with};
    search.cands_by_depth.resize(sweep_to + 1);
    search.scratch_by_depth.assign(sweep_to + 1, Bitmask(target.size_bits()));
    const std::size_t target_cnt = target.count();
    for (std::size_t s = target.empty() ? 0 : 1; s <= sweep_to; ++s) {
        search.chain.clear();
        if (search.dfs(target, target_cnt, s, 0)) {
            res.status = ExactCoverResult::Status::optimal;
            res.opt_size = s;
            res.witness = search.chain;
            res.nodes_explored = search.nodes;
            return res;
        }
    }
    if (cap && upper > *cap) {
        res.status = ExactCoverResult::Status::exceeds_cap;
        res.nodes_explored = search.nodes;
        return res;
    }
    // The greedy witness is feasible, so the sweep must have terminated by
    // `upper` at the latest.
    res.status = ExactCoverResult::Status::optimal;
    res.opt_size = upper;
    res.witness = greedy.picked;
    res.nodes_explored = search.nodes;
    return res;
}

ExactCoverResult exact_set_cover(const SetSystem& system, std::optional<std::size_t> cap) {
    if (system.universe_size() > 4096)
        throw std::invalid_argument("exact_set_cover: universe size " +
                                    std::to_string(system.universe_size()) +
                                    " exceeds the 4096 bitmask guard");
    std::vector<Bitmask> masks;
    masks.reserve(system.set_count());
    for (const auto& s : system.sets())
        masks.push_back(s.to_bitmask(system.universe_size()));
    return exact_cover_masks(masks, Bitmask::full(system.universe_size()), cap);
}

std::vector<std::size_t> greedy_set_cover(const SetSystem& system) {
    std::vector<Bitmask> masks;
    masks.reserve(system.set_count());
    for (const auto& s : system.sets())
        masks.push_back(s.to_bitmask(system.universe_size()));
    const Bitmask target = Bitmask::full(system.universe_size());

    auto res = greedy_cover_masks(masks, target);
    if (!res.complete) {
        Bitmask uncovered = target;
        for (std::size_t i : res.picked) uncovered.subtract(masks[i]);
        for (const auto& m : masks) uncovered.subtract(m);
        throw UncoverableError(static_cast<Element>(uncovered.first()));
    }
    return res.picked;
}

MaxCoverResult exact_max_coverage(const SetSystem& system, std::size_t k) {
    const std::size_t m = system.set_count();
    if (k < 1 || k > m)
        throw std::invalid_argument("exact_max_coverage: k = " + std::to_string(k) +
                                    " out of range for m = " + std::to_string(m));
    if (k > 3 && m > 64)
        throw std::invalid_argument("exact_max_coverage: C(m, k) enumeration guard "
                                    "(need k <= 3 or m <= 64)");

    std::vector<Bitmask> masks;
    masks.reserve(m);
    for (const auto& s : system.sets())
        masks.push_back(s.to_bitmask(system.universe_size()));

    MaxCoverResult res;
    res.k = k;

    // Lexicographic enumeration with strict improvement keeps the first
    // (hence smallest) maximizer.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        Bitmask u(system.universe_size());
        for (std::size_t i : idx) u |= masks[i];
        std::size_t value = u.count();
        if (res.witness.empty() || value > res.best_value) {
            res.best_value = value;
            res.witness = idx;
        }
        // next k-combination of [0, m)
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return res;
}

}  // namespace covstream
