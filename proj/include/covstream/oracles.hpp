#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "covstream/core.hpp"

namespace covstream {

/// Raised when a cover is requested but some element lies in no set.
class UncoverableError : public std::runtime_error {
public:
    explicit UncoverableError(Element e)
        : std::runtime_error("element " + std::to_string(e) + " lies in no set"),
          element_(e) {}
    Element element() const { return element_; }

private:
    Element element_;
};

struct ExactCoverResult {
    enum class Status { optimal, exceeds_cap, uncoverable };

    Status status = Status::optimal;
    std::size_t opt_size = 0;              // valid when optimal
    std::vector<std::size_t> witness;      // feasible, |witness| == opt_size
    std::uint64_t nodes_explored = 0;
    Element uncoverable_element = 0;       // valid when uncoverable
};

struct MaxCoverResult {
    std::size_t k = 0;
    std::size_t best_value = 0;
    std::vector<std::size_t> witness;      // lexicographically smallest maximizer
};

struct GreedyMaskResult {
    std::vector<std::size_t> picked;
    bool complete = false;                 // target fully covered
};

std::uint64_t hamming_distance(const ElementSet& a, const ElementSet& b);

/// Exact minimum set cover by branch and bound over bitmask universes:
/// branch on the lowest uncovered element across the sets containing it,
/// greedy-derived upper bound, lower bound ceil(|uncovered| / max gain).
/// With `cap`, certifies only "no cover of size <= cap exists" when the
/// optimum lies beyond it. Guard: universe_size <= 4096.
ExactCoverResult exact_set_cover(const SetSystem& system,
                                 std::optional<std::size_t> cap = std::nullopt);

/// Iteratively picks the set covering the most uncovered elements; ties go
/// to the lowest index. Throws UncoverableError on infeasible instances.
std::vector<std::size_t> greedy_set_cover(const SetSystem& system);

/// Exact maximum coverage over all k-subsets, ties broken by the
/// lexicographically smallest index tuple. Guard: k <= 3 or m <= 64.
MaxCoverResult exact_max_coverage(const SetSystem& system, std::size_t k);

// Mask-level cores, shared with the streaming solver's sub-instance step.
// `target` is the set of elements that must be covered.
ExactCoverResult exact_cover_masks(std::span<const Bitmask> sets, const Bitmask& target,
                                   std::optional<std::size_t> cap = std::nullopt);
GreedyMaskResult greedy_cover_masks(std::span<const Bitmask> sets, const Bitmask& target);

}  // namespace covstream
