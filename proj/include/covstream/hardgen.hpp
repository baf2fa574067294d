#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covstream/core.hpp"
#include "covstream/solver.hpp"

namespace covstream {

/// Rejection sampling exhausted its attempt budget; the conditioning is
/// infeasible (or pathologically unlikely) at the given parameters.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Set disjointness instances
// ---------------------------------------------------------------------------

enum class DisjSide { natural, yes, no };

/// A pair (A, B) over [0, t) with label Z: Z = 0 means A and B are disjoint,
/// Z = 1 means they share exactly the planted element e_star.
struct DisjInstance {
    std::uint64_t t = 0;
    ElementSet a;
    ElementSet b;
    int z = 0;
    std::optional<Element> e_star;
};

/// Per-element trichotomy (drop from both / drop from A / drop from B), then
/// the label: `natural` flips Z fairly, `yes` forces Z = 0, `no` forces Z = 1
/// by planting a uniform common element.
DisjInstance sample_disj(std::uint64_t t, DisjSide side, Rng& rng);

// ---------------------------------------------------------------------------
// Mapping extensions
// ---------------------------------------------------------------------------

/// A function [0, t) -> blocks of n/t unique elements partitioning [0, n).
struct MappingExtension {
    std::uint64_t t = 0;
    std::uint64_t n = 0;
    std::vector<ElementSet> blocks;  // pairwise disjoint, each of size n/t

    /// Image of a subset of [0, t): the union of its blocks.
    ElementSet map_set(const ElementSet& a) const;
};

/// Uniformly random ordered partition of [0, n) into t blocks of size n/t.
/// Requires t | n.
MappingExtension sample_mapping_extension(std::uint64_t n, std::uint64_t t, Rng& rng);

/// The asymptotic block-count formula 2^-15 * (n / log m)^(1/alpha), floored
/// and then lowered to the largest divisor of n. Degenerate (< 1) at desk
/// scale; throws std::domain_error naming the raw value in that case, and
/// callers supply t explicitly instead.
std::uint64_t paper_t(std::uint64_t n, std::uint64_t m, std::uint32_t alpha,
                      LogBase log_base);

// ---------------------------------------------------------------------------
// Hard set-cover distribution
// ---------------------------------------------------------------------------

/// A 2m-set system (S_1..S_m then T_1..T_m) with S_i = [n] \ f_i(A_i) and
/// T_i = [n] \ f_i(B_i). theta = 1 plants one disjoint pair (opt <= 2);
/// theta = 0 makes every matched pair miss exactly n/t elements.
struct ScHardInstance {
    SetSystem system;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t t = 0;
    std::uint32_t alpha = 0;
    int theta = 0;
    std::optional<std::size_t> i_star;
    std::vector<DisjInstance> disj;
    std::vector<MappingExtension> maps;
    Seed seed;
};

ScHardInstance gen_sc(std::uint64_t n, std::uint64_t m, std::uint64_t t,
                      std::uint32_t alpha, std::optional<int> force_theta, Seed seed);

/// Independent fair player assignment for each of the 2m sets
/// (0 = Alice, 1 = Bob).
struct PartitionLabels {
    std::vector<std::uint8_t> labels;

    /// Good indices: matched pairs split across the two players.
    std::vector<std::size_t> good_indices() const;
};

PartitionLabels gen_sc_partition(const ScHardInstance& inst, Rng& rng);

// ---------------------------------------------------------------------------
// Gap-hamming-distance and the hard maximum-coverage distribution
// ---------------------------------------------------------------------------

enum class GhdSide { yes, no };

struct GhdPair {
    ElementSet a;  // |a| == size parameter a
    ElementSet b;
    std::uint64_t attempts = 0;  // rejection-sampling draws consumed
};

// Integerized acceptance thresholds; boundary values in between belong to
// neither side.
std::uint64_t ghd_yes_threshold(std::uint64_t t);  // ceil(t/2 + sqrt(t))
std::uint64_t ghd_no_threshold(std::uint64_t t);   // floor(t/2 - sqrt(t))

/// Uniform (a-subset, b-subset) pairs conditioned on the side's Hamming
/// distance threshold, by rejection. Throws SamplingError once max_rejects
/// attempts are exhausted.
GhdPair sample_ghd(std::uint64_t t, std::uint64_t a, std::uint64_t b, GhdSide side,
                   Rng& rng, std::uint64_t max_rejects = 1'000'000);

/// A 2m-set system over n = t1 + t2 (t2 = 10 * t1): S_i = A_i ∪ C_i and
/// T_i = B_i ∪ D_i where (A_i, B_i) are conditioned GHD pairs on U1 and
/// (C_i, D_i) randomly bipartition U2. tau = t2 + (a+b)/2 + t1/4 separates
/// the optimal 2-cover value by theta.
struct McHardInstance {
    SetSystem system;
    std::uint64_t m = 0;
    std::uint64_t t1 = 0;
    std::uint64_t t2 = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    int theta = 0;
    std::optional<std::size_t> i_star;
    std::vector<std::pair<ElementSet, ElementSet>> ghd;         // (A_i, B_i)
    std::vector<std::pair<ElementSet, ElementSet>> partitions;  // (C_i, D_i)
    double tau = 0.0;
    Seed seed;
};

/// a and b default to t1/2 when not given. Requires t1 >= 4.
McHardInstance gen_mc(std::uint64_t m, std::uint64_t t1, std::optional<std::uint64_t> a,
                      std::optional<std::uint64_t> b, std::optional<int> force_theta,
                      Seed seed);

// ---------------------------------------------------------------------------
// Metadata sidecars
// ---------------------------------------------------------------------------

struct MetaOptions {
    bool full_witness = false;               // include A_i/B_i/blocks/C_i/D_i
    const PartitionLabels* labels = nullptr; // include player assignment
};

std::string meta_json(const ScHardInstance& inst, const MetaOptions& opts = {});
std::string meta_json(const McHardInstance& inst, const MetaOptions& opts = {});
std::string meta_json(const DisjInstance& inst, Seed seed, const MetaOptions& opts = {});

/// Writes the sidecar next to an instance file: <path> + ".meta.json".
void write_meta(const std::string& json_text, const std::filesystem::path& instance_path);

}  // namespace covstream
