#include <doctest.h>

#include <cmath>
#include <set>

#include "covstream/hardgen.hpp"
#include "covstream/oracles.hpp"
#include "test_support.hpp"

using namespace covstream;
using namespace covstream::testing;

TEST_SUITE_BEGIN("hardgen");

TEST_CASE("disjointness label law holds on every sample") {
    Seed base{17};
    for (int i = 0; i < 200; ++i) {
        Rng rng(base.derive(i));
        auto side = i % 3 == 0 ? DisjSide::natural
                  : i % 3 == 1 ? DisjSide::yes
                               : DisjSide::no;
        auto inst = sample_disj(40, side, rng);
        auto common = set_intersection(inst.a, inst.b);
        if (inst.z == 0) {
            CHECK(common.empty());
            CHECK_FALSE(inst.e_star.has_value());
        } else {
            REQUIRE(common.size() == 1);
            REQUIRE(inst.e_star.has_value());
            CHECK(common.elements()[0] == *inst.e_star);
        }
        if (side == DisjSide::yes) CHECK(inst.z == 0);
        if (side == DisjSide::no) CHECK(inst.z == 1);
    }
}

TEST_CASE("disjointness sides have the expected set sizes") {
    // Each element survives in A w.p. 1/3; t = 300 over 200 trials keeps the
    // mean within 100 +/- 15 (3 sigma of the mean is about 2.5).
    Seed base{18};
    double total = 0;
    for (int i = 0; i < 200; ++i) {
        Rng rng(base.derive(i));
        total += static_cast<double>(sample_disj(300, DisjSide::yes, rng).a.size());
    }
    const double mean = total / 200.0;
    CHECK(mean > 85.0);
    CHECK(mean < 115.0);
}

TEST_CASE("mapping extension partitions the universe") {
    Rng rng(Seed{19});

    auto one = sample_mapping_extension(12, 1, rng);
    CHECK(one.blocks.size() == 1);
    CHECK(one.blocks[0] == range_set(0, 12));

    auto singletons = sample_mapping_extension(8, 8, rng);
    std::set<Element> seen;
    for (const auto& b : singletons.blocks) {
        REQUIRE(b.size() == 1);
        seen.insert(b.elements()[0]);
    }
    CHECK(seen.size() == 8);

    CHECK_THROWS_AS(sample_mapping_extension(10, 4, rng), std::invalid_argument);

    for (int round = 0; round < 20; ++round) {
        auto ext = sample_mapping_extension(24, 6, rng);
        Bitmask all(24);
        std::size_t total = 0;
        for (const auto& b : ext.blocks) {
            CHECK(b.size() == 4);
            for (Element e : b) {
                CHECK_FALSE(all.test(e));  // pairwise disjoint
                all.set(e);
            }
            total += b.size();
        }
        CHECK(total == 24);
    }

    // map_set unions blocks.
    auto ext = sample_mapping_extension(12, 4, rng);
    auto image = ext.map_set(es({0, 2}));
    CHECK(image.size() == 6);
    CHECK(image == set_union(ext.blocks[0], ext.blocks[2]));
}

TEST_CASE("mapping extension block occupancy is uniform") {
    // n=8, t=4: element 0 lands in block 0 a quarter of the time.
    Seed base{20};
    int hits = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        Rng rng(base.derive(i));
        auto ext = sample_mapping_extension(8, 4, rng);
        if (ext.blocks[0].contains(0)) ++hits;
    }
    const double frac = static_cast<double>(hits) / trials;
    CHECK(frac > 0.20);
    CHECK(frac < 0.30);
}

TEST_CASE("paper_t matches the asymptotic formula and flags desk scale") {
    // 2^-15 * (2^40 / 32)^(1/1) = 2^20, already a divisor of 2^40.
    CHECK(paper_t(std::uint64_t{1} << 40, std::uint64_t{1} << 32, 1, LogBase::base2) ==
          std::uint64_t{1} << 20);
    CHECK_THROWS_AS(paper_t(1024, 64, 2, LogBase::natural), std::domain_error);
    // Divisor adjustment: raw value 2^20 lowered to a divisor of 3 * 2^39.
    const std::uint64_t n = 3 * (std::uint64_t{1} << 39);
    const std::uint64_t t = paper_t(n, std::uint64_t{1} << 32, 1, LogBase::base2);
    CHECK(n % t == 0);
    CHECK(t <= (std::uint64_t{1} << 20) * 3 / 2);
}

TEST_CASE("gen_sc reconstruction matches the defining equations") {
    for (std::uint64_t s = 0; s < 8; ++s) {
        auto inst = gen_sc(64, 8, 4, 2, std::nullopt, Seed{s});
        REQUIRE(inst.system.set_count() == 16);
        for (std::size_t i = 0; i < 8; ++i) {
            auto expect_s = set_difference(range_set(0, 64),
                                           inst.maps[i].map_set(inst.disj[i].a));
            auto expect_t = set_difference(range_set(0, 64),
                                           inst.maps[i].map_set(inst.disj[i].b));
            CHECK(inst.system.set_at(i) == expect_s);
            CHECK(inst.system.set_at(8 + i) == expect_t);
        }
    }
}

TEST_CASE("gen_sc planted pair covers iff theta = 1") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        auto planted = gen_sc(256, 16, 4, 2, 1, Seed{s});
        REQUIRE(planted.theta == 1);
        REQUIRE(planted.i_star.has_value());
        CHECK(planted.disj[*planted.i_star].z == 0);
        const std::size_t pair[2] = {*planted.i_star, 16 + *planted.i_star};
        CHECK(is_feasible_cover(planted.system, pair));

        auto flat = gen_sc(256, 16, 4, 2, 0, Seed{s});
        REQUIRE(flat.theta == 0);
        CHECK_FALSE(flat.i_star.has_value());
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK(flat.disj[i].z == 1);
            const std::size_t pair_i[2] = {i, 16 + i};
            // Every matched pair misses exactly n/t = 64 elements.
            CHECK(coverage(flat.system, pair_i).size() == 256 - 64);
        }
    }
}

TEST_CASE("generators are deterministic and parameter-checked") {
    auto a = gen_sc(64, 8, 4, 2, std::nullopt, Seed{123});
    auto b = gen_sc(64, 8, 4, 2, std::nullopt, Seed{123});
    CHECK(a.system == b.system);
    CHECK(a.theta == b.theta);
    CHECK_THROWS_AS(gen_sc(255, 8, 4, 2, std::nullopt, Seed{1}), std::invalid_argument);

    auto mc1 = gen_mc(4, 16, std::nullopt, std::nullopt, std::nullopt, Seed{9});
    auto mc2 = gen_mc(4, 16, std::nullopt, std::nullopt, std::nullopt, Seed{9});
    CHECK(mc1.system == mc2.system);
    CHECK(mc1.theta == mc2.theta);
    CHECK_THROWS_AS(gen_mc(4, 2, std::nullopt, std::nullopt, std::nullopt, Seed{1}),
                    std::invalid_argument);
}

TEST_CASE("partition labels mark split pairs as good") {
    auto inst = gen_sc(64, 8, 4, 2, 0, Seed{5});
    Rng rng(Seed{6});
    auto labels = gen_sc_partition(inst, rng);
    REQUIRE(labels.labels.size() == 16);
    auto good = labels.good_indices();
    for (std::size_t i = 0; i < 8; ++i) {
        const bool split = labels.labels[i] != labels.labels[8 + i];
        const bool in_good = std::find(good.begin(), good.end(), i) != good.end();
        CHECK(split == in_good);
    }
}

TEST_CASE("good index count concentrates at m/2") {
    // E|G| = m/2 = 32 at m = 64; the mean over 500 draws lands within +/- 3.
    auto inst = gen_sc(128, 64, 4, 2, 0, Seed{7});
    Seed base{8};
    double total = 0;
    for (int i = 0; i < 500; ++i) {
        Rng rng(base.derive(i));
        total += static_cast<double>(gen_sc_partition(inst, rng).good_indices().size());
    }
    const double mean = total / 500.0;
    CHECK(mean > 29.0);
    CHECK(mean < 35.0);
}

TEST_CASE("ghd thresholds integerize the gap") {
    CHECK(ghd_yes_threshold(64) == 40);  // 32 + 8
    CHECK(ghd_no_threshold(64) == 24);   // 32 - 8
    CHECK(ghd_no_threshold(4) == 0);
}

TEST_CASE("ghd sampling respects the conditioning") {
    Rng rng(Seed{10});

    // a = t, b = 0: distance is always t, so yes accepts immediately and no
    // cannot be satisfied.
    auto extreme = sample_ghd(32, 32, 0, GhdSide::yes, rng);
    CHECK(extreme.attempts == 1);
    CHECK(hamming_distance(extreme.a, extreme.b) == 32);
    CHECK_THROWS_AS(sample_ghd(32, 32, 0, GhdSide::no, rng, 500), SamplingError);

    for (int round = 0; round < 50; ++round) {
        auto yes = sample_ghd(64, 32, 32, GhdSide::yes, rng);
        CHECK(yes.a.size() == 32);
        CHECK(yes.b.size() == 32);
        CHECK(hamming_distance(yes.a, yes.b) >= 40);

        auto no = sample_ghd(64, 32, 32, GhdSide::no, rng);
        CHECK(hamming_distance(no.a, no.b) <= 24);
    }
}

TEST_CASE("gen_mc builds the bipartition gadget exactly") {
    for (std::uint64_t s = 0; s < 15; ++s) {
        auto inst = gen_mc(8, 64, std::nullopt, std::nullopt, std::nullopt, Seed{s});
        CHECK(inst.t2 == 640);
        CHECK(inst.a == 32);
        CHECK(inst.b == 32);
        CHECK(inst.tau == doctest::Approx(688.0));
        REQUIRE(inst.system.set_count() == 16);
        REQUIRE(inst.system.universe_size() == 704);

        for (std::size_t i = 0; i < 8; ++i) {
            const auto& [c, d] = inst.partitions[i];
            // C and D partition U2 = [64, 704).
            CHECK(set_intersection(c, d).empty());
            CHECK(set_union(c, d) == range_set(64, 704));
            CHECK(inst.ghd[i].first.size() == 32);
            CHECK(inst.ghd[i].second.size() == 32);

            CHECK(inst.system.set_at(i) ==
                  set_union(inst.ghd[i].first, c));
            CHECK(inst.system.set_at(8 + i) ==
                  set_union(inst.ghd[i].second, d));

            // Matched-pair value identity:
            // |S_i ∪ T_i| = t2 + (a + b + Δ(A_i, B_i)) / 2, and >= t2 always.
            const std::size_t pair[2] = {i, 8 + i};
            const auto value = coverage(inst.system, pair).size();
            const auto delta = hamming_distance(inst.ghd[i].first, inst.ghd[i].second);
            CHECK(value == 640 + (32 + 32 + delta) / 2);
            CHECK(value >= 640);

            const bool is_planted = inst.theta == 1 && inst.i_star &&
                                    *inst.i_star == i;
            if (is_planted)
                CHECK(delta >= 40);
            else
                CHECK(delta <= 24);
        }
    }
}

TEST_CASE("gen_mc plants one high pair under theta = 1") {
    auto hi = gen_mc(8, 64, std::nullopt, std::nullopt, 1, Seed{21});
    REQUIRE(hi.theta == 1);
    REQUIRE(hi.i_star.has_value());
    const std::size_t pair[2] = {*hi.i_star, 8 + *hi.i_star};
    // Planted pair value >= 640 + 32 + 20 = 692 > tau = 688.
    CHECK(static_cast<double>(coverage(hi.system, pair).size()) > hi.tau);

    auto lo = gen_mc(8, 64, std::nullopt, std::nullopt, 0, Seed{22});
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t pair_i[2] = {i, 8 + i};
        CHECK(static_cast<double>(coverage(lo.system, pair_i).size()) < lo.tau);
    }
}

TEST_CASE("metadata sidecars carry the planted ground truth") {
    auto inst = gen_sc(64, 8, 4, 2, 1, Seed{99});
    const std::string meta = meta_json(inst);
    CHECK(meta.find("\"generator\": \"sc\"") != std::string::npos);
    CHECK(meta.find("\"seed\": 99") != std::string::npos);
    CHECK(meta.find("\"theta\": 1") != std::string::npos);
    CHECK(meta.find("\"witness\"") == std::string::npos);

    MetaOptions full;
    full.full_witness = true;
    const std::string with_witness = meta_json(inst, full);
    CHECK(with_witness.find("\"witness\"") != std::string::npos);
    CHECK(with_witness.find("\"blocks\"") != std::string::npos);

    auto mc = gen_mc(4, 16, std::nullopt, std::nullopt, 0, Seed{100});
    const std::string mc_meta = meta_json(mc);
    CHECK(mc_meta.find("\"generator\": \"mc\"") != std::string::npos);
    CHECK(mc_meta.find("\"tau\": 172") != std::string::npos);  // 160 + 8 + 4
    CHECK(mc_meta.find("\"i_star\": null") != std::string::npos);
}

TEST_SUITE_END();
