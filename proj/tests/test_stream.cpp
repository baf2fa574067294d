#include <doctest.h>

#include <map>
#include <stdexcept>

#include "covstream/stream.hpp"
#include "test_support.hpp"

using namespace covstream;
using namespace covstream::testing;

TEST_SUITE_BEGIN("stream");

TEST_CASE("adversarial order preserves input order") {
    auto sys = make_system(4, {{0}, {1}, {2}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    std::vector<std::size_t> seen;
    stream.run_pass([&](std::size_t idx, const ElementSet&) { seen.push_back(idx); });
    CHECK(seen == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("random order is deterministic per seed") {
    auto sys = make_system(4, {{0}, {1}, {2}, {3}});
    auto a = SetStream::from_system(sys, StreamOrder::random, Seed{99});
    auto b = SetStream::from_system(sys, StreamOrder::random, Seed{99});
    CHECK(a.order() == b.order());
}

TEST_CASE("random order is uniform over permutations") {
    // 6000 draws over the 6 permutations of a 3-set system; each bucket
    // expected at 1000 +/- 150.
    auto sys = make_system(3, {{0}, {1}, {2}});
    std::map<std::vector<std::size_t>, int> counts;
    Seed base{2024};
    for (int i = 0; i < 6000; ++i) {
        auto stream = SetStream::from_system(sys, StreamOrder::random, base.derive(i));
        counts[stream.order()]++;
    }
    CHECK(counts.size() == 6);
    for (const auto& [perm, count] : counts) {
        CHECK(count > 850);
        CHECK(count < 1150);
    }
}

TEST_CASE("every pass visits every set exactly once") {
    auto sys = make_system(8, {{0, 1}, {2}, {3, 4, 5}, {6}, {7}});
    auto stream = SetStream::from_system(sys, StreamOrder::random, Seed{5});
    std::vector<int> visits(sys.set_count(), 0);
    stream.run_pass([&](std::size_t idx, const ElementSet& s) {
        visits[idx]++;
        CHECK(s == sys.set_at(idx));
    });
    for (int v : visits) CHECK(v == 1);
    CHECK(stream.passes_used() == 1);
    stream.run_pass([](std::size_t, const ElementSet&) {});
    CHECK(stream.passes_used() == 2);
}

TEST_CASE("an aborted pass still counts") {
    auto sys = make_system(4, {{0}, {1}, {2}});
    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    CHECK_THROWS_AS(stream.run_pass([](std::size_t idx, const ElementSet&) {
        if (idx == 1) throw std::runtime_error("abort");
    }),
                    std::runtime_error);
    CHECK(stream.passes_used() == 1);
}

TEST_CASE("ledger tracks peak stored entries") {
    SpaceLedger ledger;
    ledger.charge(10);
    ledger.charge(5);
    CHECK(ledger.current_entries() == 15);
    ledger.discharge(12);
    CHECK(ledger.current_entries() == 3);
    CHECK(ledger.peak_entries() == 15);
    ledger.discharge(100);  // clamps at zero
    CHECK(ledger.current_entries() == 0);
    CHECK(ledger.peak_entries() == 15);
}

TEST_CASE("a visitor storing everything charges at least the element count") {
    auto sys = make_system(8, {{0, 1, 2}, {3, 4}, {5, 6, 7}});
    std::size_t total = 0;
    for (const auto& s : sys.sets()) total += s.size();

    auto stream = SetStream::from_system(sys, StreamOrder::adversarial);
    SpaceLedger ledger;
    std::vector<std::pair<std::size_t, ElementSet>> stored;
    stream.run_pass([&](std::size_t idx, const ElementSet& s) {
        stored.emplace_back(idx, s);
        ledger.charge(s.size());
    });
    CHECK(ledger.peak_entries() >= total);
}

TEST_SUITE_END();
