#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "scj/estimate.hpp"

using namespace scj;
using namespace scj::testfix;

TEST_CASE("length statistics pick the demo limits") {
    const auto f = make_fixture();
    const auto estimate = [&](LimitStrategy s) {
        return estimate_limit(f.left.stats, s, f.dict, CostConstants{},
                              f.right.objects.size(), f.right.stats);
    };
    CHECK(estimate(LimitStrategy::Avg).value == 3);    // round(24/7)
    CHECK(estimate(LimitStrategy::Mdn).value == 3);
    CHECK(estimate(LimitStrategy::WAvg).value == 4);   // round(88/24)
}

TEST_CASE("frequency strategy on the demo collections") {
    const auto f = make_fixture();
    const LimitEstimate est = estimate_limit(f.left.stats, LimitStrategy::Frq, f.dict,
                                             CostConstants{}, f.right.objects.size(),
                                             f.right.stats);
    CHECK(est.value == 3);  // deepening past G,F,E stops paying for itself
    CHECK(est.probability_trace.size() == est.value);
    CHECK(std::is_sorted(est.probability_trace.rbegin(), est.probability_trace.rend()));
    for (double p : est.probability_trace) {
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
    }

    SUBCASE("a heavier verification side deepens the path") {
        const LimitEstimate generous =
            estimate_limit(f.left.stats, LimitStrategy::Frq, f.dict, CostConstants{},
                           f.right.objects.size(), f.right.stats, /*threshold_scale=*/100.0);
        CHECK(generous.value >= est.value);
    }
}

TEST_CASE("estimates stay inside [1, max object length]") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        const RawCollection raw_left = random_collection(rng, 30, 12, 9, 1.0);
        const RawCollection raw_right = random_collection(rng, 30, 12, 9, 1.0);
        const ItemDictionary dict =
            build_dictionary(raw_left, raw_right, Direction::Increasing, FreqSource::Union);
        const Collection left = sort_objects(raw_left, dict, Side::Left);
        const Collection right = sort_objects(raw_right, dict, Side::Right);
        for (LimitStrategy s :
             {LimitStrategy::Avg, LimitStrategy::WAvg, LimitStrategy::Mdn, LimitStrategy::Frq}) {
            const LimitEstimate est = estimate_limit(left.stats, s, dict, CostConstants{},
                                                     right.objects.size(), right.stats);
            CHECK(est.value >= 1);
            CHECK(est.value <= left.stats.max_len);
        }
    }
}

TEST_CASE("length strategies ignore object order") {
    const auto f = make_fixture();
    RawCollection shuffled = tiny_left();
    std::mt19937_64 rng(11);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ItemDictionary dict =
        build_dictionary(shuffled, tiny_right(), Direction::Decreasing, FreqSource::Union);
    const Collection left = sort_objects(shuffled, dict, Side::Left);
    for (LimitStrategy s : {LimitStrategy::Avg, LimitStrategy::WAvg, LimitStrategy::Mdn}) {
        const LimitEstimate a = estimate_limit(f.left.stats, s, f.dict, CostConstants{},
                                               f.right.objects.size(), f.right.stats);
        const LimitEstimate b = estimate_limit(left.stats, s, dict, CostConstants{},
                                               f.right.objects.size(), f.right.stats);
        CHECK(a.value == b.value);
    }
}

TEST_CASE("no statistics without objects") {
    const auto f = make_fixture();
    const DatasetStats empty;
    CHECK_THROWS_WITH_AS(estimate_limit(empty, LimitStrategy::Avg, f.dict, CostConstants{},
                                        f.right.objects.size(), f.right.stats),
                         "no statistics", std::runtime_error);
}
