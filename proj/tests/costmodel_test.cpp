#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "fixtures.hpp"
#include "scj/costmodel.hpp"
#include "scj/index.hpp"

using namespace scj;
using namespace scj::testfix;

TEST_CASE("cost formulas at unit constants") {
    const CostConstants unit;
    CHECK(cost_intersection(12, 9, IntersectKind::Merge, unit) == doctest::Approx(21));
    CHECK(cost_intersection(0, 7, IntersectKind::Merge, unit) == doctest::Approx(7));
    CHECK(cost_intersection(4, 7, IntersectKind::Binary, unit) == doctest::Approx(12));  // 4*log2(8)
    CHECK(cost_intersection(4, 7, IntersectKind::Hybrid, unit) == doctest::Approx(11));  // min

    CHECK(cost_direct(5, 2, unit) == doctest::Approx(10));
    CHECK(cost_direct(123, 0, unit) == doctest::Approx(0));
    CHECK(cost_direct(0, 7, unit) == doctest::Approx(0));

    CHECK(cost_verification(4, 6, 9, 18, unit) == doctest::Approx(126));
    CHECK(cost_verification(4, 0, 9, 0, unit) == doctest::Approx(0));

    SUBCASE("verification scales linearly in its constants") {
        CostConstants scaled;
        scaled.a4 = 3;
        scaled.b4 = 3;
        scaled.g4 = 0;
        CHECK(cost_verification(4, 6, 9, 18, scaled) ==
              doctest::Approx(3 * cost_verification(4, 6, 9, 18, CostConstants{})));
    }
}

TEST_CASE("intersection-size and suffix-sum estimates") {
    CHECK(estimate_intersection_size(12, 9, 12) == doctest::Approx(9));
    CHECK(estimate_intersection_size(7, 12, 12) == doctest::Approx(7));
    CHECK(estimate_intersection_size(7, 0, 12) == doctest::Approx(0));
    CHECK_THROWS_AS(estimate_intersection_size(1, 1, 0), std::runtime_error);

    CHECK(estimate_suffix_sum(24, 9, 12) == doctest::Approx(18));
    CHECK(estimate_suffix_sum(31, 12, 12) == doctest::Approx(31));
    CHECK(estimate_suffix_sum(0, 5, 12) == doctest::Approx(0));
    CHECK_THROWS_AS(estimate_suffix_sum(1, 1, 0), std::runtime_error);

    SUBCASE("estimate stays below both list sizes") {
        for (double x : {1.0, 5.0, 11.0}) {
            for (double y : {0.0, 4.0, 12.0}) {
                const double est = estimate_intersection_size(x, y, 12);
                CHECK(est <= x);
                CHECK(est <= y + 1e-12);
            }
        }
    }
}

TEST_CASE("cost functions are monotone in every size argument") {
    const CostConstants unit;
    for (double lo : {0.0, 3.0, 10.0}) {
        CHECK(cost_intersection(lo, 5, IntersectKind::Merge, unit) <=
              cost_intersection(lo + 1, 5, IntersectKind::Merge, unit));
        CHECK(cost_intersection(5, lo, IntersectKind::Binary, unit) <=
              cost_intersection(5, lo + 1, IntersectKind::Binary, unit));
        CHECK(cost_direct(lo, 4, unit) <= cost_direct(lo + 1, 4, unit));
        CHECK(cost_verification(lo, 10, 3, 10, unit) <= cost_verification(lo + 1, 10, 3, 10, unit));
        CHECK(cost_verification(3, lo, 3, 10, unit) <= cost_verification(3, lo + 1, 3, 10, unit));
    }
}

TEST_CASE("adaptive decision in degenerate corners") {
    const SubtreeStats node{4, 1, 6, 4};
    CandidateList cl;
    cl.oids = {0, 1, 2};
    cl.suffix_sum = 9;
    cl.long_count = 3;

    SUBCASE("verification made free forces A") {
        CostConstants k;  // all zero
        k.a1 = k.b1 = k.g1 = k.a2 = k.b2 = k.a3 = k.b3 = k.a4 = k.b4 = k.g4 = 0;
        CHECK(continue_as_limit(node, cl, 8, 12, IntersectKind::Merge, k));  // tie goes to A
    }
    SUBCASE("intersections made expensive force B") {
        CostConstants k;
        k.a4 = k.b4 = 0;
        k.g4 = 1;
        k.a1 = k.b1 = k.g1 = k.a2 = k.b2 = 2;
        CHECK_FALSE(continue_as_limit(node, cl, 8, 12, IntersectKind::Merge, k));
        CHECK_FALSE(continue_as_limit(node, cl, 0, 12, IntersectKind::Binary, k));
    }
    SUBCASE("empty candidates list stops") {
        const CandidateList empty;
        CHECK_FALSE(continue_as_limit(node, empty, 8, 12, IntersectKind::Merge, CostConstants{}));
    }
    SUBCASE("decision is a pure function") {
        const CostConstants k;
        const bool first = continue_as_limit(node, cl, 8, 12, IntersectKind::Hybrid, k);
        for (int i = 0; i < 5; ++i) {
            CHECK(continue_as_limit(node, cl, 8, 12, IntersectKind::Hybrid, k) == first);
        }
    }
}

TEST_CASE("adaptive decision walks the demo trace: continue at G, stop at GF") {
    const auto f = make_fixture();
    const PrefixTree tree = build_prefix_tree(f.left.objects, 3);
    const InvertedIndex index = build_inverted_index(f.right.objects, f.dict.domain_size());

    CostConstants k;  // merge comparisons cost 6 units each, the rest stays unit
    k.a1 = 6;
    k.b1 = 6;

    CandidateList root;
    root.oids.resize(f.right.objects.size());
    std::iota(root.oids.begin(), root.oids.end(), 0u);
    for (Oid oid : root.oids) {
        const std::uint32_t len = index.lengths[oid];
        if (len >= 3) {
            root.suffix_sum += len - 3;
            ++root.long_count;
        }
    }

    const PrefixTreeNode* g = tree.find_root(rank_of_letter(f.dict, 'G'));
    REQUIRE(g != nullptr);
    const SubtreeStats g_stats{g->agg_count, g->rl_eq.size(), g->agg_suffix_sum, g->agg_long_count};
    CHECK(continue_as_limit(g_stats, root, index.postings_for(g->item).size(), 12,
                            IntersectKind::Merge, k));

    const CandidateList at_g = intersect_merge(root, index.postings_for(g->item), 3, index.lengths);
    REQUIRE(at_g.size() == 9);
    const PrefixTreeNode* gf = g->find_child(rank_of_letter(f.dict, 'F'));
    REQUIRE(gf != nullptr);
    const SubtreeStats gf_stats{gf->agg_count, gf->rl_eq.size(), gf->agg_suffix_sum,
                                gf->agg_long_count};
    CHECK(gf_stats.object_count == 4);
    CHECK_FALSE(continue_as_limit(gf_stats, at_g, index.postings_for(gf->item).size(), 12,
                                  IntersectKind::Merge, k));
}

TEST_CASE("least-squares fitter recovers synthetic coefficients") {
    SUBCASE("exact linear plane") {
        std::vector<std::array<double, 3>> rows;
        for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            for (double y : {1.0, 3.0, 9.0, 27.0, 81.0}) rows.push_back({x, y, 2 * x + 3 * y});
        }
        double a = 0, b = 0, g = 1, r2 = 0;
        REQUIRE(fit_linear3(rows, a, b, g, r2));
        CHECK(a == doctest::Approx(2).epsilon(0.05));
        CHECK(b == doctest::Approx(3).epsilon(0.05));
        CHECK(g == doctest::Approx(0).epsilon(0.05));
        CHECK(r2 == doctest::Approx(1.0));
    }
    SUBCASE("constant timings collapse to the intercept") {
        std::vector<std::array<double, 3>> rows;
        for (double x : {1.0, 2.0, 4.0}) {
            for (double y : {1.0, 5.0, 25.0}) rows.push_back({x, y, 7.5});
        }
        double a = 1, b = 1, g = 0, r2 = 0;
        REQUIRE(fit_linear3(rows, a, b, g, r2));
        CHECK(a == doctest::Approx(0).epsilon(1e-9));
        CHECK(b == doctest::Approx(0).epsilon(1e-9));
        CHECK(g == doctest::Approx(7.5));
    }
    SUBCASE("degenerate design is reported") {
        std::vector<std::array<double, 2>> rows = {{5.0, 1.0}, {5.0, 2.0}};
        double a, b, r2;
        CHECK_FALSE(fit_linear2(rows, a, b, r2));
    }
    SUBCASE("slope fit") {
        std::vector<std::array<double, 2>> rows;
        for (double u : {1.0, 2.0, 5.0, 9.0}) rows.push_back({u, 4 * u + 1});
        double a, b, r2;
        REQUIRE(fit_linear2(rows, a, b, r2));
        CHECK(a == doctest::Approx(4));
        CHECK(b == doctest::Approx(1));
        CHECK(r2 == doctest::Approx(1.0));
    }
}

TEST_CASE("host calibration produces finite non-negative constants") {
    CalibrationOptions options;
    options.intersect_sizes = {200, 400, 800, 1600, 3200};
    options.pair_sizes = {64, 128, 256, 512, 1024};
    options.verify_sizes = {8, 16, 32, 64, 128};
    options.repetitions = 5;
    const CalibrationResult result = calibrate(options);
    const CostConstants& k = result.constants;
    for (double c : {k.a1, k.b1, k.g1, k.a2, k.b2, k.a3, k.b3, k.a4, k.b4, k.g4}) {
        CHECK(std::isfinite(c));
        CHECK(c >= 0.0);
    }
    if (!result.degenerate) {
        CHECK(std::isfinite(result.r2_merge));
        CHECK(std::isfinite(result.r2_verification));
    }
}

TEST_CASE("constants file round-trip") {
    const auto path = std::filesystem::temp_directory_path() / "scj-costmodel-test.txt";
    CostConstants k;
    k.a1 = 2.5;
    k.b2 = 0.125;
    k.g4 = 9;
    save_constants(k, path);
    const CostConstants loaded = load_constants(path);
    CHECK(loaded.a1 == doctest::Approx(2.5));
    CHECK(loaded.b2 == doctest::Approx(0.125));
    CHECK(loaded.g4 == doctest::Approx(9));
    CHECK(loaded.a4 == doctest::Approx(1));  // untouched default
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_constants(path), std::runtime_error);
}
