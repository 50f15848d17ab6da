#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "fixtures.hpp"
#include "scj/io.hpp"
#include "scj/join.hpp"

using namespace scj;
using namespace scj::testfix;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("scj-io-test-" + name);
}

struct FileGuard {
    std::filesystem::path path;
    ~FileGuard() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("transaction parsing") {
    const auto path = temp_file("parse.dat");
    FileGuard guard{path};
    {
        std::ofstream out(path);
        out << "5 12 7 5\n";
        out << "# a comment line\n";
        out << "\n";
        out << "  3\t4  \n";
    }
    const RawCollection raw = read_transactions(path);
    REQUIRE(raw.size() == 3);
    CHECK(raw[0] == RawObject{"5", "12", "7", "5"});  // tokens verbatim, dupes kept
    CHECK(raw[1].empty());                            // blank line = empty object
    CHECK(raw[2] == RawObject{"3", "4"});

    SUBCASE("duplicates vanish downstream") {
        const ItemDictionary dict = build_dictionary(raw, raw, Direction::Decreasing, FreqSource::Union);
        const Collection sorted = sort_objects(raw, dict, Side::Right);
        CHECK(sorted.objects[0].size() == 3);  // {5,12,7}
    }
    SUBCASE("token cap") {
        CHECK_THROWS_AS(read_transactions(path, 3), std::runtime_error);
    }
}

TEST_CASE("empty and unreadable files") {
    const auto path = temp_file("empty.dat");
    FileGuard guard{path};
    { std::ofstream out(path); }
    CHECK(read_transactions(path).empty());

    const auto missing = temp_file("does-not-exist.dat");
    try {
        read_transactions(missing);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
    }
}

TEST_CASE("write-read round trip is a fixed point") {
    const auto first = temp_file("roundtrip1.dat");
    const auto second = temp_file("roundtrip2.dat");
    FileGuard g1{first}, g2{second};
    {
        std::ofstream out(first);
        out << "  1   2 3\n\n# note\n9\n";
    }
    const RawCollection once = read_transactions(first);
    write_transactions(second, once);
    const RawCollection twice = read_transactions(second);
    CHECK(once == twice);
}

TEST_CASE("synthetic generation is deterministic per seed") {
    const GenSpec spec{200, 50, 4.0, 0.5, 12345};
    const RawCollection a = generate_synthetic(spec);
    const RawCollection b = generate_synthetic(spec);
    CHECK(a == b);
    GenSpec other = spec;
    other.seed = 54321;
    CHECK(generate_synthetic(other) != a);
}

TEST_CASE("zipf sampling frequencies") {
    SUBCASE("exponent zero is uniform") {
        std::mt19937_64 rng(7);
        ZipfSampler sampler(10, 0.0);
        std::map<std::uint64_t, std::uint64_t> counts;
        const std::size_t draws = 1000000;
        for (std::size_t i = 0; i < draws; ++i) ++counts[sampler(rng)];
        const double expected = draws / 10.0;
        const double sigma = std::sqrt(draws * 0.1 * 0.9);
        for (const auto& [item, count] : counts) {
            CHECK(std::fabs(static_cast<double>(count) - expected) <= 3.5 * sigma);
        }
        CHECK(counts.size() == 10);
    }
    SUBCASE("exponent one concentrates 1/H_n on the top item") {
        std::mt19937_64 rng(8);
        ZipfSampler sampler(1000, 1.0);
        std::uint64_t top = 0;
        const std::size_t draws = 1000000;
        for (std::size_t i = 0; i < draws; ++i) {
            if (sampler(rng) == 1) ++top;
        }
        const double share = static_cast<double>(top) / draws;
        CHECK(share == doctest::Approx(0.1336).epsilon(0.15));
    }
}

TEST_CASE("generated lengths hit the weighted-average target") {
    const GenSpec spec{100000, 10000, 10.0, 0.5, 99};
    const RawCollection raw = generate_synthetic(spec);
    REQUIRE(raw.size() == spec.cardinality);
    double sum = 0, sum_sq = 0;
    for (const RawObject& object : raw) {
        const double len = static_cast<double>(object.size());
        sum += len;
        sum_sq += len * len;
    }
    const double realized = sum_sq / sum;
    CHECK(realized == doctest::Approx(10.0).epsilon(0.10));
}

TEST_CASE("generator edge cases") {
    SUBCASE("lengths truncate to the domain") {
        std::vector<std::string> warnings;
        const RawCollection raw = generate_synthetic({50, 3, 20.0, 0.0, 7}, &warnings);
        for (const RawObject& object : raw) CHECK(object.size() <= 3);
        CHECK(!warnings.empty());
    }
    SUBCASE("invalid spec") {
        CHECK_THROWS_AS(generate_synthetic({0, 10, 5.0, 0.5, 1}), std::invalid_argument);
        CHECK_THROWS_AS(generate_synthetic({10, 10, 5.0, -1.0, 1}), std::invalid_argument);
    }
}

TEST_CASE("reports carry the join counters") {
    const auto f = make_fixture();
    JoinConfig cfg;
    cfg.algorithm = Algorithm::Pretti;
    cfg.paradigm = Paradigm::Bulk;
    cfg.limit = LimitSpec::unlimited();
    cfg.faithful = true;
    const JoinOutput out = join_bulk(f.left, f.right, f.dict, cfg);
    RunReport report{"r.dat", "s.dat", cfg, "unlimited", f.left.stats, f.right.stats, out};

    SUBCASE("csv rows accumulate under one header") {
        const auto path = temp_file("report.csv");
        FileGuard guard{path};
        append_report_csv(report, path);
        append_report_csv(report, path);
        std::ifstream in(path);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(in, line)) lines.push_back(line);
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == report_csv_header());
        CHECK(lines[1] == lines[2]);
        CHECK(lines[1].find("pretti,bulk,") == 0);
        CHECK(lines[1].find(",16,15,") != std::string::npos);  // n_results, n_intersections
    }
    SUBCASE("json keeps pairs unless the run was count-only") {
        const auto path = temp_file("report.json");
        FileGuard guard{path};
        write_report_json(report, path);
        {
            std::ifstream in(path);
            const std::string text((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
            CHECK(text.find("\"pairs\"") != std::string::npos);
            CHECK(text.find("\"n_results\": 16") != std::string::npos);
        }
        RunReport counted = report;
        counted.config.count_only = true;
        write_report_json(counted, path);
        std::ifstream in(path);
        const std::string text((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        CHECK(text.find("\"pairs\"") == std::string::npos);
    }
}
