#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>

#include "scj/core.hpp"
#include "scj/costmodel.hpp"
#include "scj/estimate.hpp"
#include "scj/io.hpp"
#include "scj/join.hpp"
#include "scj/oracle.hpp"

namespace {

using namespace scj;

struct JoinFlags {
    std::string left_path;
    std::string right_path;
    bool self_join = false;
    std::string algorithm = "limit_plus";
    std::string paradigm = "opj";
    std::string ordering = "increasing";
    std::string freq_source = "union";
    std::string intersect = "hybrid";
    std::int64_t limit = -1;
    std::string limit_strategy;
    bool count_only = false;
    bool faithful = false;
    bool keep_empty = false;
    bool check_oracle = false;
    bool emit_pairs = false;
    bool org_pretti = false;
    double frq_threshold_scale = 1.0;
    std::string constants_path;
    std::string out_json;
    std::string out_csv;
};

Algorithm parse_algorithm(const std::string& name) {
    if (name == "pretti") return Algorithm::Pretti;
    if (name == "limit") return Algorithm::Limit;
    if (name == "limit_plus") return Algorithm::LimitPlus;
    throw std::invalid_argument("unknown algorithm: " + name);
}

LimitStrategy parse_strategy(const std::string& name) {
    if (name == "avg") return LimitStrategy::Avg;
    if (name == "wavg") return LimitStrategy::WAvg;
    if (name == "mdn") return LimitStrategy::Mdn;
    if (name == "frq") return LimitStrategy::Frq;
    throw std::invalid_argument("unknown limit strategy: " + name);
}

struct PreparedInputs {
    ItemDictionary dict;
    Collection left;
    Collection right;
};

PreparedInputs prepare(const std::string& left_path, const std::string& right_path,
                       Direction ordering, FreqSource source, bool keep_empty) {
    PreparedInputs inputs;
    const RawCollection raw_left = read_transactions(left_path);
    const RawCollection raw_right =
        right_path == left_path ? raw_left : read_transactions(right_path);
    inputs.dict = build_dictionary(raw_left, raw_right, ordering, source);
    inputs.left = sort_objects(raw_left, inputs.dict, Side::Left, keep_empty);
    inputs.right = sort_objects(raw_right, inputs.dict, Side::Right);
    if (inputs.left.dropped_empty > 0) {
        std::cerr << "warning: dropped " << inputs.left.dropped_empty
                  << " empty left objects (use --keep-empty to join them)\n";
    }
    return inputs;
}

JoinConfig make_config(const JoinFlags& flags, bool limit_given, bool strategy_given) {
    JoinConfig cfg;
    cfg.algorithm = parse_algorithm(flags.algorithm);
    cfg.paradigm = flags.paradigm == "bulk" ? Paradigm::Bulk : Paradigm::Opj;
    cfg.ordering = flags.ordering == "decreasing" ? Direction::Decreasing : Direction::Increasing;
    cfg.freq_source = flags.freq_source == "left" ? FreqSource::LeftOnly : FreqSource::Union;
    if (flags.intersect == "merge") cfg.intersect = IntersectKind::Merge;
    else if (flags.intersect == "binary") cfg.intersect = IntersectKind::Binary;
    else cfg.intersect = IntersectKind::Hybrid;
    cfg.count_only = flags.count_only;
    cfg.faithful = flags.faithful;
    cfg.frq_threshold_scale = flags.frq_threshold_scale;

    if (limit_given && strategy_given) {
        throw std::invalid_argument("--limit and --limit-strategy are mutually exclusive");
    }
    if (cfg.algorithm == Algorithm::Pretti) {
        if (limit_given || strategy_given) {
            throw std::invalid_argument("pretti uses the full prefix tree; drop the limit options");
        }
        cfg.limit = LimitSpec::unlimited();
    } else if (limit_given) {
        if (flags.limit < 1) throw std::invalid_argument("limit must be >= 1");
        cfg.limit = LimitSpec::explicit_limit(static_cast<std::uint32_t>(flags.limit));
    } else if (strategy_given) {
        cfg.limit = LimitSpec::by_strategy(parse_strategy(flags.limit_strategy));
    } else {
        cfg.limit = LimitSpec::by_strategy(LimitStrategy::Frq);
    }
    if (!flags.constants_path.empty()) cfg.constants = load_constants(flags.constants_path);
    return cfg;
}

std::string strategy_label(const JoinConfig& cfg) {
    switch (cfg.limit.kind) {
        case LimitSpec::Kind::Unlimited: return "unlimited";
        case LimitSpec::Kind::Explicit: return "explicit";
        case LimitSpec::Kind::Strategy: return limit_strategy_name(cfg.limit.strategy);
    }
    return "unlimited";
}

void print_summary(const JoinOutput& out) {
    std::cout << "results:               " << out.n_results << '\n'
              << "intersections:         " << out.n_intersections << '\n'
              << "candidates direct:     " << out.n_candidates_direct << '\n'
              << "candidates verified:   " << out.n_candidates_verified << '\n'
              << "build time (ms):       " << out.build_ms << '\n'
              << "join time (ms):        " << out.join_ms << '\n'
              << "peak logical bytes:    " << out.peak_logical_bytes << '\n'
              << "right objects indexed: " << out.n_right_indexed << '\n';
}

int cmd_join(const JoinFlags& flags, bool limit_given, bool strategy_given) {
    const JoinConfig cfg = make_config(flags, limit_given, strategy_given);
    if (flags.emit_pairs && cfg.count_only) {
        throw std::invalid_argument("--emit-pairs needs materialized pairs; drop --count-only");
    }
    const std::string right_path = flags.self_join ? flags.left_path : flags.right_path;
    PreparedInputs inputs =
        prepare(flags.left_path, right_path, cfg.ordering, cfg.freq_source, flags.keep_empty);

    if (cfg.limit.kind == LimitSpec::Kind::Strategy && !inputs.left.objects.empty()) {
        const LimitEstimate est = estimate_limit(
            inputs.left.stats, cfg.limit.strategy, inputs.dict, cfg.constants,
            inputs.right.objects.size(), inputs.right.stats, cfg.frq_threshold_scale);
        std::cout << "limit value (" << limit_strategy_name(cfg.limit.strategy)
                  << "): " << est.value << '\n';
    }

    const JoinOutput out = run_join(inputs.left, inputs.right, inputs.dict, cfg);
    print_summary(out);

    if (flags.emit_pairs) {
        for (const auto& [l, r] : out.pairs) std::cout << l << '\t' << r << '\n';
    }

    RunReport report{flags.left_path, right_path, cfg, strategy_label(cfg),
                     inputs.left.stats, inputs.right.stats, out};
    if (!flags.out_json.empty()) write_report_json(report, flags.out_json);
    if (!flags.out_csv.empty()) append_report_csv(report, flags.out_csv);

    if (flags.check_oracle) {
        const auto expected = brute_force_join(inputs.left, inputs.right);
        if (cfg.count_only) {
            if (out.n_results != expected.size()) {
                std::cerr << "oracle mismatch: " << out.n_results << " != " << expected.size()
                          << '\n';
                return 1;
            }
        } else if (out.pairs != expected) {
            std::cerr << "oracle mismatch\n";
            return 1;
        }
        std::cout << "oracle check:          ok\n";
    }
    return 0;
}

int cmd_oracle(const std::string& left_path, const std::string& right_path_in, bool self_join,
               const std::string& out_path) {
    const std::string right_path = self_join ? left_path : right_path_in;
    PreparedInputs inputs =
        prepare(left_path, right_path, Direction::Increasing, FreqSource::Union, false);
    const auto pairs = brute_force_join(inputs.left, inputs.right);
    if (out_path.empty()) {
        for (const auto& [l, r] : pairs) std::cout << l << '\t' << r << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write: " + out_path);
        for (const auto& [l, r] : pairs) out << l << '\t' << r << '\n';
    }
    std::cerr << pairs.size() << " pairs\n";
    return 0;
}

int cmd_stats(const std::string& path) {
    const RawCollection raw = read_transactions(path);
    const ItemDictionary dict = build_dictionary(raw, raw, Direction::Decreasing, FreqSource::Union);
    const Collection collection = sort_objects(raw, dict, Side::Right);
    const DatasetStats& s = collection.stats;
    std::cout << "cardinality:      " << s.cardinality << '\n'
              << "domain size:      " << s.domain_size << '\n'
              << "avg length:       " << s.avg_len << '\n'
              << "weighted avg len: " << s.weighted_avg_len << '\n'
              << "median length:    " << s.median_len << '\n'
              << "max length:       " << s.max_len << '\n';
    return 0;
}

int cmd_estimate(const std::string& left_path, const std::string& right_path_in, bool self_join,
                 const std::string& constants_path, double scale) {
    const std::string right_path =
        self_join || right_path_in.empty() ? left_path : right_path_in;
    PreparedInputs inputs =
        prepare(left_path, right_path, Direction::Increasing, FreqSource::Union, false);
    CostConstants constants;
    if (!constants_path.empty()) constants = load_constants(constants_path);
    for (LimitStrategy strategy :
         {LimitStrategy::Avg, LimitStrategy::WAvg, LimitStrategy::Mdn, LimitStrategy::Frq}) {
        const LimitEstimate est =
            estimate_limit(inputs.left.stats, strategy, inputs.dict, constants,
                           inputs.right.objects.size(), inputs.right.stats, scale);
        std::cout << limit_strategy_name(strategy) << ": " << est.value << '\n';
        if (strategy == LimitStrategy::Frq) {
            std::cout << "frq trace:";
            for (double p : est.probability_trace) std::cout << ' ' << p;
            std::cout << '\n';
        }
    }
    return 0;
}

int cmd_generate(const GenSpec& spec, const std::string& out_path) {
    std::vector<std::string> warnings;
    const RawCollection collection = generate_synthetic(spec, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
    write_transactions(out_path, collection);
    std::cerr << "wrote " << collection.size() << " objects to " << out_path << '\n';
    return 0;
}

int cmd_calibrate(const std::string& out_path, bool quick) {
    CalibrationOptions options;
    if (quick) {
        options.intersect_sizes = {500, 1000, 2000, 4000, 8000};
        options.pair_sizes = {128, 256, 512, 1024, 2048};
        options.verify_sizes = {16, 32, 64, 128, 256};
        options.repetitions = 9;
    }
    const CalibrationResult result = calibrate(options);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
    const CostConstants& k = result.constants;
    std::cout << "a1 " << k.a1 << "\nb1 " << k.b1 << "\ng1 " << k.g1 << "\na2 " << k.a2 << "\nb2 "
              << k.b2 << "\na3 " << k.a3 << "\nb3 " << k.b3 << "\na4 " << k.a4 << "\nb4 " << k.b4
              << "\ng4 " << k.g4 << '\n';
    std::cout << "r2: merge " << result.r2_merge << ", binary " << result.r2_binary << ", direct "
              << result.r2_direct << ", verification " << result.r2_verification << '\n';
    if (!out_path.empty()) save_constants(k, out_path);
    return 0;
}

struct BenchFlags {
    std::string axis;
    std::vector<double> values;
    std::string csv_path;
    std::string input_path;
    GenSpec base{100000, 10000, 10.0, 0.5, 1};
    JoinFlags join;
};

int cmd_bench(BenchFlags& flags, bool limit_given, bool strategy_given) {
    if (flags.values.empty()) throw std::invalid_argument("--values must not be empty");
    for (std::size_t i = 1; i < flags.values.size(); ++i) {
        if (flags.values[i] <= flags.values[i - 1]) {
            throw std::invalid_argument("--values must be strictly increasing");
        }
    }
    for (double value : flags.values) {
        GenSpec spec = flags.base;
        JoinFlags point = flags.join;
        bool point_limit_given = limit_given;
        if (flags.axis == "limit") {
            point.limit = static_cast<std::int64_t>(value);
            point_limit_given = true;
        } else if (flags.axis == "cardinality") {
            spec.cardinality = static_cast<std::uint64_t>(value);
        } else if (flags.axis == "domain") {
            spec.domain_size = static_cast<std::uint32_t>(value);
        } else if (flags.axis == "wavg_len") {
            spec.weighted_avg_len = value;
        } else if (flags.axis == "zipf") {
            spec.zipf = value;
        } else {
            throw std::invalid_argument("unknown sweep axis: " + flags.axis);
        }

        std::string dataset = flags.input_path;
        std::filesystem::path tmp;
        if (dataset.empty()) {
            tmp = std::filesystem::temp_directory_path() /
                  ("scj-bench-" + std::to_string(::getpid()) + "-" + std::to_string(value) + ".dat");
            write_transactions(tmp, generate_synthetic(spec));
            dataset = tmp.string();
        }
        point.left_path = dataset;
        point.self_join = true;
        point.out_csv = flags.csv_path;
        point.count_only = true;
        point.emit_pairs = false;
        point.check_oracle = false;
        const int rc = cmd_join(point, point_limit_given, strategy_given);
        if (!tmp.empty()) std::filesystem::remove(tmp);
        if (rc != 0) return rc;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"in-memory set containment join engine"};
    app.require_subcommand(1);

    JoinFlags jf;
    CLI::App* join = app.add_subcommand("join", "join two transaction files (all pairs r subset-of s)");
    join->add_option("left", jf.left_path, "left-hand transaction file")->required();
    join->add_option("right", jf.right_path, "right-hand transaction file");
    join->add_flag("--self-join", jf.self_join, "join the left file with itself");
    join->add_option("--algorithm", jf.algorithm)->check(CLI::IsMember({"pretti", "limit", "limit_plus"}));
    join->add_option("--paradigm", jf.paradigm)->check(CLI::IsMember({"bulk", "opj"}));
    join->add_option("--ordering", jf.ordering)->check(CLI::IsMember({"increasing", "decreasing"}));
    join->add_option("--freq-source", jf.freq_source)->check(CLI::IsMember({"left", "union"}));
    join->add_option("--intersect", jf.intersect)->check(CLI::IsMember({"merge", "binary", "hybrid"}));
    auto* limit_opt = join->add_option("--limit", jf.limit, "explicit tree depth limit");
    auto* strategy_opt = join->add_option("--limit-strategy", jf.limit_strategy)
                             ->check(CLI::IsMember({"avg", "wavg", "mdn", "frq"}));
    join->add_flag("--count-only", jf.count_only, "count results without materializing pairs");
    join->add_flag("--faithful", jf.faithful, "textbook traversal: count root-level intersections, no pruning");
    join->add_flag("--keep-empty", jf.keep_empty, "keep empty left objects (each joins every right object)");
    join->add_flag("--check-oracle", jf.check_oracle, "compare against the brute-force reference");
    join->add_flag("--emit-pairs", jf.emit_pairs, "print result pairs as left<TAB>right");
    join->add_flag("--org-pretti", jf.org_pretti, "original baseline preset: bulk pretti, decreasing, left frequencies");
    join->add_option("--frq-threshold-scale", jf.frq_threshold_scale);
    join->add_option("--constants", jf.constants_path, "cost constants file from calibrate");
    join->add_option("--out", jf.out_json, "write a JSON report");
    join->add_option("--csv", jf.out_csv, "append a CSV report row");

    BenchFlags bf;
    CLI::App* bench = app.add_subcommand("bench", "sweep one parameter on self-joined synthetic data");
    bench->add_option("--axis", bf.axis)->required()
        ->check(CLI::IsMember({"limit", "cardinality", "domain", "wavg_len", "zipf"}));
    bench->add_option("--values", bf.values, "sweep points, strictly increasing")->required()->delimiter(',');
    bench->add_option("--csv", bf.csv_path, "CSV file to append one row per point")->required();
    bench->add_option("--input", bf.input_path, "existing dataset (otherwise generated per point)");
    bench->add_option("--cardinality", bf.base.cardinality);
    bench->add_option("--domain", bf.base.domain_size);
    bench->add_option("--wavg-len", bf.base.weighted_avg_len);
    bench->add_option("--zipf", bf.base.zipf);
    bench->add_option("--seed", bf.base.seed);
    bench->add_option("--algorithm", bf.join.algorithm)->check(CLI::IsMember({"pretti", "limit", "limit_plus"}));
    bench->add_option("--paradigm", bf.join.paradigm)->check(CLI::IsMember({"bulk", "opj"}));
    bench->add_option("--ordering", bf.join.ordering)->check(CLI::IsMember({"increasing", "decreasing"}));
    bench->add_option("--freq-source", bf.join.freq_source)->check(CLI::IsMember({"left", "union"}));
    bench->add_option("--intersect", bf.join.intersect)->check(CLI::IsMember({"merge", "binary", "hybrid"}));
    auto* bench_limit_opt = bench->add_option("--limit", bf.join.limit);
    auto* bench_strategy_opt = bench->add_option("--limit-strategy", bf.join.limit_strategy)
                                   ->check(CLI::IsMember({"avg", "wavg", "mdn", "frq"}));
    bench->add_option("--constants", bf.join.constants_path);

    GenSpec gen_spec;
    std::string gen_out;
    CLI::App* generate = app.add_subcommand("generate", "write a synthetic transaction file");
    generate->add_option("--cardinality", gen_spec.cardinality)->required();
    generate->add_option("--domain", gen_spec.domain_size)->required();
    generate->add_option("--wavg-len", gen_spec.weighted_avg_len)->required();
    generate->add_option("--zipf", gen_spec.zipf);
    generate->add_option("--seed", gen_spec.seed);
    generate->add_option("--out", gen_out)->required();

    std::string stats_path;
    CLI::App* stats = app.add_subcommand("stats", "print dataset statistics");
    stats->add_option("file", stats_path)->required();

    std::string est_left, est_right, est_constants;
    bool est_self = false;
    double est_scale = 1.0;
    CLI::App* estimate = app.add_subcommand("estimate-limit", "print the limit chosen by every strategy");
    estimate->add_option("left", est_left)->required();
    estimate->add_option("right", est_right);
    estimate->add_flag("--self-join", est_self);
    estimate->add_option("--constants", est_constants);
    estimate->add_option("--frq-threshold-scale", est_scale);

    std::string cal_out;
    bool cal_quick = false;
    CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "fit cost constants on this host");
    calibrate_cmd->add_option("--out", cal_out, "write the constants file");
    calibrate_cmd->add_flag("--quick", cal_quick, "smaller grid");

    std::string oracle_left, oracle_right, oracle_out;
    bool oracle_self = false;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force ground truth dump");
    oracle_cmd->add_option("left", oracle_left)->required();
    oracle_cmd->add_option("right", oracle_right);
    oracle_cmd->add_flag("--self-join", oracle_self);
    oracle_cmd->add_option("--out", oracle_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (join->parsed()) {
            if (jf.org_pretti) {
                if (join->count("--algorithm") == 0) jf.algorithm = "pretti";
                if (join->count("--paradigm") == 0) jf.paradigm = "bulk";
                if (join->count("--ordering") == 0) jf.ordering = "decreasing";
                if (join->count("--freq-source") == 0) jf.freq_source = "left";
                if (join->count("--intersect") == 0) jf.intersect = "hybrid";
            }
            if (!jf.self_join && jf.right_path.empty()) {
                throw std::invalid_argument("need a right-hand file or --self-join");
            }
            return cmd_join(jf, limit_opt->count() > 0, strategy_opt->count() > 0);
        }
        if (bench->parsed()) {
            return cmd_bench(bf, bench_limit_opt->count() > 0, bench_strategy_opt->count() > 0);
        }
        if (generate->parsed()) return cmd_generate(gen_spec, gen_out);
        if (stats->parsed()) return cmd_stats(stats_path);
        if (estimate->parsed()) {
            return cmd_estimate(est_left, est_right, est_self, est_constants, est_scale);
        }
        if (calibrate_cmd->parsed()) return cmd_calibrate(cal_out, cal_quick);
        if (oracle_cmd->parsed()) {
            if (!oracle_self && oracle_right.empty()) {
                throw std::invalid_argument("need a right-hand file or --self-join");
            }
            return cmd_oracle(oracle_left, oracle_right, oracle_self, oracle_out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
