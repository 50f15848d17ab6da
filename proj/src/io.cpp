#include "scj/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace scj {

RawCollection read_transactions(const std::filesystem::path& path,
                                std::size_t max_tokens_per_line) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open transaction file: " + path.string());
    RawCollection collection;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        RawObject object;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
                ++pos;
            }
            const std::size_t start = pos;
            while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') {
                ++pos;
            }
            if (pos > start) {
                if (object.size() == max_tokens_per_line) {
                    throw std::runtime_error("line too long: " + path.string() + ":" +
                                             std::to_string(line_no));
                }
                object.emplace_back(line.substr(start, pos - start));
            }
        }
        collection.push_back(std::move(object));
    }
    return collection;
}

void write_transactions(const std::filesystem::path& path, const RawCollection& collection) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write transaction file: " + path.string());
    for (const RawObject& object : collection) {
        for (std::size_t i = 0; i < object.size(); ++i) {
            if (i > 0) out << ' ';
            out << object[i];
        }
        out << '\n';
    }
}

ZipfSampler::ZipfSampler(std::uint64_t n, double exponent) : n_(n), exponent_(exponent) {
    h_x1_ = h_integral(1.5) - 1.0;
    h_top_ = h_integral(static_cast<double>(n) + 0.5);
    accept_margin_ = 2.0 - h_integral_inverse(h_integral(2.5) - h(2.0));
}

namespace {

double expm1_over(double x) {
    return std::fabs(x) > 1e-8 ? std::expm1(x) / x : 1.0 + x / 2.0 + x * x / 6.0;
}

double log1p_over(double x) {
    return std::fabs(x) > 1e-8 ? std::log1p(x) / x : 1.0 - x / 2.0 + x * x / 3.0;
}

}  // namespace

double ZipfSampler::h_integral(double x) const {
    const double log_x = std::log(x);
    return expm1_over((1.0 - exponent_) * log_x) * log_x;
}

double ZipfSampler::h(double x) const { return std::exp(-exponent_ * std::log(x)); }

double ZipfSampler::h_integral_inverse(double x) const {
    double t = x * (1.0 - exponent_);
    if (t < -1.0) t = -1.0;
    return std::exp(log1p_over(t) * x);
}

namespace {

constexpr std::size_t kGenBlock = 4096;
constexpr int kDedupeAttempts = 50;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

RawCollection generate_synthetic(const GenSpec& spec, std::vector<std::string>* warnings) {
    if (spec.cardinality < 1 || spec.domain_size < 1 || spec.zipf < 0.0) {
        throw std::invalid_argument("invalid generator spec");
    }
    // A geometric length with mean m has length-weighted mean 2m - 1.
    const double mean = (std::max(spec.weighted_avg_len, 1.0) + 1.0) / 2.0;
    const double p = std::min(1.0, 1.0 / mean);
    const double log_q = p < 1.0 ? std::log1p(-p) : 0.0;

    ZipfSampler zipf(spec.domain_size, spec.zipf);
    RawCollection collection;
    collection.reserve(spec.cardinality);
    bool truncated = false;

    for (std::uint64_t block_start = 0; block_start < spec.cardinality; block_start += kGenBlock) {
        std::mt19937_64 rng(mix64(spec.seed ^ mix64(block_start / kGenBlock)));
        const std::uint64_t block_end = std::min(spec.cardinality, block_start + kGenBlock);
        for (std::uint64_t oid = block_start; oid < block_end; ++oid) {
            std::uint64_t length = 1;
            if (p < 1.0) {
                const double u = ZipfSampler::uniform01(rng());
                length = 1 + static_cast<std::uint64_t>(std::log1p(-u) / log_q);
            }
            if (length > spec.domain_size) {
                length = spec.domain_size;
                truncated = true;
            }
            RawObject object;
            object.reserve(length);
            std::vector<std::uint64_t> drawn;
            drawn.reserve(length);
            for (std::uint64_t slot = 0; slot < length; ++slot) {
                bool placed = false;
                for (int attempt = 0; attempt < kDedupeAttempts; ++attempt) {
                    const std::uint64_t item = zipf(rng);
                    if (std::find(drawn.begin(), drawn.end(), item) == drawn.end()) {
                        drawn.push_back(item);
                        object.push_back(std::to_string(item));
                        placed = true;
                        break;
                    }
                }
                if (!placed) break;  // skip the slot; the domain is saturated here
            }
            collection.push_back(std::move(object));
        }
    }
    if (truncated && warnings) {
        warnings->push_back("object lengths truncated to the domain size");
    }
    return collection;
}

const char* ordering_name(Direction d) {
    return d == Direction::Increasing ? "increasing" : "decreasing";
}

const char* freq_source_name(FreqSource s) { return s == FreqSource::LeftOnly ? "left" : "union"; }

namespace {

nlohmann::json stats_to_json(const DatasetStats& stats) {
    return nlohmann::json{{"cardinality", stats.cardinality},
                          {"domain_size", stats.domain_size},
                          {"avg_len", stats.avg_len},
                          {"weighted_avg_len", stats.weighted_avg_len},
                          {"median_len", stats.median_len},
                          {"max_len", stats.max_len}};
}

std::uint64_t csv_limit_value(const RunReport& report) {
    return report.output.limit_value == kUnlimited ? 0 : report.output.limit_value;
}

}  // namespace

const char* report_csv_header() {
    return "algorithm,paradigm,ordering,freq_source,intersect,limit_strategy,limit_value,"
           "n_results,n_intersections,n_candidates_direct,n_candidates_verified,build_ms,"
           "join_ms,peak_logical_bytes";
}

std::string report_csv_row(const RunReport& report) {
    std::ostringstream row;
    const JoinOutput& out = report.output;
    row << algorithm_name(report.config.algorithm) << ',' << paradigm_name(report.config.paradigm)
        << ',' << ordering_name(report.config.ordering) << ','
        << freq_source_name(report.config.freq_source) << ','
        << intersect_name(report.config.intersect) << ',' << report.limit_strategy << ','
        << csv_limit_value(report) << ',' << out.n_results << ',' << out.n_intersections << ','
        << out.n_candidates_direct << ',' << out.n_candidates_verified << ',' << out.build_ms
        << ',' << out.join_ms << ',' << out.peak_logical_bytes;
    return row.str();
}

void write_report_json(const RunReport& report, const std::filesystem::path& path) {
    const JoinOutput& out = report.output;
    const CostConstants& k = report.config.constants;
    nlohmann::json doc{
        {"config",
         {{"left", report.left_path},
          {"right", report.right_path},
          {"algorithm", algorithm_name(report.config.algorithm)},
          {"paradigm", paradigm_name(report.config.paradigm)},
          {"ordering", ordering_name(report.config.ordering)},
          {"freq_source", freq_source_name(report.config.freq_source)},
          {"intersect", intersect_name(report.config.intersect)},
          {"limit_strategy", report.limit_strategy},
          {"limit_value", csv_limit_value(report)},
          {"count_only", report.config.count_only},
          {"faithful", report.config.faithful}}},
        {"dataset", {{"left", stats_to_json(report.left_stats)}, {"right", stats_to_json(report.right_stats)}}},
        {"cost_constants",
         {{"a1", k.a1}, {"b1", k.b1}, {"g1", k.g1}, {"a2", k.a2}, {"b2", k.b2}, {"a3", k.a3},
          {"b3", k.b3}, {"a4", k.a4}, {"b4", k.b4}, {"g4", k.g4}}},
        {"counters",
         {{"n_results", out.n_results},
          {"n_intersections", out.n_intersections},
          {"n_candidates_direct", out.n_candidates_direct},
          {"n_candidates_verified", out.n_candidates_verified},
          {"build_ms", out.build_ms},
          {"join_ms", out.join_ms},
          {"peak_logical_bytes", out.peak_logical_bytes},
          {"n_right_indexed", out.n_right_indexed}}}};
    if (!report.config.count_only) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [l, r] : out.pairs) pairs.push_back({l, r});
        doc["pairs"] = std::move(pairs);
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write report: " + path.string());
    file << doc.dump(2) << '\n';
}

void append_report_csv(const RunReport& report, const std::filesystem::path& path) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream file(path, std::ios::app);
    if (!file) throw std::runtime_error("cannot write report: " + path.string());
    if (fresh) file << report_csv_header() << '\n';
    file << report_csv_row(report) << '\n';
}

}  // namespace scj
