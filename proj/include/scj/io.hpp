#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scj/core.hpp"
#include "scj/join.hpp"

namespace scj {

/// Reads a transaction file: one object per line, whitespace-separated tokens
/// kept verbatim, blank lines are empty objects, lines starting with '#' are
/// skipped. Throws on unreadable files and on lines holding more than
/// max_tokens_per_line tokens ("line too long").
RawCollection read_transactions(const std::filesystem::path& path,
                                std::size_t max_tokens_per_line = 1000000);

/// Canonical writer: single spaces, one object per line, trailing newline.
void write_transactions(const std::filesystem::path& path, const RawCollection& collection);

struct GenSpec {
    std::uint64_t cardinality = 1;
    std::uint32_t domain_size = 1;
    double weighted_avg_len = 1.0;   // target for sum(len^2)/sum(len)
    double zipf = 0.0;               // skew of the item distribution
    std::uint64_t seed = 0;
};

/// Deterministic synthetic transactions: geometric object lengths tuned so the
/// length-weighted mean approaches weighted_avg_len, items drawn from a
/// Zipf(zipf) distribution over [1, domain_size] and resampled to dedupe
/// inside an object (50 attempts per slot, then the slot is skipped).
/// Tokens are the drawn item numbers in decimal.
RawCollection generate_synthetic(const GenSpec& spec,
                                 std::vector<std::string>* warnings = nullptr);

/// Zipf(exponent) sampler over [1, n] by rejection inversion; exponent 0 is
/// uniform. Deterministic for a fixed stream of 53-bit uniforms.
class ZipfSampler {
public:
    ZipfSampler(std::uint64_t n, double exponent);
    /// Draws one value; next_uniform yields doubles in [0, 1).
    template <typename Rng>
    std::uint64_t operator()(Rng& rng) {
        while (true) {
            const double u =
                h_top_ + uniform01(rng()) * (h_x1_ - h_top_);
            const double x = h_integral_inverse(u);
            std::uint64_t k = static_cast<std::uint64_t>(x + 0.5);
            if (k < 1) k = 1;
            if (k > n_) k = n_;
            const double kd = static_cast<double>(k);
            if (kd - x <= accept_margin_ || u >= h_integral(kd + 0.5) - h(kd)) return k;
        }
    }

    static double uniform01(std::uint64_t bits) {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    double h_integral(double x) const;
    double h_integral_inverse(double x) const;
    double h(double x) const;

    std::uint64_t n_;
    double exponent_;
    double h_x1_;
    double h_top_;
    double accept_margin_;
};

struct RunReport {
    std::string left_path;
    std::string right_path;
    JoinConfig config;
    std::string limit_strategy;      // explicit | unlimited | avg | wavg | mdn | frq
    DatasetStats left_stats;
    DatasetStats right_stats;
    JoinOutput output;
};

/// Writes the whole report as one JSON document; the pairs array is omitted
/// for count-only runs.
void write_report_json(const RunReport& report, const std::filesystem::path& path);

/// Appends one CSV row (header written when the file is new or empty).
void append_report_csv(const RunReport& report, const std::filesystem::path& path);

const char* report_csv_header();
std::string report_csv_row(const RunReport& report);

const char* ordering_name(Direction d);
const char* freq_source_name(FreqSource s);

}  // namespace scj
