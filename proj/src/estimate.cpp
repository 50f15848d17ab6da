#include "scj/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scj {

namespace {

std::uint32_t clamp_round(double value, std::size_t max_len) {
    const double rounded = std::floor(value + 0.5);
    const double hi = static_cast<double>(std::max<std::size_t>(max_len, 1));
    return static_cast<std::uint32_t>(std::max(1.0, std::min(rounded, hi)));
}

}  // namespace

LimitEstimate estimate_limit(const DatasetStats& left_stats, LimitStrategy strategy,
                             const ItemDictionary& dict, const CostConstants& constants,
                             std::size_t n_right, const DatasetStats& right_stats,
                             double threshold_scale) {
    if (left_stats.cardinality == 0) throw std::runtime_error("no statistics");
    LimitEstimate estimate;
    estimate.strategy = strategy;
    switch (strategy) {
        case LimitStrategy::Avg:
            estimate.value = clamp_round(left_stats.avg_len, left_stats.max_len);
            return estimate;
        case LimitStrategy::WAvg:
            estimate.value = clamp_round(left_stats.weighted_avg_len, left_stats.max_len);
            return estimate;
        case LimitStrategy::Mdn:
            estimate.value = clamp_round(left_stats.median_len, left_stats.max_len);
            return estimate;
        case LimitStrategy::Frq:
            break;
    }

    // Path of R's most frequent items, most frequent first (ties by id).
    std::vector<std::uint32_t> ids(dict.domain_size());
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (dict.freq_left[a] != dict.freq_left[b]) return dict.freq_left[a] > dict.freq_left[b];
        return a < b;
    });
    while (!ids.empty() && dict.freq_left[ids.back()] == 0) ids.pop_back();

    const double n_r = static_cast<double>(left_stats.cardinality);
    const double n_s = static_cast<double>(n_right);
    double path_prob = 1.0;
    double cl_size = n_s;
    std::uint32_t value = 1;

    const std::size_t max_depth = std::min<std::size_t>(ids.size(), left_stats.max_len);
    for (std::size_t k = 1; k <= max_depth; ++k) {
        const std::uint32_t id = ids[k - 1];
        const double postings = static_cast<double>(dict.freq_right[id]);
        if (k > 1) {
            // Deepening means one more intersection at the expected node; the
            // alternative verifies the expected subtree against the current list.
            const double cost_deepen =
                cost_intersection(cl_size, postings, IntersectKind::Hybrid, constants);
            const double survivors = n_r * path_prob;
            const double depth = static_cast<double>(k - 1);
            const double left_suffix = std::max(0.0, left_stats.avg_len - depth);
            const double right_suffix = std::max(0.0, right_stats.avg_len - depth);
            const double cost_stop =
                cost_verification(survivors, survivors * left_suffix, cl_size,
                                  cl_size * right_suffix, constants);
            if (cost_deepen > threshold_scale * cost_stop) break;
            value = static_cast<std::uint32_t>(k);
        }
        path_prob *= static_cast<double>(dict.freq_left[id]) / n_r;
        estimate.probability_trace.push_back(path_prob);
        cl_size = n_s > 0.0 ? cl_size * postings / n_s : 0.0;
    }
    estimate.value = std::max<std::uint32_t>(
        1, std::min<std::uint32_t>(value, static_cast<std::uint32_t>(
                                              std::max<std::size_t>(left_stats.max_len, 1))));
    return estimate;
}

const char* limit_strategy_name(LimitStrategy strategy) {
    switch (strategy) {
        case LimitStrategy::Avg: return "avg";
        case LimitStrategy::WAvg: return "wavg";
        case LimitStrategy::Mdn: return "mdn";
        case LimitStrategy::Frq: return "frq";
    }
    return "avg";
}

}  // namespace scj
