#pragma once

#include <cstdint>
#include <vector>

#include "scj/core.hpp"
#include "scj/costmodel.hpp"

namespace scj {

enum class LimitStrategy { Avg, WAvg, Mdn, Frq };

struct LimitEstimate {
    LimitStrategy strategy = LimitStrategy::Avg;
    std::uint32_t value = 1;
    std::vector<double> probability_trace;  // FRQ only: P(path of length k in an R object)
};

/// Picks a tree limit from cheap statistics. Avg / WAvg / Mdn round their
/// length statistic half-up; Frq grows a hypothetical path of R's most
/// frequent items, tracking the independence probability of the path and the
/// modeled candidate-list size, and stops before the first depth where the
/// intersection there costs more than verifying the expected survivors
/// (threshold_scale multiplies the verification side). All results clamp to
/// [1, max object length]. Throws std::runtime_error("no statistics") for an
/// empty left collection.
LimitEstimate estimate_limit(const DatasetStats& left_stats, LimitStrategy strategy,
                             const ItemDictionary& dict, const CostConstants& constants,
                             std::size_t n_right, const DatasetStats& right_stats,
                             double threshold_scale = 1.0);

const char* limit_strategy_name(LimitStrategy strategy);

}  // namespace scj
