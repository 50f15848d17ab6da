#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scj/intersect.hpp"

namespace scj {

/// Constants of the per-task cost functions, in abstract cost units.
/// Defaults form a unit-cost model so decisions are reproducible without
/// calibration.
struct CostConstants {
    double a1 = 1.0, b1 = 1.0, g1 = 0.0;  // merge intersection
    double a2 = 1.0, b2 = 0.0;            // binary-search intersection
    double a3 = 1.0, b3 = 0.0;            // direct output
    double a4 = 1.0, b4 = 1.0, g4 = 0.0;  // verification

    HybridPolicy hybrid_policy() const { return HybridPolicy{a1, b1, g1, a2, b2}; }
};

double cost_intersection(double n_cl, double n_postings, IntersectKind method,
                         const CostConstants& k);

double cost_direct(double n_clp, double n_rl_eq, const CostConstants& k);

double cost_verification(double n_left, double left_suffix_sum, double n_right,
                         double right_suffix_sum, const CostConstants& k);

/// Independence estimate of |CL ∩ postings|: n_cl * n_postings / n_s.
/// Real-valued; throws for n_s == 0.
double estimate_intersection_size(double n_cl, double n_postings, double n_s);

/// Shrinks a candidate-list suffix sum by the postings decrease ratio.
double estimate_suffix_sum(double cl_suffix_sum, double n_postings, double n_s);

/// Aggregates of the subtree under the node being decided, relative to the
/// tree's build limit L.
struct SubtreeStats {
    std::uint64_t object_count = 0;    // objects in the subtree
    std::uint64_t rl_eq_count = 0;     // objects equal to the node path
    std::uint64_t suffix_sum = 0;      // sum of max(0, |r| - L)
    std::uint64_t long_count = 0;      // objects with |r| >= L
};

/// Size and suffix bookkeeping of a candidates list, decoupled from the
/// materialized oid sequence so whole-collection lists stay implicit.
struct ClStats {
    std::uint64_t size = 0;
    std::uint64_t suffix_sum = 0;   // sum of max(0, |s| - L)
    std::uint64_t long_count = 0;   // members with |s| >= L

    static ClStats of(const CandidateList& cl) {
        return {cl.oids.size(), cl.suffix_sum, cl.long_count};
    }
};

/// The adaptive A-vs-B decision: true keeps intersecting (strategy A), false
/// stops and verifies the whole subtree against the current candidates.
/// Cost A uses the estimated post-intersection list; cost B uses the actual
/// list with suffixes taken one position earlier. A wins ties.
bool continue_as_limit(const SubtreeStats& node, const ClStats& cl, std::size_t n_postings,
                       std::size_t n_s, IntersectKind method, const CostConstants& k);

bool continue_as_limit(const SubtreeStats& node, const CandidateList& cl, std::size_t n_postings,
                       std::size_t n_s, IntersectKind method, const CostConstants& k);

struct CalibrationResult {
    CostConstants constants;
    double r2_merge = 0.0;
    double r2_binary = 0.0;
    double r2_direct = 0.0;
    double r2_verification = 0.0;
    bool degenerate = false;           // fit fell back to unit constants
    std::vector<std::string> warnings;
};

struct CalibrationOptions {
    std::vector<std::size_t> intersect_sizes = {1000, 2000, 4000, 8000, 16000};
    std::vector<std::size_t> pair_sizes = {256, 512, 1024, 2048, 4096};
    std::vector<std::size_t> verify_sizes = {32, 64, 128, 256, 512};
    std::size_t repetitions = 9;       // median over runs
    std::uint64_t seed = 42;
};

/// Micro-benchmarks the four primitives over a size grid and fits the cost
/// formulas by least squares (negative coefficients clamp to zero).
CalibrationResult calibrate(const CalibrationOptions& options = {});

/// Least-squares fit of t ~ a*x + b*y + g over observation rows (x, y, t).
/// Exposed so synthetic timings can be pushed through the same fitter.
bool fit_linear3(const std::vector<std::array<double, 3>>& rows, double& a, double& b, double& g,
                 double& r2);

/// Least-squares fit of t ~ a*u + b over rows (u, t).
bool fit_linear2(const std::vector<std::array<double, 2>>& rows, double& a, double& b, double& r2);

void save_constants(const CostConstants& k, const std::filesystem::path& path);
CostConstants load_constants(const std::filesystem::path& path);

}  // namespace scj
