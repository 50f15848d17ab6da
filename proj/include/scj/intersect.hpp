#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scj/core.hpp"

namespace scj {

enum class IntersectKind { Merge, Binary, Hybrid };

/// Candidates list: the running intersection of postings along a tree path.
///
/// suffix_sum and long_count are maintained relative to the depth the kernels
/// were invoked with: suffix_sum = sum over members of max(0, |s| - depth),
/// long_count = number of members with |s| >= depth. The pair gives the sums
/// at depth and at depth - 1 in O(1).
struct CandidateList {
    std::vector<Oid> oids;            // strictly ascending
    std::uint64_t suffix_sum = 0;
    std::uint64_t long_count = 0;

    std::size_t size() const { return oids.size(); }
    bool empty() const { return oids.empty(); }
    std::uint64_t suffix_sum_prev_depth() const { return suffix_sum + long_count; }
};

/// Kernel-selection constants for the hybrid intersection; unit values model
/// one comparison per touched element.
struct HybridPolicy {
    double merge_per_cl = 1.0;
    double merge_per_postings = 1.0;
    double merge_fixed = 0.0;
    double binary_per_probe = 1.0;
    double binary_fixed = 0.0;
};

/// True when probing every CL member by binary search is modeled cheaper than
/// a linear merge of both lists.
bool prefers_binary(std::size_t n_cl, std::size_t n_postings, const HybridPolicy& policy = {});

CandidateList intersect_merge(const CandidateList& cl, std::span<const Oid> postings,
                              std::uint32_t depth, std::span<const std::uint32_t> lengths);

CandidateList intersect_binary(const CandidateList& cl, std::span<const Oid> postings,
                               std::uint32_t depth, std::span<const std::uint32_t> lengths);

CandidateList intersect_hybrid(const CandidateList& cl, std::span<const Oid> postings,
                               std::uint32_t depth, std::span<const std::uint32_t> lengths,
                               const HybridPolicy& policy = {});

CandidateList intersect(IntersectKind kind, const CandidateList& cl, std::span<const Oid> postings,
                        std::uint32_t depth, std::span<const std::uint32_t> lengths,
                        const HybridPolicy& policy = {});

}  // namespace scj
