#include "scj/intersect.hpp"

#include <algorithm>
#include <cmath>

namespace scj {

namespace {

inline void account(CandidateList& cl, Oid oid, std::uint32_t depth,
                    std::span<const std::uint32_t> lengths) {
    const std::uint32_t len = lengths[oid];
    if (len >= depth) {
        cl.suffix_sum += len - depth;
        ++cl.long_count;
    }
}

}  // namespace

bool prefers_binary(std::size_t n_cl, std::size_t n_postings, const HybridPolicy& policy) {
    const double nc = static_cast<double>(n_cl);
    const double np = static_cast<double>(n_postings);
    const double binary_cost = policy.binary_per_probe * nc * std::log2(np + 1.0) + policy.binary_fixed;
    const double merge_cost =
        policy.merge_per_cl * nc + policy.merge_per_postings * np + policy.merge_fixed;
    return binary_cost < merge_cost;
}

CandidateList intersect_merge(const CandidateList& cl, std::span<const Oid> postings,
                              std::uint32_t depth, std::span<const std::uint32_t> lengths) {
    CandidateList out;
    out.oids.reserve(std::min(cl.size(), postings.size()));
    std::size_t i = 0, j = 0;
    while (i < cl.oids.size() && j < postings.size()) {
        const Oid a = cl.oids[i];
        const Oid b = postings[j];
        if (a == b) {
            out.oids.push_back(a);
            account(out, a, depth, lengths);
            ++i;
            ++j;
        } else if (a < b) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

CandidateList intersect_binary(const CandidateList& cl, std::span<const Oid> postings,
                               std::uint32_t depth, std::span<const std::uint32_t> lengths) {
    CandidateList out;
    out.oids.reserve(std::min(cl.size(), postings.size()));
    auto lo = postings.begin();
    for (Oid oid : cl.oids) {
        lo = std::lower_bound(lo, postings.end(), oid);
        if (lo == postings.end()) break;
        if (*lo == oid) {
            out.oids.push_back(oid);
            account(out, oid, depth, lengths);
            ++lo;
        }
    }
    return out;
}

CandidateList intersect_hybrid(const CandidateList& cl, std::span<const Oid> postings,
                               std::uint32_t depth, std::span<const std::uint32_t> lengths,
                               const HybridPolicy& policy) {
    return prefers_binary(cl.size(), postings.size(), policy)
               ? intersect_binary(cl, postings, depth, lengths)
               : intersect_merge(cl, postings, depth, lengths);
}

CandidateList intersect(IntersectKind kind, const CandidateList& cl, std::span<const Oid> postings,
                        std::uint32_t depth, std::span<const std::uint32_t> lengths,
                        const HybridPolicy& policy) {
    switch (kind) {
        case IntersectKind::Merge:
            return intersect_merge(cl, postings, depth, lengths);
        case IntersectKind::Binary:
            return intersect_binary(cl, postings, depth, lengths);
        case IntersectKind::Hybrid:
            break;
    }
    return intersect_hybrid(cl, postings, depth, lengths, policy);
}

}  // namespace scj
