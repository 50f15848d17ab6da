#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scj/core.hpp"
#include "scj/costmodel.hpp"
#include "scj/estimate.hpp"
#include "scj/index.hpp"
#include "scj/intersect.hpp"

namespace scj {

enum class Algorithm { Pretti, Limit, LimitPlus };
enum class Paradigm { Bulk, Opj };

struct LimitSpec {
    enum class Kind { Unlimited, Explicit, Strategy };
    Kind kind = Kind::Strategy;
    std::uint32_t value = 0;
    LimitStrategy strategy = LimitStrategy::Frq;

    static LimitSpec unlimited() { return {Kind::Unlimited, 0, LimitStrategy::Frq}; }
    static LimitSpec explicit_limit(std::uint32_t v) { return {Kind::Explicit, v, LimitStrategy::Frq}; }
    static LimitSpec by_strategy(LimitStrategy s) { return {Kind::Strategy, 0, s}; }
};

struct JoinConfig {
    Algorithm algorithm = Algorithm::LimitPlus;
    Paradigm paradigm = Paradigm::Opj;
    Direction ordering = Direction::Increasing;
    FreqSource freq_source = FreqSource::Union;
    IntersectKind intersect = IntersectKind::Hybrid;
    LimitSpec limit;
    bool count_only = false;
    /// Follows the textbook traversal exactly: every visited node runs (and
    /// counts) its list intersection, including the root children whose
    /// candidates list is still the whole collection, and empty candidate
    /// lists do not prune the recursion. Default mode replaces the root-child
    /// intersection by a postings copy (uncounted) and prunes empty lists.
    bool faithful = false;
    CostConstants constants;
    double frq_threshold_scale = 1.0;
    bool record_decisions = false;
};

/// One adaptive decision, recorded when JoinConfig::record_decisions is set.
struct DecisionRecord {
    std::vector<ItemId> path;
    bool continued = true;         // true: strategy A, false: stop-and-verify
    std::uint64_t subtree_objects = 0;
    std::uint64_t cl_size = 0;
};

struct JoinOutput {
    std::vector<std::pair<Oid, Oid>> pairs;   // sorted by (left, right); empty in count_only
    std::uint64_t n_results = 0;
    std::uint64_t n_intersections = 0;
    std::uint64_t n_candidates_direct = 0;
    std::uint64_t n_candidates_verified = 0;
    double build_ms = 0.0;
    double join_ms = 0.0;
    std::uint64_t peak_logical_bytes = 0;
    std::uint32_t limit_value = kUnlimited;   // resolved tree limit
    std::size_t n_right_indexed = 0;          // right objects ever appended to the index
    std::vector<DecisionRecord> decisions;
};

/// Suffix containment check: items of r from position start_depth onward must
/// all appear in s from position start_depth onward (two-finger scan). The
/// caller guarantees the first start_depth items of r are contained in s.
bool verify_suffix(const SetObject& r, const SetObject& s, std::uint32_t start_depth);

/// Builds the full structures first, then traverses (the bulk paradigm).
JoinOutput join_bulk(const Collection& left, const Collection& right, const ItemDictionary& dict,
                     const JoinConfig& cfg);

/// Order and partition: processes first-item partitions in global item order,
/// growing the inverted index incrementally and discarding each per-partition
/// tree after its join. Stops as soon as every left partition is consumed.
JoinOutput join_opj(const Collection& left, const Collection& right, const ItemDictionary& dict,
                    const JoinConfig& cfg);

JoinOutput run_join(const Collection& left, const Collection& right, const ItemDictionary& dict,
                    const JoinConfig& cfg);

const char* algorithm_name(Algorithm a);
const char* paradigm_name(Paradigm p);
const char* intersect_name(IntersectKind k);

}  // namespace scj
