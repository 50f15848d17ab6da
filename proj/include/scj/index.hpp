#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "scj/core.hpp"

namespace scj {

/// Logical size accounting for the join structures. Numbers are counted, not
/// taken from the allocator, so they are comparable across builds and hosts.
struct MemoryGauge {
    static constexpr std::uint64_t kNodeBytes = 48;
    static constexpr std::uint64_t kEntryBytes = 8;   // one oid in rl / postings / CL
    static constexpr std::uint64_t kObjectMetaBytes = 8;

    std::uint64_t current = 0;
    std::uint64_t peak = 0;

    void add(std::uint64_t bytes) {
        current += bytes;
        if (current > peak) peak = current;
    }
    void sub(std::uint64_t bytes) { current = bytes > current ? 0 : current - bytes; }
};

constexpr std::uint32_t kUnlimited = std::numeric_limits<std::uint32_t>::max();

struct PrefixTreeNode {
    ItemId item = 0;
    std::uint32_t depth = 0;
    std::vector<std::unique_ptr<PrefixTreeNode>> children;  // ascending item
    std::vector<Oid> rl_eq;      // objects equal to the node path
    std::vector<Oid> rl_super;   // objects strictly longer than the path (depth == limit only)

    // Subtree aggregates relative to the build limit L:
    std::uint64_t agg_count = 0;        // objects stored in this subtree
    std::uint64_t agg_suffix_sum = 0;   // sum of max(0, |r| - L) over the subtree
    std::uint64_t agg_long_count = 0;   // objects in the subtree with |r| >= L

    const PrefixTreeNode* find_child(ItemId item) const;
};

struct PrefixTree {
    std::vector<std::unique_ptr<PrefixTreeNode>> roots;  // children of the virtual root
    std::uint32_t limit = kUnlimited;
    std::size_t object_count = 0;   // non-empty objects inserted
    std::size_t node_count = 0;
    MemoryGauge* gauge = nullptr;

    const PrefixTreeNode* find_root(ItemId item) const;
};

/// Builds the prefix tree up to depth limit (kUnlimited for the full tree).
/// Each object lands in rl_eq at depth |r| when |r| <= limit, otherwise in
/// rl_super of its depth-limit node. Throws for limit < 1.
PrefixTree build_prefix_tree(std::span<const SetObject> objects, std::uint32_t limit,
                             MemoryGauge* gauge = nullptr);

/// Same, over a subset of a collection given by oids (the OPJ partitions).
PrefixTree build_prefix_tree(const Collection& collection, std::span<const Oid> oids,
                             std::uint32_t limit, MemoryGauge* gauge = nullptr);

/// Removes the root child labeled with item; no-op when absent.
void delete_subtree(PrefixTree& tree, ItemId item);

/// Postings lists over the right collection. Object ids inside postings are
/// append-sequence numbers; original_oid maps them back to collection oids.
struct InvertedIndex {
    std::vector<std::vector<Oid>> postings;   // by ItemId
    std::vector<std::uint32_t> lengths;       // by sequence number
    std::vector<Oid> original_oid;            // by sequence number
    std::uint64_t total_postings = 0;
    MemoryGauge* gauge = nullptr;

    std::size_t indexed_count() const { return lengths.size(); }
    Oid original(Oid seq) const { return original_oid[seq]; }
    std::span<const Oid> postings_for(ItemId item) const {
        static const std::vector<Oid> kEmpty;
        return item < postings.size() ? std::span<const Oid>(postings[item])
                                      : std::span<const Oid>(kEmpty);
    }
};

InvertedIndex make_inverted_index(std::size_t domain_size, MemoryGauge* gauge = nullptr);

/// Bulk construction over a whole collection (sequence numbers == oids).
InvertedIndex build_inverted_index(std::span<const SetObject> objects, std::size_t domain_size,
                                   MemoryGauge* gauge = nullptr);

/// Appends one object under a caller-chosen sequence number, which must exceed
/// every sequence number already indexed ("out-of-order append" otherwise).
void append_object(InvertedIndex& index, Oid seq, std::span<const ItemId> items, Oid original);

/// Appends a partition; each object's oid is its sequence number.
void extend_inverted_index(InvertedIndex& index, std::span<const SetObject> partition);

}  // namespace scj
