#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace scj {

/// Item identifier in rank space: 0 is the first item of the global ordering.
using ItemId = std::uint32_t;
/// Object identifier: position of the object inside its collection.
using Oid = std::uint32_t;

enum class Direction { Increasing, Decreasing };
enum class FreqSource { LeftOnly, Union };
enum class Side { Left, Right };

/// One input object as read from a transaction file: raw tokens, verbatim.
using RawObject = std::vector<std::string>;
using RawCollection = std::vector<RawObject>;

/// Token dictionary plus the global item ordering.
///
/// Raw tokens get dense ids in sorted token order (numeric when every token
/// parses as a non-negative integer, lexicographic otherwise), so equal-frequency
/// ties resolve deterministically: the lower id ranks first in both directions.
struct ItemDictionary {
    std::vector<std::string> tokens;                      // by dense id
    std::unordered_map<std::string, std::uint32_t> token_ids;
    std::vector<std::uint32_t> freq_left;                 // objects of R containing the item
    std::vector<std::uint32_t> freq_right;                // objects of S containing the item
    std::vector<std::uint32_t> freq_union;                // freq_left + freq_right
    std::vector<ItemId> rank_of;                          // dense id -> rank
    std::vector<std::uint32_t> id_at;                     // rank -> dense id
    Direction direction = Direction::Decreasing;
    FreqSource source = FreqSource::Union;

    std::size_t domain_size() const { return tokens.size(); }
    const std::string& token_at_rank(ItemId rank) const { return tokens[id_at[rank]]; }
    std::uint32_t left_freq_at_rank(ItemId rank) const { return freq_left[id_at[rank]]; }
    std::uint32_t right_freq_at_rank(ItemId rank) const { return freq_right[id_at[rank]]; }
};

/// A set object; items are rank-space ids, strictly increasing.
struct SetObject {
    Oid oid = 0;
    std::vector<ItemId> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

struct DatasetStats {
    std::size_t cardinality = 0;
    std::size_t domain_size = 0;      // distinct items in this collection
    double avg_len = 0.0;
    double weighted_avg_len = 0.0;    // sum(len^2) / sum(len)
    double median_len = 0.0;
    std::size_t max_len = 0;
    std::uint64_t total_len = 0;
};

struct Collection {
    Side side = Side::Left;
    std::vector<SetObject> objects;   // oid == position
    DatasetStats stats;
    std::size_t dropped_empty = 0;    // empty objects removed at ingestion
};

/// Objects grouped by their first (lowest-rank) item; empty objects kept aside.
struct PartitionMap {
    std::vector<std::vector<Oid>> groups;   // indexed by ItemId, original order inside
    std::vector<Oid> empty_oids;
    std::size_t assigned = 0;               // non-empty objects placed in groups
};

/// Builds the dictionary and global ordering over both inputs.
/// Frequency is the number of objects containing an item (duplicates inside an
/// object count once). Throws std::runtime_error("empty domain") when no token
/// exists in either input.
ItemDictionary build_dictionary(const RawCollection& left, const RawCollection& right,
                                Direction direction, FreqSource source);

/// Encodes, dedupes and rank-sorts every object. Left-side empty objects are
/// dropped (counted in dropped_empty) unless keep_empty is set; right-side
/// empties are always kept. Throws std::runtime_error("unknown item") for a
/// token missing from the dictionary.
Collection sort_objects(const RawCollection& raw, const ItemDictionary& dict, Side side,
                        bool keep_empty = false);

PartitionMap partition_by_first_item(const Collection& collection);

DatasetStats collection_stats(const Collection& collection);

}  // namespace scj
