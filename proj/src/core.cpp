#include "scj/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace scj {

namespace {

bool parse_u64(const std::string& token, std::uint64_t& out) {
    if (token.empty() || token.size() > 19) return false;
    std::uint64_t v = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    out = v;
    return true;
}

// Counts, for one side, the number of objects containing each token id.
void count_object_frequencies(const RawCollection& raw, const ItemDictionary& dict,
                              std::vector<std::uint32_t>& freq) {
    std::vector<std::uint32_t> seen_ids;
    for (const RawObject& object : raw) {
        seen_ids.clear();
        for (const std::string& token : object) {
            seen_ids.push_back(dict.token_ids.at(token));
        }
        std::sort(seen_ids.begin(), seen_ids.end());
        seen_ids.erase(std::unique(seen_ids.begin(), seen_ids.end()), seen_ids.end());
        for (std::uint32_t id : seen_ids) ++freq[id];
    }
}

}  // namespace

ItemDictionary build_dictionary(const RawCollection& left, const RawCollection& right,
                                Direction direction, FreqSource source) {
    ItemDictionary dict;
    dict.direction = direction;
    dict.source = source;

    for (const RawCollection* coll : {&left, &right}) {
        for (const RawObject& object : *coll) {
            for (const std::string& token : object) {
                if (dict.token_ids.emplace(token, 0).second) dict.tokens.push_back(token);
            }
        }
    }
    if (dict.tokens.empty()) throw std::runtime_error("empty domain");

    // Dense ids follow sorted token order: numeric when the whole domain is
    // numeric, lexicographic otherwise.
    bool all_numeric = true;
    std::uint64_t probe = 0;
    for (const std::string& t : dict.tokens) {
        if (!parse_u64(t, probe)) {
            all_numeric = false;
            break;
        }
    }
    std::sort(dict.tokens.begin(), dict.tokens.end(),
              [&](const std::string& a, const std::string& b) {
                  if (all_numeric) {
                      std::uint64_t x = 0, y = 0;
                      parse_u64(a, x);
                      parse_u64(b, y);
                      return x < y;
                  }
                  return a < b;
              });
    for (std::uint32_t id = 0; id < dict.tokens.size(); ++id) dict.token_ids[dict.tokens[id]] = id;

    const std::size_t n = dict.tokens.size();
    dict.freq_left.assign(n, 0);
    dict.freq_right.assign(n, 0);
    count_object_frequencies(left, dict, dict.freq_left);
    count_object_frequencies(right, dict, dict.freq_right);
    dict.freq_union.resize(n);
    for (std::size_t i = 0; i < n; ++i) dict.freq_union[i] = dict.freq_left[i] + dict.freq_right[i];

    const std::vector<std::uint32_t>& key =
        (source == FreqSource::LeftOnly) ? dict.freq_left : dict.freq_union;
    dict.id_at.resize(n);
    std::iota(dict.id_at.begin(), dict.id_at.end(), 0);
    std::sort(dict.id_at.begin(), dict.id_at.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (key[a] != key[b]) {
            return direction == Direction::Decreasing ? key[a] > key[b] : key[a] < key[b];
        }
        return a < b;  // ties: lower id first, either direction
    });
    dict.rank_of.resize(n);
    for (ItemId r = 0; r < n; ++r) dict.rank_of[dict.id_at[r]] = r;
    return dict;
}

Collection sort_objects(const RawCollection& raw, const ItemDictionary& dict, Side side,
                        bool keep_empty) {
    Collection out;
    out.side = side;
    out.objects.reserve(raw.size());
    const bool drop_empty = (side == Side::Left) && !keep_empty;
    for (const RawObject& object : raw) {
        SetObject encoded;
        encoded.items.reserve(object.size());
        for (const std::string& token : object) {
            auto it = dict.token_ids.find(token);
            if (it == dict.token_ids.end()) throw std::runtime_error("unknown item: " + token);
            encoded.items.push_back(dict.rank_of[it->second]);
        }
        std::sort(encoded.items.begin(), encoded.items.end());
        encoded.items.erase(std::unique(encoded.items.begin(), encoded.items.end()),
                            encoded.items.end());
        if (encoded.items.empty() && drop_empty) {
            ++out.dropped_empty;
            continue;
        }
        encoded.oid = static_cast<Oid>(out.objects.size());
        out.objects.push_back(std::move(encoded));
    }
    out.stats = collection_stats(out);
    return out;
}

PartitionMap partition_by_first_item(const Collection& collection) {
    PartitionMap map;
    std::size_t domain = 0;
    for (const SetObject& object : collection.objects) {
        if (!object.empty()) domain = std::max<std::size_t>(domain, object.items.back() + 1);
    }
    map.groups.assign(domain, {});
    for (const SetObject& object : collection.objects) {
        if (object.empty()) {
            map.empty_oids.push_back(object.oid);
        } else {
            map.groups[object.items.front()].push_back(object.oid);
            ++map.assigned;
        }
    }
    return map;
}

DatasetStats collection_stats(const Collection& collection) {
    DatasetStats stats;
    stats.cardinality = collection.objects.size();
    if (collection.objects.empty()) return stats;

    std::vector<std::size_t> lengths;
    lengths.reserve(collection.objects.size());
    std::uint64_t sum = 0, sum_sq = 0;
    std::vector<bool> seen;
    for (const SetObject& object : collection.objects) {
        const std::size_t len = object.size();
        lengths.push_back(len);
        sum += len;
        sum_sq += static_cast<std::uint64_t>(len) * len;
        stats.max_len = std::max(stats.max_len, len);
        for (ItemId item : object.items) {
            if (item >= seen.size()) seen.resize(item + 1, false);
            if (!seen[item]) {
                seen[item] = true;
                ++stats.domain_size;
            }
        }
    }
    stats.total_len = sum;
    stats.avg_len = static_cast<double>(sum) / static_cast<double>(lengths.size());
    stats.weighted_avg_len = sum == 0 ? 0.0 : static_cast<double>(sum_sq) / static_cast<double>(sum);

    const std::size_t n = lengths.size();
    auto mid = lengths.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(lengths.begin(), mid, lengths.end());
    if (n % 2 == 1) {
        stats.median_len = static_cast<double>(*mid);
    } else {
        const std::size_t hi = *mid;
        std::nth_element(lengths.begin(), mid - 1, lengths.end());
        stats.median_len = (static_cast<double>(*(mid - 1)) + static_cast<double>(hi)) / 2.0;
    }
    return stats;
}

}  // namespace scj
