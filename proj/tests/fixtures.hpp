#pragma once

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "scj/core.hpp"
#include "scj/io.hpp"

namespace scj::testfix {

// The tiny demo pair from data/: tokens 1..7 stand for items G..A, so the
// numeric-token ordering reproduces the intended frequency tie-breaks.
inline RawCollection tiny_left() {
    return {{"1", "2", "3", "5", "6"},
            {"1", "2", "4", "6"},
            {"1", "4", "7"},
            {"2", "4", "5", "6"},
            {"1", "2", "3"},
            {"3", "5"},
            {"1", "2", "3"}};
}

inline RawCollection tiny_right() {
    return {{"4", "5", "7"},
            {"1", "2", "3", "4", "5", "7"},
            {"4", "6"},
            {"1", "2", "5", "6"},
            {"1", "2", "3", "6"},
            {"2", "3", "4", "5", "6"},
            {"1", "3", "4", "5", "6"},
            {"1", "3", "4", "5", "6"},
            {"1", "2", "3", "4"},
            {"1", "2", "3", "4"},
            {"1", "2"},
            {"1", "2", "3"}};
}

struct Fixture {
    ItemDictionary dict;
    Collection left;
    Collection right;
};

inline Fixture make_fixture(Direction direction = Direction::Decreasing,
                            FreqSource source = FreqSource::Union) {
    Fixture f;
    const RawCollection l = tiny_left();
    const RawCollection r = tiny_right();
    f.dict = build_dictionary(l, r, direction, source);
    f.left = sort_objects(l, f.dict, Side::Left);
    f.right = sort_objects(r, f.dict, Side::Right);
    return f;
}

/// Rank of the item written as a letter G..A (token "1".."7").
inline ItemId rank_of_letter(const ItemDictionary& dict, char letter) {
    const std::string token = std::to_string('G' - letter + 1);
    return dict.rank_of[dict.token_ids.at(token)];
}

/// The 16 expected result pairs of the tiny fixture, 0-based oids.
inline std::vector<std::pair<Oid, Oid>> tiny_expected_pairs() {
    return {{2, 1}, {3, 5}, {4, 1}, {4, 4}, {4, 8}, {4, 9}, {4, 11}, {5, 1},
            {5, 5}, {5, 6}, {5, 7}, {6, 1}, {6, 4}, {6, 8}, {6, 9}, {6, 11}};
}

/// Random transaction collection for property tests and the oracle sweep.
inline RawCollection random_collection(std::mt19937_64& rng, std::size_t max_objects,
                                       std::size_t domain, std::size_t max_len, double zipf) {
    ZipfSampler sampler(domain, zipf);
    const std::size_t count = 1 + rng() % max_objects;
    RawCollection collection;
    collection.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t length = 1 + rng() % max_len;
        RawObject object;
        std::vector<std::uint64_t> drawn;
        for (std::size_t slot = 0; slot < length; ++slot) {
            bool placed = false;
            for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
                const std::uint64_t item = sampler(rng);
                if (std::find(drawn.begin(), drawn.end(), item) == drawn.end()) {
                    drawn.push_back(item);
                    object.push_back(std::to_string(item));
                    placed = true;
                }
            }
            if (!placed) break;
        }
        collection.push_back(std::move(object));
    }
    return collection;
}

}  // namespace scj::testfix
