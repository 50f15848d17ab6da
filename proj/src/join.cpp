#include "scj/join.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace scj {

bool verify_suffix(const SetObject& r, const SetObject& s, std::uint32_t start_depth) {
    const std::vector<ItemId>& ri = r.items;
    const std::vector<ItemId>& si = s.items;
    std::size_t i = start_depth, j = start_depth;
    while (i < ri.size()) {
        const ItemId want = ri[i];
        while (j < si.size() && si[j] < want) ++j;
        if (j == si.size() || si[j] != want) return false;
        ++i;
        ++j;
    }
    return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct GaugeScope {
    MemoryGauge& gauge;
    std::uint64_t bytes;
    GaugeScope(MemoryGauge& g, std::size_t entries)
        : gauge(g), bytes(MemoryGauge::kEntryBytes * entries) {
        gauge.add(bytes);
    }
    ~GaugeScope() { gauge.sub(bytes); }
    GaugeScope(const GaugeScope&) = delete;
    GaugeScope& operator=(const GaugeScope&) = delete;
};

SubtreeStats stats_of(const PrefixTreeNode& n) {
    return {n.agg_count, n.rl_eq.size(), n.agg_suffix_sum, n.agg_long_count};
}

void validate_config(const JoinConfig& cfg) {
    if (cfg.algorithm == Algorithm::Pretti && cfg.limit.kind != LimitSpec::Kind::Unlimited) {
        throw std::invalid_argument("pretti uses the full prefix tree; drop the limit options");
    }
    if (cfg.limit.kind == LimitSpec::Kind::Explicit && cfg.limit.value < 1) {
        throw std::invalid_argument("limit must be >= 1");
    }
}

std::uint32_t resolve_limit(const Collection& left, const Collection& right,
                            const ItemDictionary& dict, const JoinConfig& cfg) {
    if (cfg.algorithm == Algorithm::Pretti) return kUnlimited;
    switch (cfg.limit.kind) {
        case LimitSpec::Kind::Unlimited:
            return kUnlimited;
        case LimitSpec::Kind::Explicit:
            return cfg.limit.value;
        case LimitSpec::Kind::Strategy:
            break;
    }
    if (left.objects.empty()) return 1;  // join is empty; any tree limit works
    return estimate_limit(left.stats, cfg.limit.strategy, dict, cfg.constants,
                          right.objects.size(), right.stats, cfg.frq_threshold_scale)
        .value;
}

// One traversal over one tree (the whole tree under bulk, a partition tree
// under OPJ) against the current state of the inverted index.
struct Engine {
    const Collection& left;
    const Collection& right;
    const InvertedIndex& index;
    const JoinConfig& cfg;
    std::uint32_t limit;
    std::size_t n_s_est;     // |S| seen by the cost model
    ClStats root_cl;         // stats of the whole-collection candidates list
    JoinOutput& out;
    MemoryGauge& gauge;
    HybridPolicy hybrid;

    std::vector<ItemId> path = {};
    std::optional<CandidateList> materialized_root = {};
    std::uint64_t root_bytes = 0;

    ~Engine() { gauge.sub(root_bytes); }

    const CandidateList& root_candidates() {
        if (!materialized_root) {
            CandidateList cl;
            cl.oids.resize(index.indexed_count());
            std::iota(cl.oids.begin(), cl.oids.end(), 0u);
            cl.suffix_sum = root_cl.suffix_sum;
            cl.long_count = root_cl.long_count;
            root_bytes = MemoryGauge::kEntryBytes * cl.oids.size();
            gauge.add(root_bytes);
            materialized_root = std::move(cl);
        }
        return *materialized_root;
    }

    // The root-child intersection over the full candidates list degenerates to
    // the postings list itself; default mode takes the copy without running
    // (or counting) a kernel.
    CandidateList candidates_from_postings(ItemId item) {
        CandidateList cl;
        const auto postings = index.postings_for(item);
        cl.oids.assign(postings.begin(), postings.end());
        for (Oid seq : cl.oids) {
            const std::uint32_t len = index.lengths[seq];
            if (len >= limit) {
                cl.suffix_sum += len - limit;
                ++cl.long_count;
            }
        }
        return cl;
    }

    bool decide(const PrefixTreeNode& n, const ClStats& cl) {
        bool continued = false;
        if (n_s_est > 0) {
            continued = continue_as_limit(stats_of(n), cl, index.postings_for(n.item).size(),
                                          n_s_est, cfg.intersect, cfg.constants);
        }
        if (cfg.record_decisions) out.decisions.push_back({path, continued, n.agg_count, cl.size});
        return continued;
    }

    void emit_pair(Oid left_oid, Oid right_seq) {
        if (!cfg.count_only) out.pairs.emplace_back(left_oid, index.original(right_seq));
    }

    void emit_node(const PrefixTreeNode& n, const CandidateList& clp) {
        if (!n.rl_eq.empty() && !clp.empty()) {
            const std::uint64_t emitted =
                static_cast<std::uint64_t>(n.rl_eq.size()) * clp.size();
            out.n_candidates_direct += emitted;
            out.n_results += emitted;
            if (!cfg.count_only) {
                for (Oid roid : n.rl_eq) {
                    for (Oid seq : clp.oids) out.pairs.emplace_back(roid, index.original(seq));
                }
            }
        }
        for (Oid roid : n.rl_super) {
            const SetObject& r = left.objects[roid];
            for (Oid seq : clp.oids) {
                ++out.n_candidates_verified;
                if (verify_suffix(r, right.objects[index.original(seq)], limit)) {
                    ++out.n_results;
                    emit_pair(roid, seq);
                }
            }
        }
    }

    void collect_subtree(const PrefixTreeNode& n, std::vector<Oid>& oids) const {
        oids.insert(oids.end(), n.rl_eq.begin(), n.rl_eq.end());
        oids.insert(oids.end(), n.rl_super.begin(), n.rl_super.end());
        for (const auto& child : n.children) collect_subtree(*child, oids);
    }

    // Strategy B: no intersection at this node, so item positions from
    // depth - 1 onward are unchecked and verification starts there.
    void stop_and_verify(const PrefixTreeNode& n, const CandidateList& cl) {
        std::vector<Oid> subtree;
        subtree.reserve(n.agg_count);
        collect_subtree(n, subtree);
        const std::uint32_t start = n.depth - 1;
        for (Oid roid : subtree) {
            const SetObject& r = left.objects[roid];
            for (Oid seq : cl.oids) {
                ++out.n_candidates_verified;
                if (verify_suffix(r, right.objects[index.original(seq)], start)) {
                    ++out.n_results;
                    emit_pair(roid, seq);
                }
            }
        }
    }

    void process_node(const PrefixTreeNode& n, const CandidateList& cl) {
        path.push_back(n.item);
        if (cfg.algorithm == Algorithm::LimitPlus && !decide(n, ClStats::of(cl))) {
            stop_and_verify(n, cl);
            path.pop_back();
            return;
        }
        CandidateList clp =
            intersect(cfg.intersect, cl, index.postings_for(n.item), limit, index.lengths, hybrid);
        ++out.n_intersections;
        GaugeScope scope(gauge, clp.size());
        emit_node(n, clp);
        if (!clp.empty() || cfg.faithful) {
            for (const auto& child : n.children) process_node(*child, clp);
        }
        path.pop_back();
    }

    void process_root_child(const PrefixTreeNode& c) {
        path.push_back(c.item);
        if (cfg.algorithm == Algorithm::LimitPlus && !decide(c, root_cl)) {
            stop_and_verify(c, root_candidates());
            path.pop_back();
            return;
        }
        CandidateList clp;
        if (cfg.faithful) {
            clp = intersect(cfg.intersect, root_candidates(), index.postings_for(c.item), limit,
                            index.lengths, hybrid);
            ++out.n_intersections;
        } else {
            clp = candidates_from_postings(c.item);
        }
        GaugeScope scope(gauge, clp.size());
        emit_node(c, clp);
        if (!clp.empty() || cfg.faithful) {
            for (const auto& child : c.children) process_node(*child, clp);
        }
        path.pop_back();
    }
};

// Kept empty left objects are contained in every right object.
void emit_empty_left_pairs(const Collection& left, const Collection& right, const JoinConfig& cfg,
                           JoinOutput& out) {
    for (const SetObject& r : left.objects) {
        if (!r.empty()) continue;
        out.n_candidates_direct += right.objects.size();
        out.n_results += right.objects.size();
        if (!cfg.count_only) {
            for (const SetObject& s : right.objects) out.pairs.emplace_back(r.oid, s.oid);
        }
    }
}

void finalize_output(JoinOutput& out, const InvertedIndex& index, const MemoryGauge& gauge) {
    std::sort(out.pairs.begin(), out.pairs.end());
    out.peak_logical_bytes = gauge.peak;
    out.n_right_indexed = index.indexed_count();
}

ClStats full_collection_stats(const Collection& right, std::uint32_t limit) {
    ClStats stats;
    stats.size = right.objects.size();
    for (const SetObject& s : right.objects) {
        if (s.size() >= limit) {
            stats.suffix_sum += s.size() - limit;
            ++stats.long_count;
        }
    }
    return stats;
}

}  // namespace

JoinOutput join_bulk(const Collection& left, const Collection& right, const ItemDictionary& dict,
                     const JoinConfig& cfg) {
    validate_config(cfg);
    JoinOutput out;
    MemoryGauge gauge;
    const std::uint32_t limit = resolve_limit(left, right, dict, cfg);
    out.limit_value = limit;

    const auto build_start = Clock::now();
    PrefixTree tree = build_prefix_tree(left.objects, limit, &gauge);
    InvertedIndex index = build_inverted_index(right.objects, dict.domain_size(), &gauge);
    out.build_ms = ms_since(build_start);

    const auto join_start = Clock::now();
    {
        Engine engine{.left = left,
                      .right = right,
                      .index = index,
                      .cfg = cfg,
                      .limit = limit,
                      .n_s_est = right.objects.size(),
                      .root_cl = full_collection_stats(right, limit),
                      .out = out,
                      .gauge = gauge,
                      .hybrid = cfg.constants.hybrid_policy()};
        for (const auto& c : tree.roots) engine.process_root_child(*c);
    }
    emit_empty_left_pairs(left, right, cfg, out);
    out.join_ms = ms_since(join_start);
    finalize_output(out, index, gauge);
    return out;
}

JoinOutput join_opj(const Collection& left, const Collection& right, const ItemDictionary& dict,
                    const JoinConfig& cfg) {
    validate_config(cfg);
    JoinOutput out;
    MemoryGauge gauge;
    const std::uint32_t limit = resolve_limit(left, right, dict, cfg);
    out.limit_value = limit;

    const auto build_start = Clock::now();
    const PartitionMap left_parts = partition_by_first_item(left);
    const PartitionMap right_parts = partition_by_first_item(right);
    InvertedIndex index = make_inverted_index(dict.domain_size(), &gauge);
    std::size_t remaining = 0;
    for (const auto& group : left_parts.groups) {
        if (!group.empty()) ++remaining;
    }
    out.build_ms = ms_since(build_start);

    ClStats running;
    for (ItemId item = 0; item < left_parts.groups.size(); ++item) {
        if (remaining == 0) break;  // every left partition consumed

        if (item < right_parts.groups.size() && !right_parts.groups[item].empty()) {
            const auto append_start = Clock::now();
            for (Oid soid : right_parts.groups[item]) {
                const SetObject& s = right.objects[soid];
                append_object(index, static_cast<Oid>(index.indexed_count()), s.items, soid);
                if (s.size() >= limit) {
                    running.suffix_sum += s.size() - limit;
                    ++running.long_count;
                }
                ++running.size;
            }
            out.build_ms += ms_since(append_start);
        }

        const std::vector<Oid>& group = left_parts.groups[item];
        if (group.empty()) continue;

        const auto tree_start = Clock::now();
        PrefixTree tree = build_prefix_tree(left, group, limit, &gauge);
        out.build_ms += ms_since(tree_start);

        const auto join_start = Clock::now();
        {
            Engine engine{.left = left,
                          .right = right,
                          .index = index,
                          .cfg = cfg,
                          .limit = limit,
                          .n_s_est = index.indexed_count(),
                          .root_cl = running,
                          .out = out,
                          .gauge = gauge,
                          .hybrid = cfg.constants.hybrid_policy()};
            for (const auto& c : tree.roots) engine.process_root_child(*c);
        }
        out.join_ms += ms_since(join_start);
        delete_subtree(tree, item);
        --remaining;
    }
    emit_empty_left_pairs(left, right, cfg, out);
    finalize_output(out, index, gauge);
    return out;
}

JoinOutput run_join(const Collection& left, const Collection& right, const ItemDictionary& dict,
                    const JoinConfig& cfg) {
    return cfg.paradigm == Paradigm::Bulk ? join_bulk(left, right, dict, cfg)
                                          : join_opj(left, right, dict, cfg);
}

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Pretti: return "pretti";
        case Algorithm::Limit: return "limit";
        case Algorithm::LimitPlus: return "limit_plus";
    }
    return "pretti";
}

const char* paradigm_name(Paradigm p) {
    return p == Paradigm::Bulk ? "bulk" : "opj";
}

const char* intersect_name(IntersectKind k) {
    switch (k) {
        case IntersectKind::Merge: return "merge";
        case IntersectKind::Binary: return "binary";
        case IntersectKind::Hybrid: return "hybrid";
    }
    return "merge";
}

}  // namespace scj
