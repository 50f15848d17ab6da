#include "scj/index.hpp"

#include <algorithm>
#include <stdexcept>

namespace scj {

namespace {

PrefixTreeNode* find_or_insert_child(std::vector<std::unique_ptr<PrefixTreeNode>>& children,
                                     ItemId item, std::uint32_t depth, PrefixTree& tree) {
    auto it = std::lower_bound(children.begin(), children.end(), item,
                               [](const std::unique_ptr<PrefixTreeNode>& n, ItemId v) {
                                   return n->item < v;
                               });
    if (it != children.end() && (*it)->item == item) return it->get();
    auto node = std::make_unique<PrefixTreeNode>();
    node->item = item;
    node->depth = depth;
    PrefixTreeNode* raw = node.get();
    children.insert(it, std::move(node));
    ++tree.node_count;
    if (tree.gauge) tree.gauge->add(MemoryGauge::kNodeBytes);
    return raw;
}

std::uint64_t subtree_logical_bytes(const PrefixTreeNode& node) {
    std::uint64_t bytes = MemoryGauge::kNodeBytes +
                          MemoryGauge::kEntryBytes * (node.rl_eq.size() + node.rl_super.size());
    for (const auto& child : node.children) bytes += subtree_logical_bytes(*child);
    return bytes;
}

std::size_t subtree_node_count(const PrefixTreeNode& node) {
    std::size_t n = 1;
    for (const auto& child : node.children) n += subtree_node_count(*child);
    return n;
}

}  // namespace

const PrefixTreeNode* PrefixTreeNode::find_child(ItemId item) const {
    auto it = std::lower_bound(children.begin(), children.end(), item,
                               [](const std::unique_ptr<PrefixTreeNode>& n, ItemId v) {
                                   return n->item < v;
                               });
    return (it != children.end() && (*it)->item == item) ? it->get() : nullptr;
}

const PrefixTreeNode* PrefixTree::find_root(ItemId item) const {
    auto it = std::lower_bound(roots.begin(), roots.end(), item,
                               [](const std::unique_ptr<PrefixTreeNode>& n, ItemId v) {
                                   return n->item < v;
                               });
    return (it != roots.end() && (*it)->item == item) ? it->get() : nullptr;
}

namespace {

void insert_object(PrefixTree& tree, const SetObject& object, std::uint32_t limit,
                   MemoryGauge* gauge) {
    if (object.empty()) return;
    const std::uint32_t len = static_cast<std::uint32_t>(object.size());
    const std::uint32_t stop = std::min(len, limit);
    const std::uint64_t suffix = len > limit ? len - limit : 0;
    const std::uint64_t is_long = len >= limit ? 1 : 0;

    PrefixTreeNode* node = nullptr;
    auto* children = &tree.roots;
    for (std::uint32_t d = 1; d <= stop; ++d) {
        node = find_or_insert_child(*children, object.items[d - 1], d, tree);
        node->agg_count += 1;
        node->agg_suffix_sum += suffix;
        node->agg_long_count += is_long;
        children = &node->children;
    }
    if (len <= limit) {
        node->rl_eq.push_back(object.oid);
    } else {
        node->rl_super.push_back(object.oid);
    }
    if (gauge) gauge->add(MemoryGauge::kEntryBytes);
    ++tree.object_count;
}

}  // namespace

PrefixTree build_prefix_tree(std::span<const SetObject> objects, std::uint32_t limit,
                             MemoryGauge* gauge) {
    if (limit < 1) throw std::runtime_error("limit must be >= 1");
    PrefixTree tree;
    tree.limit = limit;
    tree.gauge = gauge;
    for (const SetObject& object : objects) insert_object(tree, object, limit, gauge);
    return tree;
}

PrefixTree build_prefix_tree(const Collection& collection, std::span<const Oid> oids,
                             std::uint32_t limit, MemoryGauge* gauge) {
    if (limit < 1) throw std::runtime_error("limit must be >= 1");
    PrefixTree tree;
    tree.limit = limit;
    tree.gauge = gauge;
    for (Oid oid : oids) insert_object(tree, collection.objects[oid], limit, gauge);
    return tree;
}

void delete_subtree(PrefixTree& tree, ItemId item) {
    auto it = std::lower_bound(tree.roots.begin(), tree.roots.end(), item,
                               [](const std::unique_ptr<PrefixTreeNode>& n, ItemId v) {
                                   return n->item < v;
                               });
    if (it == tree.roots.end() || (*it)->item != item) return;
    if (tree.gauge) tree.gauge->sub(subtree_logical_bytes(**it));
    tree.node_count -= subtree_node_count(**it);
    tree.object_count -= (*it)->agg_count;
    tree.roots.erase(it);
}

InvertedIndex make_inverted_index(std::size_t domain_size, MemoryGauge* gauge) {
    InvertedIndex index;
    index.postings.resize(domain_size);
    index.gauge = gauge;
    return index;
}

void append_object(InvertedIndex& index, Oid seq, std::span<const ItemId> items, Oid original) {
    // Sequence numbers must continue the append order, or postings lose their
    // ascending invariant.
    if (seq != index.lengths.size()) throw std::runtime_error("out-of-order append");
    for (ItemId item : items) {
        if (item >= index.postings.size()) index.postings.resize(item + 1);
        index.postings[item].push_back(seq);
    }
    index.total_postings += items.size();
    index.lengths.push_back(static_cast<std::uint32_t>(items.size()));
    index.original_oid.push_back(original);
    if (index.gauge) {
        index.gauge->add(MemoryGauge::kEntryBytes * items.size() + MemoryGauge::kObjectMetaBytes);
    }
}

void extend_inverted_index(InvertedIndex& index, std::span<const SetObject> partition) {
    for (const SetObject& object : partition) {
        append_object(index, object.oid, object.items, object.oid);
    }
}

InvertedIndex build_inverted_index(std::span<const SetObject> objects, std::size_t domain_size,
                                   MemoryGauge* gauge) {
    InvertedIndex index = make_inverted_index(domain_size, gauge);
    extend_inverted_index(index, objects);
    return index;
}

}  // namespace scj
