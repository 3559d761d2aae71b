#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctsum/embedding.hpp"

namespace ctsum {

struct ClassTreeNode {
    int node_id = 0;
    int layer = 1;  // root is layer 1
    int parent = -1;
    std::vector<int> members;  // item indices, ascending
    std::vector<int> children;

    std::size_t size() const { return members.size(); }
};

/// Nodes are stored flat; node_id is the index into `nodes` and the root is
/// node 0. `traversal_order` lists node ids by layer ascending, then size
/// descending, then smallest member ascending.
struct ClassTree {
    std::vector<ClassTreeNode> nodes;
    std::vector<int> traversal_order;

    const ClassTreeNode& root() const { return nodes.front(); }
    const ClassTreeNode& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }
    std::size_t node_count() const { return nodes.size(); }
    int depth() const;
};

struct TreeOptions {
    int k_first = 3;  // split of the root into layer 2
    int k_rest = 2;   // splits into layer 3 and deeper
    int max_nodes = 5;
    std::uint64_t seed = 0;
    int restarts = 3;
    int max_iters = 100;
};

/// Top-down k-means over `items` (document or sentence vectors). Stops when
/// no node of the newest layer can be divided, or as soon as the node count
/// reaches `max_nodes`; the split that reaches it is kept, so the tree holds
/// at most max_nodes + max(k) - 1 nodes.
ClassTree build_class_tree(std::span<const Vector> items, const TreeOptions& options);

/// Expected number of summary sentences: average target summary length over
/// average source sentence length (same unit). Throws InputError unless
/// both are positive.
double estimate_sentence_budget(double avg_target_summary_len, double avg_source_sentence_len);

/// Sorts node ids into traversal order.
std::vector<int> traversal_order(const std::vector<ClassTreeNode>& nodes);

/// Debug rendering; `labels[i]` names item i.
nlohmann::json tree_to_json(const ClassTree& tree, const std::vector<std::string>& labels);

}  // namespace ctsum
