#include "ctsum/tree.hpp"

#include <algorithm>
#include <numeric>

#include "ctsum/error.hpp"
#include "ctsum/kmeans.hpp"

namespace ctsum {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

int ClassTree::depth() const {
    int d = 0;
    for (const auto& n : nodes) d = std::max(d, n.layer);
    return d;
}

std::vector<int> traversal_order(const std::vector<ClassTreeNode>& nodes) {
    std::vector<int> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& na = nodes[static_cast<std::size_t>(a)];
        const auto& nb = nodes[static_cast<std::size_t>(b)];
        if (na.layer != nb.layer) return na.layer < nb.layer;
        if (na.size() != nb.size()) return na.size() > nb.size();
        return na.members.front() < nb.members.front();
    });
    return order;
}

ClassTree build_class_tree(std::span<const Vector> items, const TreeOptions& options) {
    if (items.empty()) throw InputError("build_class_tree: no items");
    if (options.k_first < 2 || options.k_rest < 2) throw InputError("build_class_tree: k must be >= 2");
    if (options.max_nodes < 1) throw InputError("build_class_tree: max_nodes must be >= 1");

    ClassTree tree;
    ClassTreeNode root;
    root.members.resize(items.size());
    std::iota(root.members.begin(), root.members.end(), 0);
    tree.nodes.push_back(std::move(root));

    std::vector<int> frontier{0};
    int layer = 1;
    bool budget_reached = tree.node_count() >= static_cast<std::size_t>(options.max_nodes);
    while (!budget_reached && !frontier.empty()) {
        const int k = layer == 1 ? options.k_first : options.k_rest;
        // Larger nodes are split first, so a budget stop mid-layer leaves the
        // smaller nodes of the layer as leaves.
        std::vector<int> ordered = frontier;
        std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
            const auto& na = tree.node(a);
            const auto& nb = tree.node(b);
            if (na.size() != nb.size()) return na.size() > nb.size();
            return na.members.front() < nb.members.front();
        });

        std::vector<int> next;
        for (int id : ordered) {
            const auto members = tree.node(id).members;
            if (members.size() < 2) continue;
            std::vector<Vector> points;
            points.reserve(members.size());
            for (int m : members) points.push_back(items[static_cast<std::size_t>(m)]);

            KMeansOptions km;
            km.k = k;
            km.seed = splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(id)));
            km.restarts = options.restarts;
            km.max_iters = options.max_iters;
            auto split = kmeans(points, km);
            if (!split.divisible) continue;

            for (int c = 0; c < k; ++c) {
                ClassTreeNode child;
                child.node_id = static_cast<int>(tree.nodes.size());
                child.layer = layer + 1;
                child.parent = id;
                for (std::size_t i = 0; i < members.size(); ++i) {
                    if (split.assignments[i] == c) child.members.push_back(members[i]);
                }
                tree.nodes[static_cast<std::size_t>(id)].children.push_back(child.node_id);
                next.push_back(child.node_id);
                tree.nodes.push_back(std::move(child));
            }
            if (tree.node_count() >= static_cast<std::size_t>(options.max_nodes)) {
                budget_reached = true;
                break;
            }
        }
        frontier = std::move(next);
        ++layer;
    }
    tree.traversal_order = traversal_order(tree.nodes);
    return tree;
}

double estimate_sentence_budget(double avg_target_summary_len, double avg_source_sentence_len) {
    if (!(avg_target_summary_len > 0.0) || !(avg_source_sentence_len > 0.0)) {
        throw InputError("estimate_sentence_budget: lengths must be positive");
    }
    return avg_target_summary_len / avg_source_sentence_len;
}

nlohmann::json tree_to_json(const ClassTree& tree, const std::vector<std::string>& labels) {
    std::vector<int> position(tree.node_count(), 0);
    for (std::size_t i = 0; i < tree.traversal_order.size(); ++i) {
        position[static_cast<std::size_t>(tree.traversal_order[i])] = static_cast<int>(i);
    }
    auto nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        nlohmann::json members = nlohmann::json::array();
        for (int m : n.members) {
            members.push_back(static_cast<std::size_t>(m) < labels.size() ? labels[static_cast<std::size_t>(m)]
                                                                          : std::to_string(m));
        }
        nodes.push_back({{"node_id", n.node_id},
                         {"layer", n.layer},
                         {"parent", n.parent},
                         {"members", members},
                         {"children", n.children},
                         {"traversal_position", position[static_cast<std::size_t>(n.node_id)]}});
    }
    return {{"node_count", tree.node_count()}, {"traversal_order", tree.traversal_order}, {"nodes", nodes}};
}

}  // namespace ctsum
