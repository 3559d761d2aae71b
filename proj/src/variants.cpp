#include "ctsum/variants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ctsum/error.hpp"
#include "ctsum/kmeans.hpp"

namespace ctsum {

namespace {

// Flat clustering of documents, clusters in size-descending order.
std::vector<std::vector<int>> flat_document_clusters(const EmbeddedTopic& topic, int k, std::uint64_t seed,
                                                     int restarts) {
    std::vector<int> all(topic.document_vectors.size());
    std::iota(all.begin(), all.end(), 0);
    if (all.size() < 2) return {all};

    KMeansOptions km;
    km.k = k;
    km.seed = seed;
    km.restarts = restarts;
    auto result = kmeans(topic.document_vectors, km);
    if (!result.divisible) return {all};

    std::vector<std::vector<int>> clusters(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < result.assignments.size(); ++i) {
        clusters[static_cast<std::size_t>(result.assignments[i])].push_back(static_cast<int>(i));
    }
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return clusters;
}

Summary cluster_round_robin(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                            std::uint64_t seed, int restarts, bool outside_term) {
    auto clusters = flat_document_clusters(topic, hp.k_first, seed, restarts);
    SelectionPlan plan;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        PlanNode node;
        node.node_id = static_cast<int>(c);
        for (int doc : clusters[c]) {
            const auto& ids = topic.doc_sentences[static_cast<std::size_t>(doc)];
            node.candidates.insert(node.candidates.end(), ids.begin(), ids.end());
        }
        node.centroids = node_centroids(topic.document_vectors, clusters[c]);
        if (!outside_term) node.centroids.outside.reset();
        plan.nodes.push_back(std::move(node));
    }
    Hyperparams scoring = hp.cs_only();
    if (!outside_term) scoring.delta = 1.0;
    auto state = run_selection(plan, topic, scoring, budget, ScoringMode::cs_only);
    return order_summary(state, plan.node_order(), topic);
}

}  // namespace

Method parse_method(std::string_view name) {
    if (name == "ours-final" || name == "ours_final") return Method::ours_final;
    if (name == "ours-cs" || name == "ours_cs") return Method::ours_cs;
    if (name == "comp1") return Method::comp1;
    if (name == "comp2") return Method::comp2;
    if (name == "comp3") return Method::comp3;
    if (name == "comp4") return Method::comp4;
    throw InputError("unknown method: " + std::string(name));
}

std::string_view method_name(Method method) {
    switch (method) {
        case Method::ours_final: return "ours-final";
        case Method::ours_cs: return "ours-cs";
        case Method::comp1: return "comp1";
        case Method::comp2: return "comp2";
        case Method::comp3: return "comp3";
        case Method::comp4: return "comp4";
    }
    return "unknown";
}

int auto_max_nodes(const EmbeddedTopic& topic, const Budget& budget) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& doc : topic.topic.documents) {
        for (const auto& s : doc.sentences) {
            total += static_cast<double>(budget_size(s, budget));
            ++count;
        }
    }
    if (count == 0 || total <= 0.0) return 1;
    double estimate = estimate_sentence_budget(static_cast<double>(budget.limit), total / static_cast<double>(count));
    return std::max(1, static_cast<int>(std::ceil(estimate - 1e-9)));
}

Summary summarize_comp1(const EmbeddedTopic& topic, const Budget& budget) {
    PlanNode node;
    node.node_id = 0;
    node.candidates.resize(topic.sentences.size());
    std::iota(node.candidates.begin(), node.candidates.end(), 0);
    node.centroids.inside = centroid(topic.document_vectors);
    SelectionPlan plan;
    plan.nodes.push_back(std::move(node));

    Hyperparams hp;
    hp = hp.cs_only();
    hp.delta = 1.0;
    auto state = run_selection(plan, topic, hp, budget, ScoringMode::cs_only);
    return order_summary(state, plan.node_order(), topic);
}

Summary summarize_comp2(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                        std::uint64_t seed, int restarts) {
    return cluster_round_robin(topic, hp, budget, seed, restarts, true);
}

Summary summarize_comp3(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                        std::uint64_t seed, int restarts) {
    return cluster_round_robin(topic, hp, budget, seed, restarts, false);
}

Summary summarize_comp4(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                        std::uint64_t seed, int max_nodes, int restarts) {
    TreeOptions opts;
    opts.k_first = hp.k_first;
    opts.k_rest = hp.k_rest;
    opts.max_nodes = max_nodes > 0 ? max_nodes : auto_max_nodes(topic, budget);
    opts.seed = seed;
    opts.restarts = restarts;
    auto tree = build_class_tree(topic.sentence_vectors, opts);

    SelectionPlan plan;
    for (int id : tree.traversal_order) {
        const auto& n = tree.node(id);
        PlanNode node;
        node.node_id = id;
        node.candidates = n.members;
        node.centroids = node_centroids(topic.sentence_vectors, n.members);
        plan.nodes.push_back(std::move(node));
    }
    auto state = run_selection(plan, topic, hp.cs_only(), budget, ScoringMode::cs_only);
    return order_summary(state, tree.traversal_order, topic);
}

Summary summarize(const EmbeddedTopic& topic, const VariantSpec& spec, ClassTree* tree_out) {
    spec.hp.validate();
    switch (spec.kind) {
        case Method::comp1: return summarize_comp1(topic, spec.budget);
        case Method::comp2: return summarize_comp2(topic, spec.hp, spec.budget, spec.seed, spec.restarts);
        case Method::comp3: return summarize_comp3(topic, spec.hp, spec.budget, spec.seed, spec.restarts);
        case Method::comp4:
            return summarize_comp4(topic, spec.hp, spec.budget, spec.seed, spec.max_nodes, spec.restarts);
        case Method::ours_cs:
        case Method::ours_final: break;
    }
    TreeOptions opts;
    opts.k_first = spec.hp.k_first;
    opts.k_rest = spec.hp.k_rest;
    opts.max_nodes = spec.max_nodes > 0 ? spec.max_nodes : auto_max_nodes(topic, spec.budget);
    opts.seed = spec.seed;
    opts.restarts = spec.restarts;
    auto tree = build_class_tree(topic.document_vectors, opts);
    Summary summary = spec.kind == Method::ours_cs
                          ? select_summary(tree, topic, spec.hp.cs_only(), spec.budget, ScoringMode::cs_only)
                          : select_summary(tree, topic, spec.hp, spec.budget, ScoringMode::final);
    if (tree_out) *tree_out = std::move(tree);
    return summary;
}

}  // namespace ctsum
