#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "ctsum/budget.hpp"
#include "ctsum/embedding.hpp"
#include "ctsum/scoring.hpp"
#include "ctsum/selection.hpp"
#include "ctsum/tree.hpp"

namespace ctsum {

// ours_final: document class tree, full score. ours_cs: same tree,
// commonality-specificity only. comp1: global centroid ranking.
// comp2/comp3: flat k-means, round-robin over clusters, with and without the
// outside-centroid term. comp4: class tree over sentences instead of
// documents.
enum class Method { ours_final, ours_cs, comp1, comp2, comp3, comp4 };

inline constexpr std::array<Method, 6> kAllMethods = {Method::ours_cs, Method::ours_final, Method::comp1,
                                                      Method::comp2,   Method::comp3,      Method::comp4};

Method parse_method(std::string_view name);
std::string_view method_name(Method method);

struct VariantSpec {
    Method kind = Method::ours_final;
    Hyperparams hp;
    Budget budget;
    std::uint64_t seed = 0;
    int max_nodes = 0;  // 0: derive from the budget
    int restarts = 3;
};

/// ceil(limit / mean sentence size) for the topic, in budget units, at least 1.
int auto_max_nodes(const EmbeddedTopic& topic, const Budget& budget);

Summary summarize_comp1(const EmbeddedTopic& topic, const Budget& budget);
Summary summarize_comp2(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                        std::uint64_t seed, int restarts = 3);
Summary summarize_comp3(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                        std::uint64_t seed, int restarts = 3);
Summary summarize_comp4(const EmbeddedTopic& topic, const Hyperparams& hp, const Budget& budget,
                        std::uint64_t seed, int max_nodes = 0, int restarts = 3);

/// Dispatches on spec.kind. For ours_final and ours_cs, the document class
/// tree is moved into `tree_out` when given.
Summary summarize(const EmbeddedTopic& topic, const VariantSpec& spec, ClassTree* tree_out = nullptr);

}  // namespace ctsum
