#pragma once

#include <span>
#include <string>
#include <vector>

#include "ctsum/budget.hpp"
#include "ctsum/embedding.hpp"
#include "ctsum/scoring.hpp"
#include "ctsum/tree.hpp"

namespace ctsum {

enum class ScoringMode { cs_only, final };

/// Size of a sentence in budget units.
long budget_size(const Sentence& sentence, const Budget& budget);

/// One node of a visiting plan: the sentences it may contribute and the
/// centroids they are scored against.
struct PlanNode {
    int node_id = 0;
    std::vector<int> candidates;  // flat sentence ids
    NodeCentroids centroids;
};

/// Nodes in visiting order.
struct SelectionPlan {
    std::vector<PlanNode> nodes;

    std::vector<int> node_order() const;
};

/// Plan over a document class tree: a node may contribute the sentences of
/// its member documents; centroids are means of document vectors.
SelectionPlan document_tree_plan(const ClassTree& tree, const EmbeddedTopic& topic);

struct Selection {
    int sentence = 0;  // flat id
    int node_id = 0;
    int iteration = 1;
};

struct SelectionState {
    std::vector<Selection> selected;
    std::vector<Vector> selected_vectors;
    long consumed = 0;
    int iteration = 1;
    bool exhausted = false;  // every candidate taken before the budget was met
};

struct SummarySentence {
    int sentence = 0;
    int node_id = 0;
    std::string doc_id;
    int doc_index = 0;
    int sent_index = 0;
    int position = 1;
    std::string text;
};

struct Summary {
    std::string topic_id;
    std::vector<SummarySentence> sentences;
    std::string text;  // sentence texts joined by single spaces
};

struct Candidate {
    int sentence = 0;
    int doc_index = 0;
    int sent_index = 0;
    double score = 0.0;
};

/// Highest score; exact ties go to the lower doc_index, then the lower
/// sent_index. Returns the winner's flat sentence id.
int break_ties(std::span<const Candidate> candidates);

/// Visits plan nodes in order, taking the best unselected candidate of each
/// node per pass, and restarts from the first node until the budget is
/// reached or every candidate is taken. The sentence that crosses the
/// budget is kept.
SelectionState run_selection(const SelectionPlan& plan, const EmbeddedTopic& topic, const Hyperparams& hp,
                             const Budget& budget, ScoringMode mode);

/// Sorts selections by the position of their node in `node_order`, then by
/// selection sequence.
Summary order_summary(const SelectionState& state, std::span<const int> node_order, const EmbeddedTopic& topic);

Summary select_summary(const ClassTree& tree, const EmbeddedTopic& topic, const Hyperparams& hp,
                       const Budget& budget, ScoringMode mode);

}  // namespace ctsum
