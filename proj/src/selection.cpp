#include "ctsum/selection.hpp"

#include <algorithm>
#include <unordered_map>

#include "ctsum/error.hpp"

namespace ctsum {

long budget_size(const Sentence& sentence, const Budget& budget) {
    return budget.unit == BudgetUnit::words ? sentence.word_count : sentence.byte_length;
}

std::vector<int> SelectionPlan::node_order() const {
    std::vector<int> order;
    order.reserve(nodes.size());
    for (const auto& n : nodes) order.push_back(n.node_id);
    return order;
}

SelectionPlan document_tree_plan(const ClassTree& tree, const EmbeddedTopic& topic) {
    SelectionPlan plan;
    for (int id : tree.traversal_order) {
        const auto& node = tree.node(id);
        PlanNode pn;
        pn.node_id = id;
        for (int doc : node.members) {
            const auto& ids = topic.doc_sentences[static_cast<std::size_t>(doc)];
            pn.candidates.insert(pn.candidates.end(), ids.begin(), ids.end());
        }
        pn.centroids = node_centroids(topic.document_vectors, node.members);
        plan.nodes.push_back(std::move(pn));
    }
    return plan;
}

int break_ties(std::span<const Candidate> candidates) {
    if (candidates.empty()) throw InputError("break_ties: no candidates");
    const Candidate* best = &candidates.front();
    for (const auto& c : candidates.subspan(1)) {
        if (c.score > best->score ||
            (c.score == best->score &&
             (c.doc_index < best->doc_index || (c.doc_index == best->doc_index && c.sent_index < best->sent_index)))) {
            best = &c;
        }
    }
    return best->sentence;
}

SelectionState run_selection(const SelectionPlan& plan, const EmbeddedTopic& topic, const Hyperparams& hp,
                             const Budget& budget, ScoringMode mode) {
    if (plan.nodes.empty()) throw InputError("selection: empty tree");
    if (budget.limit < 1) throw InputError("selection: budget limit must be >= 1");

    // Commonality-specificity and position scores do not change between
    // passes; cache them per (node, candidate).
    struct Cached {
        double cs;
        double pos;
    };
    std::vector<std::vector<Cached>> cache(plan.nodes.size());
    for (std::size_t n = 0; n < plan.nodes.size(); ++n) {
        const auto& node = plan.nodes[n];
        cache[n].reserve(node.candidates.size());
        for (int s : node.candidates) {
            const auto& sent = topic.sentence(s);
            int count = static_cast<int>(topic.document_of(s).sentences.size());
            cache[n].push_back({score_cs(topic.sentence_vectors[static_cast<std::size_t>(s)], node.centroids, hp.delta),
                                score_position(sent.position, count)});
        }
    }

    SelectionState state;
    std::vector<bool> taken(topic.sentences.size(), false);
    std::vector<Candidate> pool;
    while (true) {
        bool progressed = false;
        for (std::size_t n = 0; n < plan.nodes.size(); ++n) {
            const auto& node = plan.nodes[n];
            pool.clear();
            for (std::size_t i = 0; i < node.candidates.size(); ++i) {
                int s = node.candidates[i];
                if (taken[static_cast<std::size_t>(s)]) continue;
                const auto& c = cache[n][i];
                double score = c.cs;
                if (mode == ScoringMode::final) {
                    double nr = score_nr(topic.sentence_vectors[static_cast<std::size_t>(s)], state.selected_vectors);
                    score = score_final(c.cs, nr, c.pos, hp);
                }
                const auto& ref = topic.sentences[static_cast<std::size_t>(s)];
                pool.push_back({s, ref.doc_index, ref.sent_index, score});
            }
            if (pool.empty()) continue;

            int chosen = break_ties(pool);
            taken[static_cast<std::size_t>(chosen)] = true;
            state.selected.push_back({chosen, node.node_id, state.iteration});
            state.selected_vectors.push_back(topic.sentence_vectors[static_cast<std::size_t>(chosen)]);
            state.consumed += budget_size(topic.sentence(chosen), budget);
            progressed = true;
            if (state.consumed >= budget.limit) return state;
        }
        if (!progressed) {
            state.exhausted = true;
            return state;
        }
        ++state.iteration;
    }
}

Summary order_summary(const SelectionState& state, std::span<const int> node_order, const EmbeddedTopic& topic) {
    std::unordered_map<int, std::size_t> rank;
    for (std::size_t i = 0; i < node_order.size(); ++i) rank.emplace(node_order[i], i);

    std::vector<std::size_t> idx(state.selected.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return rank.at(state.selected[a].node_id) < rank.at(state.selected[b].node_id);
    });

    Summary summary;
    summary.topic_id = topic.topic.topic_id;
    for (std::size_t i : idx) {
        const auto& sel = state.selected[i];
        const auto& ref = topic.sentences[static_cast<std::size_t>(sel.sentence)];
        const auto& doc = topic.topic.documents[static_cast<std::size_t>(ref.doc_index)];
        const auto& sent = doc.sentences[static_cast<std::size_t>(ref.sent_index)];
        summary.sentences.push_back(
            {sel.sentence, sel.node_id, doc.doc_id, ref.doc_index, ref.sent_index, sent.position, sent.text});
        if (!summary.text.empty()) summary.text += ' ';
        summary.text += sent.text;
    }
    return summary;
}

Summary select_summary(const ClassTree& tree, const EmbeddedTopic& topic, const Hyperparams& hp,
                       const Budget& budget, ScoringMode mode) {
    if (tree.nodes.empty()) throw InputError("selection: empty tree");
    auto plan = document_tree_plan(tree, topic);
    auto state = run_selection(plan, topic, hp, budget, mode);
    return order_summary(state, tree.traversal_order, topic);
}

}  // namespace ctsum
