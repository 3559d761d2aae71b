#pragma once

#include <optional>
#include <span>

#include "ctsum/embedding.hpp"

namespace ctsum {

struct Hyperparams {
    double delta = 0.9;  // weight of in-node similarity in the commonality-specificity score
    double alpha = 0.8;  // commonality-specificity weight
    double beta = 0.1;   // non-redundancy weight
    double gamma = 0.1;  // position weight
    int k_first = 3;
    int k_rest = 2;

    /// Throws InputError when a weight leaves [0,1], alpha+beta+gamma != 1
    /// (within 1e-9) or a k is below 2.
    void validate() const;

    /// Same delta and k, alpha=1, beta=gamma=0.
    Hyperparams cs_only() const;

    bool operator==(const Hyperparams&) const = default;
};

struct NodeCentroids {
    Vector inside;
    std::optional<Vector> outside;  // absent when the node holds every item
};

/// Mean of the member vectors, and of the non-member vectors when there are any.
NodeCentroids node_centroids(std::span<const Vector> pool, std::span<const int> members);

/// delta * sim(s, inside) + (1 - delta) * (1 - sim(s, outside)), with both
/// cosines clamped to [0,1]. Without an outside centroid the second term is
/// the constant (1 - delta).
double score_cs(std::span<const double> sentence, const NodeCentroids& centroids, double delta);

/// 1 - max clamped cosine to the already-selected vectors; 1 when none.
double score_nr(std::span<const double> sentence, std::span<const Vector> selected);

/// max(0.5, exp(-position / cbrt(doc_sentence_count))), position 1-based.
double score_position(int position, int doc_sentence_count);

double score_final(double cs, double nr, double pos, const Hyperparams& hp);

}  // namespace ctsum
