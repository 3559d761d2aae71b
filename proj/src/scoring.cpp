#include "ctsum/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctsum/error.hpp"

namespace ctsum {

namespace {

double clamped_sim(std::span<const double> a, std::span<const double> b) {
    return std::clamp(cosine_similarity(a, b), 0.0, 1.0);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void Hyperparams::validate() const {
    if (!in_unit(delta) || !in_unit(alpha) || !in_unit(beta) || !in_unit(gamma)) {
        throw InputError("hyperparameters delta, alpha, beta, gamma must lie in [0,1]");
    }
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-9) {
        throw InputError("alpha + beta + gamma must equal 1, got " + std::to_string(alpha + beta + gamma));
    }
    if (k_first < 2 || k_rest < 2) throw InputError("k must be >= 2");
}

Hyperparams Hyperparams::cs_only() const {
    Hyperparams hp = *this;
    hp.alpha = 1.0;
    hp.beta = 0.0;
    hp.gamma = 0.0;
    return hp;
}

NodeCentroids node_centroids(std::span<const Vector> pool, std::span<const int> members) {
    NodeCentroids out;
    out.inside = centroid(pool, members);
    std::vector<bool> is_member(pool.size(), false);
    for (int m : members) is_member[static_cast<std::size_t>(m)] = true;
    std::vector<int> rest;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!is_member[i]) rest.push_back(static_cast<int>(i));
    }
    if (!rest.empty()) out.outside = centroid(pool, rest);
    return out;
}

double score_cs(std::span<const double> sentence, const NodeCentroids& centroids, double delta) {
    double inside = clamped_sim(sentence, centroids.inside);
    double outside_term = 1.0;
    if (centroids.outside) outside_term = 1.0 - clamped_sim(sentence, *centroids.outside);
    return std::clamp(delta * inside + (1.0 - delta) * outside_term, 0.0, 1.0);
}

double score_nr(std::span<const double> sentence, std::span<const Vector> selected) {
    double worst = 0.0;
    for (const auto& s : selected) worst = std::max(worst, clamped_sim(sentence, s));
    return 1.0 - worst;
}

double score_position(int position, int doc_sentence_count) {
    return std::max(0.5, std::exp(-static_cast<double>(position) / std::cbrt(static_cast<double>(doc_sentence_count))));
}

double score_final(double cs, double nr, double pos, const Hyperparams& hp) {
    return std::clamp(hp.alpha * cs + hp.beta * nr + hp.gamma * pos, 0.0, 1.0);
}

}  // namespace ctsum
