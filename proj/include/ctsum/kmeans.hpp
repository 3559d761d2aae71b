#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctsum/embedding.hpp"

namespace ctsum {

struct KMeansOptions {
    int k = 2;
    std::uint64_t seed = 0;
    int restarts = 3;
    int max_iters = 100;
};

struct KMeansResult {
    // False when the points cannot be split into k non-empty clusters
    // (fewer than k distinct points, or an empty cluster that survived
    // repair). The remaining fields are empty in that case.
    bool divisible = false;
    std::vector<int> assignments;  // cluster in [0, k) per point
    std::vector<Vector> centroids;
    double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding, best inertia over `restarts`.
/// Clusters are numbered by their smallest member index, so the labelling
/// is canonical. Deterministic in (points, options).
KMeansResult kmeans(std::span<const Vector> points, const KMeansOptions& options);

/// Within-cluster sum of squared distances to each cluster's mean.
double partition_inertia(std::span<const Vector> points, std::span<const int> assignments, int k);

std::size_t distinct_count(std::span<const Vector> points);

}  // namespace ctsum
